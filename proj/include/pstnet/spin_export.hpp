#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pstnet/bus_designer.hpp"
#include "pstnet/spectral_hamiltonian.hpp"
#include "pstnet/types.hpp"

namespace pstnet {

/// XY spin network equivalent to a one-excitation hopping matrix:
///
///   H = sum_m onsite_m |+><+|_m
///     + sum_{m>n} J_mn/2 (X_m X_n + Y_m Y_n) + Jp_mn/2 (X_m Y_n - Y_m X_n)
///
/// with X = |-><+| + |+><-|, Y = i(|-><+| - |+><-|) and the all-down ground
/// state at zero energy. In the basis where |m> carries the excitation on
/// spin m this gives <m|H|n> = J_mn + i Jp_mn.
struct XYModel {
  std::size_t d = 0;
  double tau = 1.0;
  std::vector<double> onsite;
  RealMatrix J;   // symmetric, zero diagonal
  RealMatrix Jp;  // antisymmetric, zero diagonal

  static XYModel zero(std::size_t d, double tau = 1.0);
};

XYModel to_xy(const PstHamiltonian& h);
XYModel to_xy(const ComplexMatrix& hermitian, double tau = 1.0);

/// Inverse of to_xy. Throws std::invalid_argument when J is not symmetric or
/// Jp not antisymmetric (1e-12), or the table sizes disagree with d.
ComplexMatrix from_xy(const XYModel& m);

/// Couplings of the five-site bus written directly in terms of the integers
/// and the phase-0 mixing (a, b). Throws std::invalid_argument unless
/// |a|^2+|b|^2 = 1.
XYModel five_site_xy_closed_form(const FiveSiteIntegers& x, Complex alpha, Complex beta,
                                 double tau = 1.0);

/// Coupling table: "d tau", then "m n J Jp" for m > n with a nonzero entry,
/// then "m onsite"; values in 12 significant digits.
void write_coupling_table(const XYModel& m, std::ostream& out);
std::string format_coupling_table(const XYModel& m);

/// Parses the coupling table format. Throws std::invalid_argument with the
/// offending line number.
XYModel parse_coupling_table(const std::string& text);

}  // namespace pstnet
