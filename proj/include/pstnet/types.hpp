#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace pstnet {

using Site = std::size_t;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Exact rational used for eigenphases (in turns) and time fractions t/tau.
using Fraction = boost::rational<std::int64_t>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces a rational number of turns into [0, 1).
Fraction wrap_turns(Fraction turns);

/// exp(i 2 pi turns), evaluated after exact reduction mod 1.
Complex unit_phase(Fraction turns);

/// "p/q" ("p" when q == 1).
std::string to_string(const Fraction& f);

/// Parses "p/q" or "p"; throws std::invalid_argument on malformed text.
Fraction parse_fraction(const std::string& text);

/// Complex number as "re+im i" with 12 significant digits, e.g. "1.5-0.25i".
std::string format_complex(Complex z);

/// Row-major dump, one row per line, entries separated by single spaces.
std::string format_matrix(const ComplexMatrix& m);

/// max |U U^dagger - I| entrywise.
double unitarity_defect(const ComplexMatrix& u);

}  // namespace pstnet
