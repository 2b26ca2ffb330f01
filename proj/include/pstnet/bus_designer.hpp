#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pstnet/permutation.hpp"
#include "pstnet/spectral_hamiltonian.hpp"
#include "pstnet/types.hpp"

namespace pstnet {

// ---------------------------------------------------------------------------
// Schedules

struct Stop {
  Site site = 0;
  /// Arrival time as a fraction of tau, in (0, 1].
  Fraction at;

  bool operator==(const Stop&) const = default;
};

/// Source node plus the ordered stops of a bus. Fractions strictly increase
/// and end at exactly 1; no site appears twice.
struct TransferSchedule {
  Site source = 0;
  std::vector<Stop> stops;

  /// Throws std::invalid_argument when an invariant is broken, and
  /// std::out_of_range when a site is >= d.
  void validate(std::size_t d) const;
  /// Source first, then stops in transfer order.
  std::vector<Site> logical_sites() const;

  bool operator==(const TransferSchedule&) const = default;
};

/// Stops `sites` at equally spaced fractions j / sites.size().
TransferSchedule equally_spaced_schedule(Site source, std::span<const Site> sites);

// ---------------------------------------------------------------------------
// Universal bus

/// Single d-cycle sending 0 to d-1 and m+1 to m.
Permutation universal_bus_permutation(std::size_t d);

/// Source 0, stop m at m/(d-1) for m = 1..d-1.
TransferSchedule universal_bus_schedule(std::size_t d);

/// x_n = c + n + (d-1) f(n) on the single cycle of universal_bus_permutation.
/// Throws std::invalid_argument for d < 2.
SpectrumSpec universal_bus_spectrum(std::size_t d, const std::function<std::int64_t(std::size_t)>& f,
                                    std::int64_t c);

/// Closed-form <m|U(t)|0> on the universal bus with integers x[n], n = 0..d-1,
/// at t = fraction * tau.
Complex universal_bus_element(std::span<const std::int64_t> x, Site m, Fraction fraction);

// ---------------------------------------------------------------------------
// Verification

/// Exact PST test from `from` to `to` at t = fraction * tau, by phase
/// alignment in rational arithmetic. Requires identity mixing (throws
/// std::invalid_argument otherwise) and an x entry for every slot.
bool exact_transfer(const Permutation& p, const SpectrumSpec& spec, Site from, Site to,
                    Fraction fraction);

struct StopCheck {
  Stop stop;
  double magnitude = 0.0;
  /// Rational verdict; empty when the mixing is not the identity.
  std::optional<bool> exact;
  bool passed = false;
};

struct ScheduleCheck {
  std::vector<StopCheck> stops;
  bool permutation_ok = false;

  bool passed() const;
};

/// Checks every stop both exactly (identity mixing only) and in floating
/// point (|<stop|U|source>| within 1e-9 of 1), plus U(tau) == p.
ScheduleCheck verify_schedule(const Permutation& p, const SpectrumSpec& spec,
                              const TransferSchedule& schedule);

// ---------------------------------------------------------------------------
// Subset bus design

/// Raised when the request cannot describe a bus on `p` at all.
class DesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DesignMethod { EquallySpacedOrbit, Search };

std::string to_string(DesignMethod m);

struct DesignOutcome {
  /// Empty when nothing in the search box works.
  std::optional<SpectrumSpec> spec;
  DesignMethod method = DesignMethod::Search;
};

/// Picks integers x (identity mixing, tau = 1) so that every stop is reached
/// perfectly. A schedule that walks the source cycle in orbit order at
/// fractions j/(D-1) gets the closed-form answer x_n = n on that cycle and 0
/// elsewhere; anything else goes to search_subset_bus.
///
/// Throws DesignError when the logical nodes span several cycles or p does
/// not send the source to the final stop.
DesignOutcome design_subset_bus(const Permutation& p, const TransferSchedule& schedule,
                                std::int64_t search_bound);

/// Lexicographically smallest x in [-bound, bound]^slots (canonical slot
/// order) meeting the schedule exactly. Same preconditions as
/// design_subset_bus.
std::optional<SpectrumSpec> search_subset_bus(const Permutation& p, const TransferSchedule& schedule,
                                              std::int64_t search_bound);

// ---------------------------------------------------------------------------
// Five-site bus: logical cycle {0,2,4} and a non-logical pair {1,3}

/// Sends 0->4, 2->0, 4->2, 1->3, 3->1.
Permutation five_site_permutation();

/// Mixing of the doubly degenerate phase-0 eigenspace, rows (a, b) and
/// (conj b, -conj a). Throws std::invalid_argument unless |a|^2+|b|^2 = 1.
ComplexMatrix five_site_mixing(Complex alpha, Complex beta);

struct FiveSiteIntegers {
  std::int64_t zero_logical = 0;     // phase 0, slot 1
  std::int64_t zero_pair = 0;        // phase 0, slot 2
  std::int64_t third = 1;            // phase 1/3
  std::int64_t half = 0;             // phase 1/2
  std::int64_t two_thirds = 2;       // phase 2/3

  SpectrumSpec to_spec(Complex alpha, Complex beta, double tau = 1.0) const;
};

/// Reads the integers back out of a five-site spec.
FiveSiteIntegers five_site_integers(const SpectrumSpec& spec);

/// With a genuinely mixed phase-0 eigenspace (0 < |a| < 1) the pair sites
/// stay empty at tau/2 only if the two phase-0 integers differ by a nonzero
/// even number. Throws std::invalid_argument if `spec` is not five-site
/// shaped or its mixing is not strictly mixed.
bool check_mixed_zero_offset(const SpectrumSpec& spec);

struct FiveSiteElements {
  Complex to_middle;  // <2|U|0>
  Complex to_pair;    // <1|U|0> == <3|U|0>
};

/// Closed forms of the two amplitudes at t = fraction * tau. Throws
/// std::invalid_argument unless |a|^2+|b|^2 = 1.
FiveSiteElements five_site_elements(const FiveSiteIntegers& x, Complex alpha, Complex beta,
                                    Fraction fraction);

// ---------------------------------------------------------------------------
// Cross-cycle leakage bound

struct LeakageBound {
  std::size_t d0 = 1;
  std::size_t d1 = 1;
  Fraction bound;

  double value() const { return boost::rational_cast<double>(bound); }
};

/// min(d0,d1)^2 / (d0 d1): the most probability that can ever reach a site of
/// a d1-cycle from a site of a different d0-cycle.
LeakageBound occupation_bound(std::size_t d0, std::size_t d1);

// ---------------------------------------------------------------------------
// Compatibility of two unitaries

/// A joint eigenbasis (columns) and energies of one Hamiltonian.
struct CommonGenerator {
  ComplexMatrix basis;
  std::vector<double> energies;

  ComplexMatrix hamiltonian() const;
  ComplexMatrix evolve(double t) const;
};

enum class IncompatibilityReason { None, Commutation, NoBranch };

std::string to_string(IncompatibilityReason r);

struct CompatibilityVerdict {
  bool compatible = false;
  std::optional<CommonGenerator> generator;
  IncompatibilityReason reason = IncompatibilityReason::None;
};

/// Decides whether one Hamiltonian H gives exp(-iH tau1) = u1 and
/// exp(-iH tau2) = u2. Throws std::invalid_argument on a dimension mismatch,
/// equal times, a negative branch bound, or an input that is not unitary
/// to 1e-9.
CompatibilityVerdict compatibility_check(const ComplexMatrix& u1, double tau1,
                                         const ComplexMatrix& u2, double tau2,
                                         std::int64_t branch_bound = 8);

}  // namespace pstnet
