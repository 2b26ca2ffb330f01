#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pstnet/permutation.hpp"
#include "pstnet/types.hpp"

namespace pstnet {

/// One distinct eigenvalue exp(i 2 pi phase) of a permutation, shared by the
/// cycles listed in `slots` (cycle indices, smallest member first).
struct EigenvalueClass {
  Fraction phase;
  std::vector<std::size_t> slots;

  std::size_t multiplicity() const { return slots.size(); }
};

/// Classes ordered by ascending phase. Phases are compared as reduced
/// fractions, so degeneracy is exact.
std::vector<EigenvalueClass> group_eigenvalues(std::span<const Cycle> cycles);

/// Addresses the integer x for slot `slot` (1-based) of eigenvalue `phase`.
struct SlotKey {
  Fraction phase;
  std::size_t slot = 1;

  auto operator<=>(const SlotKey& o) const {
    if (phase != o.phase) return phase < o.phase ? std::strong_ordering::less : std::strong_ordering::greater;
    return slot <=> o.slot;
  }
  bool operator==(const SlotKey&) const = default;
};

/// "p/q:slot", the key syntax used in config files.
std::string to_string(const SlotKey& key);
SlotKey parse_slot_key(const std::string& text);

/// Every slot key of `p` in canonical order (ascending phase, then slot).
std::vector<SlotKey> slot_keys(const Permutation& p);

/// Selects one Hamiltonian of the permutation-terminal family: an integer
/// per eigenvector slot, optional unitary mixing inside each degenerate
/// eigenspace (rows are the mixed vectors, columns the cycles in slot order;
/// absent means identity), and the transfer time tau.
struct SpectrumSpec {
  std::map<SlotKey, std::int64_t> x;
  std::map<Fraction, ComplexMatrix> mixing;
  double tau = 1.0;

  bool has_identity_mixing(double tol = 1e-12) const;
  bool operator==(const SpectrumSpec& o) const;
};

/// One eigenvector of the Hamiltonian together with the exact data that
/// produced its energy: energy = 2 pi (x - phase) / tau.
struct Eigenmode {
  SlotKey key;
  std::int64_t x = 0;
  double energy = 0.0;
  ComplexVector vector;
};

class PstHamiltonian {
 public:
  PstHamiltonian(std::size_t d, double tau, std::vector<Eigenmode> modes);

  std::size_t size() const { return d_; }
  double tau() const { return tau_; }
  const std::vector<Eigenmode>& modes() const { return modes_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Smallest T/tau > 0 with U(t + T) == U(t); the lcm of the eigenphase
  /// denominators.
  std::int64_t period_in_tau() const;

 private:
  std::size_t d_;
  double tau_;
  std::vector<Eigenmode> modes_;
  ComplexMatrix matrix_;
};

/// Throws std::invalid_argument on a missing or unknown x entry, a mixing
/// matrix of the wrong size or not unitary to 1e-12, or tau <= 0.
PstHamiltonian build_hamiltonian(const Permutation& p, const SpectrumSpec& spec);

/// U(t) = sum exp(-i E t) |y><y| over the stored eigenmodes.
ComplexMatrix evolution_operator(const PstHamiltonian& h, double t);

/// U at t = fraction * tau with every eigenphase reduced exactly mod 1
/// before it is exponentiated.
ComplexMatrix evolution_operator_at(const PstHamiltonian& h, Fraction fraction);

struct EvolutionTrace {
  Site source = 0;
  std::vector<double> times;
  /// probabilities[k][m] = P_m(times[k]).
  std::vector<std::vector<double>> probabilities;
};

/// Throws std::out_of_range if `source` is not a site.
EvolutionTrace occupation_probabilities(const PstHamiltonian& h, Site source,
                                        std::span<const double> times);

/// `samples` equally spaced times covering [0, tau] inclusive.
std::vector<double> uniform_grid(double tau, std::size_t samples);

struct TransferAmplitude {
  double magnitude = 0.0;
  /// In (-pi, pi]; only defined when magnitude > 1e-12.
  std::optional<double> phase;
};

TransferAmplitude transfer_fidelity(const PstHamiltonian& h, Site from, Site to, double t);

/// True iff |U(tau)| matches the 0/1 pattern of `p` within 1e-9. Throws
/// std::invalid_argument on a dimension mismatch.
bool verify_permutation(const PstHamiltonian& h, const Permutation& p);

}  // namespace pstnet
