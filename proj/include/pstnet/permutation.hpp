#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pstnet/types.hpp"

namespace pstnet {

/// One closed orbit of a permutation.
///
/// `members` is the support in ascending order. `orbit` lists the same sites
/// starting from the smallest member and stepping backwards along the
/// permutation (p(orbit[z + 1]) == orbit[z]); the index z is the position
/// used to weight cycle eigenvectors. Whenever the permutation runs downwards
/// through an ascending support, as in every bus layout built here, orbit and
/// members coincide.
struct Cycle {
  std::vector<Site> members;
  std::vector<Site> orbit;

  std::size_t length() const { return members.size(); }
  Site smallest() const { return members.front(); }
  bool contains(Site s) const;
  /// Position of `s` along the orbit; throws std::out_of_range if absent.
  std::size_t position(Site s) const;
};

/// A bijection on {0..d-1}; image[k] is where site k is sent.
class Permutation {
 public:
  /// Throws std::invalid_argument ("not a bijection") for bad images.
  explicit Permutation(std::vector<Site> image);

  static Permutation identity(std::size_t d);

  std::size_t size() const { return image_.size(); }
  Site operator()(Site k) const { return image_.at(k); }
  std::span<const Site> image() const { return image_; }

  /// Disjoint cycles ordered by smallest member.
  const std::vector<Cycle>& cycles() const { return cycles_; }
  /// Index into cycles() of the cycle holding `s`.
  std::size_t cycle_index(Site s) const { return cycle_of_.at(s); }
  /// lcm of the cycle lengths.
  std::size_t order() const;

  /// Matrix with a 1 at (image[k], k).
  ComplexMatrix matrix() const;

  bool operator==(const Permutation& other) const { return image_ == other.image_; }

 private:
  std::vector<Site> image_;
  std::vector<Cycle> cycles_;
  std::vector<std::size_t> cycle_of_;
};

std::vector<Cycle> cycle_decompose(const Permutation& p);

/// Disjoint-cycle notation following the permutation, e.g. "(0 4 2)(1 3)".
/// Fixed points are written out as one-cycles.
std::string cycle_notation(const Permutation& p);

struct CycleEigenpair {
  /// Eigenvalue exp(i 2 pi phase), phase = n / length reduced.
  Fraction phase;
  /// Index n in 0..length-1.
  std::size_t index = 0;
  /// d amplitudes; lambda^z / sqrt(length) at orbit[z], zero elsewhere.
  ComplexVector amplitudes;
};

/// The `length` eigenpairs of one cycle, embedded in a d-site space.
std::vector<CycleEigenpair> cycle_eigensystem(const Cycle& c, std::size_t d);

struct LogicalPlacement {
  Site site;
  std::size_t cycle;
};

/// Logical nodes that do not all sit on one cycle.
struct LogicalSetViolation {
  std::vector<LogicalPlacement> placements;
  std::string describe(const Permutation& p) const;
};

/// Empty optional when every logical node lies on the same cycle.
/// Throws std::out_of_range for labels >= d and std::invalid_argument for an
/// empty set.
std::optional<LogicalSetViolation> validate_logical_set(const Permutation& p,
                                                        std::span<const Site> logical);

}  // namespace pstnet
