#include "pstnet/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pstnet {

bool Cycle::contains(Site s) const {
  return std::binary_search(members.begin(), members.end(), s);
}

std::size_t Cycle::position(Site s) const {
  const auto it = std::find(orbit.begin(), orbit.end(), s);
  if (it == orbit.end()) throw std::out_of_range("site not on cycle");
  return static_cast<std::size_t>(it - orbit.begin());
}

Permutation::Permutation(std::vector<Site> image) : image_(std::move(image)) {
  const std::size_t d = image_.size();
  if (d == 0) throw std::invalid_argument("permutation must act on at least one site");
  std::vector<bool> seen(d, false);
  for (Site s : image_) {
    if (s >= d || seen[s]) throw std::invalid_argument("not a bijection");
    seen[s] = true;
  }

  std::vector<Site> preimage(d);
  for (Site k = 0; k < d; ++k) preimage[image_[k]] = k;

  cycle_of_.assign(d, d);
  for (Site start = 0; start < d; ++start) {
    if (cycle_of_[start] != d) continue;
    Cycle c;
    Site k = start;
    do {
      c.orbit.push_back(k);
      cycle_of_[k] = cycles_.size();
      k = preimage[k];
    } while (k != start);
    c.members = c.orbit;
    std::sort(c.members.begin(), c.members.end());
    cycles_.push_back(std::move(c));
  }
}

Permutation Permutation::identity(std::size_t d) {
  std::vector<Site> image(d);
  std::iota(image.begin(), image.end(), Site{0});
  return Permutation(std::move(image));
}

std::size_t Permutation::order() const {
  std::size_t result = 1;
  for (const auto& c : cycles_) result = std::lcm(result, c.length());
  return result;
}

ComplexMatrix Permutation::matrix() const {
  const auto d = static_cast<Eigen::Index>(size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Site k = 0; k < size(); ++k) m(static_cast<Eigen::Index>(image_[k]), static_cast<Eigen::Index>(k)) = 1.0;
  return m;
}

std::vector<Cycle> cycle_decompose(const Permutation& p) { return p.cycles(); }

std::string cycle_notation(const Permutation& p) {
  std::ostringstream out;
  for (const auto& c : p.cycles()) {
    out << '(';
    Site k = c.smallest();
    for (std::size_t i = 0; i < c.length(); ++i) {
      if (i) out << ' ';
      out << k;
      k = p(k);
    }
    out << ')';
  }
  return out.str();
}

std::vector<CycleEigenpair> cycle_eigensystem(const Cycle& c, std::size_t d) {
  const std::size_t len = c.length();
  const double norm = 1.0 / std::sqrt(static_cast<double>(len));
  const auto slen = static_cast<std::int64_t>(len);
  std::vector<CycleEigenpair> pairs;
  pairs.reserve(len);
  for (std::size_t n = 0; n < len; ++n) {
    CycleEigenpair e;
    e.index = n;
    e.phase = Fraction(static_cast<std::int64_t>(n), slen);
    e.amplitudes = ComplexVector::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t z = 0; z < len; ++z) {
      const auto turns = Fraction(static_cast<std::int64_t>((n * z) % len), slen);
      e.amplitudes(static_cast<Eigen::Index>(c.orbit[z])) = norm * unit_phase(turns);
    }
    pairs.push_back(std::move(e));
  }
  return pairs;
}

std::string LogicalSetViolation::describe(const Permutation& p) const {
  std::ostringstream out;
  out << "logical nodes span several cycles:";
  for (const auto& pl : placements) {
    out << ' ' << pl.site << " in {";
    const auto& members = p.cycles()[pl.cycle].members;
    for (std::size_t i = 0; i < members.size(); ++i) out << (i ? "," : "") << members[i];
    out << '}';
  }
  return out.str();
}

std::optional<LogicalSetViolation> validate_logical_set(const Permutation& p,
                                                        std::span<const Site> logical) {
  if (logical.empty()) throw std::invalid_argument("logical set is empty");
  LogicalSetViolation report;
  for (Site s : logical) {
    if (s >= p.size()) {
      throw std::out_of_range("logical site " + std::to_string(s) + " outside 0.." +
                              std::to_string(p.size() - 1));
    }
    report.placements.push_back({s, p.cycle_index(s)});
  }
  const std::size_t first = report.placements.front().cycle;
  const bool same = std::all_of(report.placements.begin(), report.placements.end(),
                                [first](const LogicalPlacement& pl) { return pl.cycle == first; });
  if (same) return std::nullopt;
  return report;
}

}  // namespace pstnet
