#include "pstnet/bus_designer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

namespace pstnet {

namespace {

constexpr double kUnitTol = 1e-9;

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

// Slot key of eigenvalue index n of cycle `ci`: its slot counts the earlier
// cycles sharing the same reduced phase.
SlotKey slot_key_for(const Permutation& p, std::size_t ci, std::size_t n) {
  const auto& cycles = p.cycles();
  const Fraction phase(as_int(n), as_int(cycles[ci].length()));
  std::size_t slot = 1;
  for (std::size_t j = 0; j < ci; ++j) {
    if ((phase * as_int(cycles[j].length())).denominator() == 1) ++slot;
  }
  return {phase, slot};
}

void require_normalized(Complex alpha, Complex beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) {
    throw std::invalid_argument("mixing amplitudes must satisfy |a|^2 + |b|^2 = 1");
  }
}

// Source cycle index after the checks shared by design and search.
std::size_t check_design_request(const Permutation& p, const TransferSchedule& schedule) {
  schedule.validate(p.size());
  const auto logical = schedule.logical_sites();
  if (const auto violation = validate_logical_set(p, logical)) {
    throw DesignError(violation->describe(p));
  }
  const Site last = schedule.stops.back().site;
  if (p(schedule.source) != last) {
    throw DesignError("permutation sends source " + std::to_string(schedule.source) + " to " +
                      std::to_string(p(schedule.source)) + " but the schedule ends at " +
                      std::to_string(last));
  }
  return p.cycle_index(schedule.source);
}

}  // namespace

void TransferSchedule::validate(std::size_t d) const {
  if (source >= d) throw std::out_of_range("source site outside the network");
  if (stops.empty()) throw std::invalid_argument("schedule has no stops");
  std::set<Site> seen{source};
  Fraction previous(0);
  for (const auto& s : stops) {
    if (s.site >= d) throw std::out_of_range("stop site " + std::to_string(s.site) + " outside the network");
    if (!seen.insert(s.site).second) {
      throw std::invalid_argument("site " + std::to_string(s.site) + " occupied twice");
    }
    if (s.at <= previous || s.at > 1) {
      throw std::invalid_argument("stop fractions must increase within (0, 1]");
    }
    previous = s.at;
  }
  if (stops.back().at != Fraction(1)) throw std::invalid_argument("final stop must be at fraction 1");
}

std::vector<Site> TransferSchedule::logical_sites() const {
  std::vector<Site> sites{source};
  for (const auto& s : stops) sites.push_back(s.site);
  return sites;
}

TransferSchedule equally_spaced_schedule(Site source, std::span<const Site> sites) {
  TransferSchedule s;
  s.source = source;
  const auto n = as_int(sites.size());
  for (std::size_t j = 0; j < sites.size(); ++j) s.stops.push_back({sites[j], Fraction(as_int(j) + 1, n)});
  return s;
}

Permutation universal_bus_permutation(std::size_t d) {
  if (d < 2) throw std::invalid_argument("universal bus needs d >= 2");
  std::vector<Site> image(d);
  image[0] = d - 1;
  for (Site m = 1; m < d; ++m) image[m] = m - 1;
  return Permutation(std::move(image));
}

TransferSchedule universal_bus_schedule(std::size_t d) {
  if (d < 2) throw std::invalid_argument("universal bus needs d >= 2");
  std::vector<Site> sites(d - 1);
  std::iota(sites.begin(), sites.end(), Site{1});
  return equally_spaced_schedule(0, sites);
}

SpectrumSpec universal_bus_spectrum(std::size_t d, const std::function<std::int64_t(std::size_t)>& f,
                                    std::int64_t c) {
  if (d < 2) throw std::invalid_argument("universal bus needs d >= 2");
  SpectrumSpec spec;
  for (std::size_t n = 0; n < d; ++n) {
    spec.x[{Fraction(as_int(n), as_int(d)), 1}] = c + as_int(n) + as_int(d - 1) * f(n);
  }
  return spec;
}

Complex universal_bus_element(std::span<const std::int64_t> x, Site m, Fraction fraction) {
  const auto d = as_int(x.size());
  Complex sum = 0.0;
  for (std::int64_t n = 0; n < d; ++n) {
    const Fraction turns = Fraction(n, d) * (fraction + as_int(m)) - fraction * x[static_cast<std::size_t>(n)];
    sum += unit_phase(turns);
  }
  return sum / static_cast<double>(d);
}

bool exact_transfer(const Permutation& p, const SpectrumSpec& spec, Site from, Site to,
                    Fraction fraction) {
  if (!spec.has_identity_mixing()) {
    throw std::invalid_argument("exact transfer check needs identity mixing");
  }
  if (from >= p.size() || to >= p.size()) throw std::out_of_range("site outside the network");
  const std::size_t ci = p.cycle_index(from);
  if (p.cycle_index(to) != ci) return false;

  const Cycle& c = p.cycles()[ci];
  const auto len = as_int(c.length());
  const std::int64_t shift = as_int(c.position(to)) - as_int(c.position(from));
  std::optional<Fraction> common;
  for (std::int64_t n = 0; n < len; ++n) {
    const std::int64_t x = spec.x.at(slot_key_for(p, ci, static_cast<std::size_t>(n)));
    const Fraction turns = wrap_turns(Fraction(n * shift, len) + (Fraction(n, len) - x) * fraction);
    if (!common) {
      common = turns;
    } else if (*common != turns) {
      return false;
    }
  }
  return true;
}

bool ScheduleCheck::passed() const {
  return permutation_ok &&
         std::all_of(stops.begin(), stops.end(), [](const StopCheck& s) { return s.passed; });
}

ScheduleCheck verify_schedule(const Permutation& p, const SpectrumSpec& spec,
                              const TransferSchedule& schedule) {
  schedule.validate(p.size());
  const PstHamiltonian h = build_hamiltonian(p, spec);
  const bool exact_ok = spec.has_identity_mixing();
  ScheduleCheck report;
  report.permutation_ok = verify_permutation(h, p);
  for (const auto& stop : schedule.stops) {
    StopCheck sc;
    sc.stop = stop;
    const ComplexMatrix u = evolution_operator_at(h, stop.at);
    sc.magnitude = std::abs(u(static_cast<Eigen::Index>(stop.site), static_cast<Eigen::Index>(schedule.source)));
    if (exact_ok) sc.exact = exact_transfer(p, spec, schedule.source, stop.site, stop.at);
    sc.passed = std::abs(sc.magnitude - 1.0) <= kUnitTol && sc.exact.value_or(true);
    report.stops.push_back(sc);
  }
  return report;
}

std::string to_string(DesignMethod m) {
  switch (m) {
    case DesignMethod::EquallySpacedOrbit:
      return "equally-spaced-orbit";
    case DesignMethod::Search:
      return "search";
  }
  return "unknown";
}

DesignOutcome design_subset_bus(const Permutation& p, const TransferSchedule& schedule,
                                std::int64_t search_bound) {
  const std::size_t ci = check_design_request(p, schedule);
  const Cycle& c = p.cycles()[ci];
  const std::size_t len = c.length();
  const std::size_t start = c.position(schedule.source);

  bool orbit_walk = schedule.stops.size() + 1 == len;
  for (std::size_t j = 1; orbit_walk && j < len; ++j) {
    const Stop& s = schedule.stops[j - 1];
    orbit_walk = s.site == c.orbit[(start + j) % len] && s.at == Fraction(as_int(j), as_int(len - 1));
  }
  if (orbit_walk) {
    SpectrumSpec spec;
    for (const auto& key : slot_keys(p)) spec.x[key] = 0;
    for (std::size_t n = 0; n < len; ++n) spec.x[slot_key_for(p, ci, n)] = as_int(n);
    return {std::move(spec), DesignMethod::EquallySpacedOrbit};
  }
  return {search_subset_bus(p, schedule, search_bound), DesignMethod::Search};
}

std::optional<SpectrumSpec> search_subset_bus(const Permutation& p, const TransferSchedule& schedule,
                                              std::int64_t search_bound) {
  if (search_bound < 0) throw std::invalid_argument("search bound must be non-negative");
  const std::size_t ci = check_design_request(p, schedule);
  const Cycle& c = p.cycles()[ci];
  const auto len = as_int(c.length());
  const auto start = as_int(c.position(schedule.source));

  // With identity mixing only the source cycle's integers enter the
  // amplitudes. Perfect transfer to a site `shift` steps along the orbit at
  // fraction r needs every term to share the n = 0 phase:
  //   (x_n - x_0) r == n (shift + r) / len   (mod 1).
  // Given x_0 the conditions on different n are independent, so the
  // lexicographic minimum takes the smallest workable x_0 and then the
  // smallest x_n for each n.
  struct Condition {
    std::int64_t shift;
    Fraction at;
  };
  std::vector<Condition> conditions;
  for (const auto& s : schedule.stops) conditions.push_back({as_int(c.position(s.site)) - start, s.at});

  auto admissible = [&](std::int64_t n, std::int64_t x0, std::int64_t xn) {
    return std::all_of(conditions.begin(), conditions.end(), [&](const Condition& k) {
      return wrap_turns((xn - x0) * k.at - Fraction(n, len) * (k.at + k.shift)) == Fraction(0);
    });
  };
  auto smallest = [&](std::int64_t n, std::int64_t x0) -> std::optional<std::int64_t> {
    for (std::int64_t v = -search_bound; v <= search_bound; ++v) {
      if (admissible(n, x0, v)) return v;
    }
    return std::nullopt;
  };

  for (std::int64_t x0 = -search_bound; x0 <= search_bound; ++x0) {
    std::vector<std::int64_t> chosen{x0};
    for (std::int64_t n = 1; n < len; ++n) {
      const auto v = smallest(n, x0);
      if (!v) break;
      chosen.push_back(*v);
    }
    if (as_int(chosen.size()) != len) continue;

    SpectrumSpec spec;
    for (const auto& key : slot_keys(p)) spec.x[key] = -search_bound;
    for (std::int64_t n = 0; n < len; ++n) {
      spec.x[slot_key_for(p, ci, static_cast<std::size_t>(n))] = chosen[static_cast<std::size_t>(n)];
    }
    return spec;
  }
  return std::nullopt;
}

Permutation five_site_permutation() { return Permutation({4, 3, 0, 1, 2}); }

ComplexMatrix five_site_mixing(Complex alpha, Complex beta) {
  require_normalized(alpha, beta);
  ComplexMatrix b(2, 2);
  b << alpha, beta, std::conj(beta), -std::conj(alpha);
  return b;
}

SpectrumSpec FiveSiteIntegers::to_spec(Complex alpha, Complex beta, double tau) const {
  SpectrumSpec spec;
  spec.tau = tau;
  spec.x[{Fraction(0), 1}] = zero_logical;
  spec.x[{Fraction(0), 2}] = zero_pair;
  spec.x[{Fraction(1, 3), 1}] = third;
  spec.x[{Fraction(1, 2), 1}] = half;
  spec.x[{Fraction(2, 3), 1}] = two_thirds;
  spec.mixing[Fraction(0)] = five_site_mixing(alpha, beta);
  return spec;
}

FiveSiteIntegers five_site_integers(const SpectrumSpec& spec) {
  const std::set<SlotKey> expected{{Fraction(0), 1}, {Fraction(0), 2}, {Fraction(1, 3), 1},
                                    {Fraction(1, 2), 1}, {Fraction(2, 3), 1}};
  std::set<SlotKey> present;
  for (const auto& [key, v] : spec.x) present.insert(key);
  if (present != expected) throw std::invalid_argument("spec is not shaped like the five-site bus");
  return {spec.x.at({Fraction(0), 1}), spec.x.at({Fraction(0), 2}), spec.x.at({Fraction(1, 3), 1}),
          spec.x.at({Fraction(1, 2), 1}), spec.x.at({Fraction(2, 3), 1})};
}

bool check_mixed_zero_offset(const SpectrumSpec& spec) {
  const FiveSiteIntegers x = five_site_integers(spec);
  const auto mix = spec.mixing.find(Fraction(0));
  if (mix == spec.mixing.end() || mix->second.rows() != 2 || mix->second.cols() != 2) {
    throw std::invalid_argument("five-site spec needs a 2x2 phase-0 mixing matrix");
  }
  const double a = std::abs(mix->second(0, 0));
  if (!(a > 1e-12 && a < 1.0 - 1e-12)) {
    throw std::invalid_argument("phase-0 mixing is not strictly mixed (need 0 < |a| < 1)");
  }
  const std::int64_t q = x.zero_logical - x.zero_pair;
  return q != 0 && q % 2 == 0;
}

FiveSiteElements five_site_elements(const FiveSiteIntegers& x, Complex alpha, Complex beta,
                                    Fraction fraction) {
  require_normalized(alpha, beta);
  const Fraction t = fraction;
  const Complex e1 = unit_phase(-t * x.zero_logical);
  const Complex e2 = unit_phase(-t * x.zero_pair);
  FiveSiteElements out;
  out.to_middle = std::norm(alpha) / 3.0 * e1 +
                  unit_phase(Fraction(1, 3) * (t + 1) - t * x.third) / 3.0 +
                  std::norm(beta) / 3.0 * e2 +
                  unit_phase(Fraction(2, 3) * (t + 1) - t * x.two_thirds) / 3.0;
  out.to_pair = beta * std::conj(alpha) / std::sqrt(6.0) * (e1 - e2);
  return out;
}

LeakageBound occupation_bound(std::size_t d0, std::size_t d1) {
  if (d0 == 0 || d1 == 0) throw std::invalid_argument("cycle sizes must be positive");
  const auto m = as_int(std::min(d0, d1));
  return {d0, d1, Fraction(m * m, as_int(d0) * as_int(d1))};
}

ComplexMatrix CommonGenerator::hamiltonian() const {
  ComplexMatrix h = ComplexMatrix::Zero(basis.rows(), basis.rows());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    h += energies[static_cast<std::size_t>(i)] * (basis.col(i) * basis.col(i).adjoint());
  }
  return h;
}

ComplexMatrix CommonGenerator::evolve(double t) const {
  ComplexMatrix u = ComplexMatrix::Zero(basis.rows(), basis.rows());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    u += std::polar(1.0, -energies[static_cast<std::size_t>(i)] * t) *
         (basis.col(i) * basis.col(i).adjoint());
  }
  return u;
}

std::string to_string(IncompatibilityReason r) {
  switch (r) {
    case IncompatibilityReason::None:
      return "none";
    case IncompatibilityReason::Commutation:
      return "commutation";
    case IncompatibilityReason::NoBranch:
      return "no consistent branch assignment";
  }
  return "unknown";
}

namespace {

// Orthonormal eigenbasis of a normal matrix via the complex Schur form, whose
// triangular factor is diagonal up to rounding.
ComplexMatrix normal_eigenbasis(const ComplexMatrix& m) {
  Eigen::ComplexSchur<ComplexMatrix> schur(m);
  return schur.matrixU();
}

// Groups columns whose eigenphases lie within `tol` radians of a neighbour,
// including across the +-pi seam.
std::vector<std::vector<Eigen::Index>> cluster_phases(const std::vector<double>& phases, double tol) {
  std::vector<Eigen::Index> order(phases.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return phases[static_cast<std::size_t>(a)] < phases[static_cast<std::size_t>(b)];
  });
  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index idx : order) {
    const double ph = phases[static_cast<std::size_t>(idx)];
    if (!groups.empty() && ph - phases[static_cast<std::size_t>(groups.back().back())] < tol) {
      groups.back().push_back(idx);
    } else {
      groups.push_back({idx});
    }
  }
  if (groups.size() > 1) {
    const double wrap = phases[static_cast<std::size_t>(groups.front().front())] + kTwoPi -
                        phases[static_cast<std::size_t>(groups.back().back())];
    if (wrap < tol) {
      groups.front().insert(groups.front().end(), groups.back().begin(), groups.back().end());
      groups.pop_back();
    }
  }
  return groups;
}

}  // namespace

CompatibilityVerdict compatibility_check(const ComplexMatrix& u1, double tau1,
                                         const ComplexMatrix& u2, double tau2,
                                         std::int64_t branch_bound) {
  if (u1.rows() != u1.cols() || u2.rows() != u2.cols() || u1.rows() != u2.rows()) {
    throw std::invalid_argument("dimension mismatch");
  }
  if (u1.rows() == 0) throw std::invalid_argument("empty matrices");
  if (!(tau1 > 0.0) || !(tau2 > 0.0) || tau1 == tau2) {
    throw std::invalid_argument("times must be positive and distinct");
  }
  if (branch_bound < 0) throw std::invalid_argument("branch bound must be non-negative");
  if (unitarity_defect(u1) > kUnitTol || unitarity_defect(u2) > kUnitTol) {
    throw std::invalid_argument("input is not unitary");
  }

  CompatibilityVerdict verdict;
  if ((u1 * u2 - u2 * u1).cwiseAbs().maxCoeff() > kUnitTol) {
    verdict.reason = IncompatibilityReason::Commutation;
    return verdict;
  }

  // Eigenspaces of u1, then u2 restricted to each of them.
  const ComplexMatrix q = normal_eigenbasis(u1);
  const Eigen::Index d = u1.rows();
  std::vector<double> phases(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    phases[static_cast<std::size_t>(i)] = std::arg((q.col(i).adjoint() * u1 * q.col(i))(0, 0));
  }

  CommonGenerator gen;
  gen.basis = ComplexMatrix::Zero(d, d);
  gen.energies.reserve(static_cast<std::size_t>(d));
  Eigen::Index filled = 0;
  for (const auto& group : cluster_phases(phases, 1e-8)) {
    const auto m = static_cast<Eigen::Index>(group.size());
    ComplexMatrix block(d, m);
    for (Eigen::Index j = 0; j < m; ++j) block.col(j) = q.col(group[static_cast<std::size_t>(j)]);
    const ComplexMatrix restricted = block.adjoint() * u2 * block;
    const ComplexMatrix joint = block * normal_eigenbasis(restricted);

    for (Eigen::Index j = 0; j < m; ++j) {
      const ComplexVector v = joint.col(j);
      const double arg1 = std::arg((v.adjoint() * u1 * v)(0, 0));
      const double arg2 = std::arg((v.adjoint() * u2 * v)(0, 0));
      std::optional<double> best;
      for (std::int64_t k = -branch_bound; k <= branch_bound; ++k) {
        const double e1 = -(arg1 + kTwoPi * static_cast<double>(k)) / tau1;
        for (std::int64_t l = -branch_bound; l <= branch_bound; ++l) {
          const double e2 = -(arg2 + kTwoPi * static_cast<double>(l)) / tau2;
          if (std::abs(e1 - e2) > kUnitTol) continue;
          const double e = 0.5 * (e1 + e2);
          if (!best || std::abs(e) < std::abs(*best) - 1e-12 ||
              (std::abs(std::abs(e) - std::abs(*best)) <= 1e-12 && e > *best)) {
            best = e;
          }
        }
      }
      if (!best) {
        verdict.reason = IncompatibilityReason::NoBranch;
        return verdict;
      }
      gen.basis.col(filled++) = v;
      gen.energies.push_back(*best);
    }
  }

  const double err1 = (gen.evolve(tau1) - u1).cwiseAbs().maxCoeff();
  const double err2 = (gen.evolve(tau2) - u2).cwiseAbs().maxCoeff();
  if (err1 > 1e-8 || err2 > 1e-8) {
    verdict.reason = IncompatibilityReason::NoBranch;
    return verdict;
  }
  verdict.compatible = true;
  verdict.generator = std::move(gen);
  return verdict;
}

}  // namespace pstnet
