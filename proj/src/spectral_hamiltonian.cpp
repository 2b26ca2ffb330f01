#include "pstnet/spectral_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pstnet {

std::vector<EigenvalueClass> group_eigenvalues(std::span<const Cycle> cycles) {
  std::map<Fraction, std::vector<std::size_t>> by_phase;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const auto len = static_cast<std::int64_t>(cycles[i].length());
    for (std::int64_t n = 0; n < len; ++n) by_phase[Fraction(n, len)].push_back(i);
  }
  std::vector<EigenvalueClass> classes;
  classes.reserve(by_phase.size());
  for (auto& [phase, slots] : by_phase) classes.push_back({phase, std::move(slots)});
  return classes;
}

std::string to_string(const SlotKey& key) {
  return std::to_string(key.phase.numerator()) + "/" + std::to_string(key.phase.denominator()) + ":" +
         std::to_string(key.slot);
}

SlotKey parse_slot_key(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("malformed slot key '" + text + "'");
  const Fraction phase = parse_fraction(text.substr(0, colon));
  if (phase < 0 || phase >= 1) throw std::invalid_argument("phase outside [0,1) in '" + text + "'");
  const std::string slot_text = text.substr(colon + 1);
  if (slot_text.empty() || !std::all_of(slot_text.begin(), slot_text.end(), ::isdigit)) {
    throw std::invalid_argument("malformed slot key '" + text + "'");
  }
  const std::size_t slot = std::stoul(slot_text);
  if (slot == 0) throw std::invalid_argument("slots are numbered from 1 in '" + text + "'");
  return {phase, slot};
}

std::vector<SlotKey> slot_keys(const Permutation& p) {
  std::vector<SlotKey> keys;
  for (const auto& cls : group_eigenvalues(p.cycles())) {
    for (std::size_t a = 1; a <= cls.multiplicity(); ++a) keys.push_back({cls.phase, a});
  }
  return keys;
}

bool SpectrumSpec::has_identity_mixing(double tol) const {
  return std::all_of(mixing.begin(), mixing.end(), [tol](const auto& kv) {
    const ComplexMatrix& b = kv.second;
    return (b - ComplexMatrix::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff() <= tol;
  });
}

bool SpectrumSpec::operator==(const SpectrumSpec& o) const {
  if (x != o.x || tau != o.tau || mixing.size() != o.mixing.size()) return false;
  for (const auto& [phase, b] : mixing) {
    const auto it = o.mixing.find(phase);
    if (it == o.mixing.end() || it->second.rows() != b.rows() || it->second.cols() != b.cols()) {
      return false;
    }
    if (it->second != b) return false;
  }
  return true;
}

PstHamiltonian::PstHamiltonian(std::size_t d, double tau, std::vector<Eigenmode> modes)
    : d_(d), tau_(tau), modes_(std::move(modes)) {
  const auto n = static_cast<Eigen::Index>(d_);
  matrix_ = ComplexMatrix::Zero(n, n);
  for (const auto& m : modes_) matrix_ += m.energy * (m.vector * m.vector.adjoint());
}

std::int64_t PstHamiltonian::period_in_tau() const {
  std::int64_t period = 1;
  for (const auto& m : modes_) period = std::lcm(period, m.key.phase.denominator());
  return period;
}

PstHamiltonian build_hamiltonian(const Permutation& p, const SpectrumSpec& spec) {
  if (!(spec.tau > 0.0) || !std::isfinite(spec.tau)) {
    throw std::invalid_argument("tau must be positive and finite");
  }
  const auto& cycles = p.cycles();
  const auto classes = group_eigenvalues(cycles);

  std::set<SlotKey> expected;
  for (const auto& cls : classes) {
    for (std::size_t a = 1; a <= cls.multiplicity(); ++a) expected.insert({cls.phase, a});
  }
  for (const auto& key : expected) {
    if (!spec.x.contains(key)) throw std::invalid_argument("missing x entry for " + to_string(key));
  }
  for (const auto& [key, value] : spec.x) {
    if (!expected.contains(key)) throw std::invalid_argument("unknown slot key " + to_string(key));
  }

  std::map<Fraction, std::size_t> multiplicity;
  for (const auto& cls : classes) multiplicity[cls.phase] = cls.multiplicity();
  for (const auto& [phase, b] : spec.mixing) {
    const auto it = multiplicity.find(phase);
    if (it == multiplicity.end()) {
      throw std::invalid_argument("mixing given for absent eigenphase " + to_string(phase));
    }
    const auto eta = static_cast<Eigen::Index>(it->second);
    if (b.rows() != eta || b.cols() != eta) {
      throw std::invalid_argument("mixing for phase " + to_string(phase) + " must be " +
                                  std::to_string(eta) + "x" + std::to_string(eta));
    }
    if (unitarity_defect(b) > 1e-12) {
      throw std::invalid_argument("mixing for phase " + to_string(phase) + " is not unitary");
    }
  }

  std::vector<std::vector<CycleEigenpair>> eigensystems;
  eigensystems.reserve(cycles.size());
  for (const auto& c : cycles) eigensystems.push_back(cycle_eigensystem(c, p.size()));

  const auto d = static_cast<Eigen::Index>(p.size());
  std::vector<Eigenmode> modes;
  modes.reserve(p.size());
  for (const auto& cls : classes) {
    const auto eta = static_cast<Eigen::Index>(cls.multiplicity());
    const auto mix = spec.mixing.find(cls.phase);
    const ComplexMatrix b =
        mix == spec.mixing.end() ? ComplexMatrix::Identity(eta, eta) : mix->second;
    for (Eigen::Index a = 0; a < eta; ++a) {
      ComplexVector y = ComplexVector::Zero(d);
      for (Eigen::Index i = 0; i < eta; ++i) {
        const std::size_t ci = cls.slots[static_cast<std::size_t>(i)];
        const Fraction n = cls.phase * static_cast<std::int64_t>(cycles[ci].length());
        y += b(a, i) * eigensystems[ci][static_cast<std::size_t>(n.numerator())].amplitudes;
      }
      const SlotKey key{cls.phase, static_cast<std::size_t>(a) + 1};
      const std::int64_t x = spec.x.at(key);
      const double turns = static_cast<double>(x) - boost::rational_cast<double>(cls.phase);
      modes.push_back({key, x, kTwoPi * turns / spec.tau, std::move(y)});
    }
  }
  return PstHamiltonian(p.size(), spec.tau, std::move(modes));
}

namespace {

template <typename PhaseFn>
ComplexMatrix spectral_sum(const PstHamiltonian& h, PhaseFn&& phase_of) {
  const auto d = static_cast<Eigen::Index>(h.size());
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (const auto& m : h.modes()) u += phase_of(m) * (m.vector * m.vector.adjoint());
  return u;
}

}  // namespace

ComplexMatrix evolution_operator(const PstHamiltonian& h, double t) {
  return spectral_sum(h, [t](const Eigenmode& m) { return std::polar(1.0, -m.energy * t); });
}

ComplexMatrix evolution_operator_at(const PstHamiltonian& h, Fraction fraction) {
  return spectral_sum(h, [fraction](const Eigenmode& m) {
    return unit_phase((m.key.phase - m.x) * fraction);
  });
}

std::vector<double> uniform_grid(double tau, std::size_t samples) {
  std::vector<double> times(samples);
  if (samples == 1) {
    times[0] = 0.0;
    return times;
  }
  for (std::size_t k = 0; k < samples; ++k) {
    times[k] = tau * static_cast<double>(k) / static_cast<double>(samples - 1);
  }
  return times;
}

EvolutionTrace occupation_probabilities(const PstHamiltonian& h, Site source,
                                        std::span<const double> times) {
  if (source >= h.size()) throw std::out_of_range("source site outside the network");
  const auto s = static_cast<Eigen::Index>(source);
  const auto d = static_cast<Eigen::Index>(h.size());

  // Overlap of each eigenmode with the source, reused for every sample.
  std::vector<Complex> overlap;
  overlap.reserve(h.modes().size());
  for (const auto& m : h.modes()) overlap.push_back(std::conj(m.vector(s)));

  EvolutionTrace trace;
  trace.source = source;
  trace.times.assign(times.begin(), times.end());
  trace.probabilities.reserve(times.size());
  ComplexVector psi(d);
  for (double t : times) {
    psi.setZero();
    for (std::size_t k = 0; k < h.modes().size(); ++k) {
      const auto& m = h.modes()[k];
      psi += (std::polar(1.0, -m.energy * t) * overlap[k]) * m.vector;
    }
    std::vector<double> row(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) row[static_cast<std::size_t>(i)] = std::norm(psi(i));
    trace.probabilities.push_back(std::move(row));
  }
  return trace;
}

TransferAmplitude transfer_fidelity(const PstHamiltonian& h, Site from, Site to, double t) {
  if (from >= h.size() || to >= h.size()) throw std::out_of_range("site outside the network");
  Complex amp = 0.0;
  for (const auto& m : h.modes()) {
    amp += std::polar(1.0, -m.energy * t) * m.vector(static_cast<Eigen::Index>(to)) *
           std::conj(m.vector(static_cast<Eigen::Index>(from)));
  }
  TransferAmplitude out;
  out.magnitude = std::min(1.0, std::abs(amp));
  if (std::abs(amp) > 1e-12) {
    double phi = std::arg(amp);
    if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    out.phase = phi;
  }
  return out;
}

bool verify_permutation(const PstHamiltonian& h, const Permutation& p) {
  if (h.size() != p.size()) throw std::invalid_argument("dimension mismatch");
  const ComplexMatrix u = evolution_operator_at(h, Fraction(1));
  const ComplexMatrix pattern = p.matrix();
  return (u.cwiseAbs() - pattern.cwiseAbs()).cwiseAbs().maxCoeff() <= 1e-9;
}

}  // namespace pstnet
