#pragma once

// Reference computations used by the tests. Nothing here calls into the
// spectral machinery under test: evolution is a dense Taylor exponential,
// permutation matrices are filled entry by entry, and design search is plain
// enumeration.

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/QR>

#include "pstnet/bus_designer.hpp"
#include "pstnet/permutation.hpp"
#include "pstnet/spectral_hamiltonian.hpp"

namespace oracle {

using pstnet::Complex;
using pstnet::ComplexMatrix;
using pstnet::Fraction;
using pstnet::Permutation;
using pstnet::Site;
using pstnet::SlotKey;
using pstnet::SpectrumSpec;

/// exp(-i H t) by scaling and squaring a 30-term Taylor series.
inline ComplexMatrix expm_minus_i(const ComplexMatrix& h, double t) {
  const ComplexMatrix a = Complex(0.0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(h.rows(), h.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// |<m| exp(-iHt) |source>|^2 for every m.
inline std::vector<double> occupations(const ComplexMatrix& h, Site source, double t) {
  const ComplexMatrix u = expm_minus_i(h, t);
  std::vector<double> p(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index m = 0; m < h.rows(); ++m) p[static_cast<std::size_t>(m)] = std::norm(u(m, static_cast<Eigen::Index>(source)));
  return p;
}

/// Column k has its single 1 in row image[k].
inline ComplexMatrix permutation_matrix(std::span<const Site> image) {
  const auto d = static_cast<Eigen::Index>(image.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) m(static_cast<Eigen::Index>(image[static_cast<std::size_t>(k)]), k) = 1.0;
  return m;
}

/// Identity-mixing Hamiltonian assembled from scratch: cycles found by
/// walking preimages from each unvisited smallest site, Fourier vectors along
/// that walk, energies 2 pi (x - n/D) / tau.
inline ComplexMatrix identity_mixing_hamiltonian(std::span<const Site> image,
                                                 const std::map<SlotKey, std::int64_t>& x, double tau) {
  const std::size_t d = image.size();
  std::vector<Site> preimage(d);
  for (Site k = 0; k < d; ++k) preimage[image[k]] = k;
  std::vector<bool> seen(d, false);
  std::vector<std::size_t> lengths;
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Site start = 0; start < d; ++start) {
    if (seen[start]) continue;
    std::vector<Site> walk;
    for (Site s = start; !seen[s]; s = preimage[s]) {
      seen[s] = true;
      walk.push_back(s);
    }
    const auto len = static_cast<std::int64_t>(walk.size());
    for (std::int64_t n = 0; n < len; ++n) {
      const Fraction phase(n, len);
      std::size_t slot = 1;
      for (std::size_t earlier : lengths) {
        if ((phase * static_cast<std::int64_t>(earlier)).denominator() == 1) ++slot;
      }
      const double energy =
          2.0 * M_PI * (static_cast<double>(x.at({phase, slot})) - static_cast<double>(n) / static_cast<double>(len)) / tau;
      pstnet::ComplexVector v = pstnet::ComplexVector::Zero(static_cast<Eigen::Index>(d));
      for (std::int64_t z = 0; z < len; ++z) {
        v(static_cast<Eigen::Index>(walk[static_cast<std::size_t>(z)])) =
            std::polar(1.0 / std::sqrt(static_cast<double>(len)), 2.0 * M_PI * static_cast<double>(n * z) / static_cast<double>(len));
      }
      h += energy * (v * v.adjoint());
    }
    lengths.push_back(walk.size());
  }
  return h;
}

inline Permutation random_permutation(std::mt19937_64& rng, std::size_t d) {
  std::vector<Site> image(d);
  std::iota(image.begin(), image.end(), Site{0});
  std::shuffle(image.begin(), image.end(), rng);
  return Permutation(image);
}

/// Haar-like random unitary from the QR factor of a complex Gaussian matrix.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  ComplexMatrix z(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) z(r, c) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < n; ++c) q.col(c) *= std::polar(1.0, std::arg(r(c, c)));
  return q;
}

/// Integers in [-range, range] for every slot; random unitary mixing on each
/// degenerate eigenphase when `mixed` is set.
inline SpectrumSpec random_spec(std::mt19937_64& rng, const Permutation& p, bool mixed, std::int64_t range = 6,
                                double tau = 1.0) {
  std::uniform_int_distribution<std::int64_t> xs(-range, range);
  SpectrumSpec spec;
  spec.tau = tau;
  std::map<Fraction, std::size_t> multiplicity;
  for (const auto& key : pstnet::slot_keys(p)) {
    spec.x[key] = xs(rng);
    multiplicity[key.phase] = std::max(multiplicity[key.phase], key.slot);
  }
  if (mixed) {
    for (const auto& [phase, eta] : multiplicity) {
      if (eta > 1) spec.mixing[phase] = random_unitary(rng, static_cast<Eigen::Index>(eta));
    }
  }
  return spec;
}

/// Cycle (0 1 ... d0-1) followed by cycle (d0 ... d0+d1-1), each sending
/// k+1 to k.
inline Permutation two_cycle_permutation(std::size_t d0, std::size_t d1) {
  std::vector<Site> image(d0 + d1);
  for (std::size_t k = 0; k < d0; ++k) image[k] = (k + d0 - 1) % d0;
  for (std::size_t k = 0; k < d1; ++k) image[d0 + k] = d0 + (k + d1 - 1) % d1;
  return Permutation(image);
}

/// Lexicographically first x in [-bound, bound]^slots (canonical slot order)
/// whose Hamiltonian, evolved by expm_minus_i, hits every stop within 1e-9.
inline std::optional<std::map<SlotKey, std::int64_t>> brute_force_design(const Permutation& p,
                                                                         const pstnet::TransferSchedule& schedule,
                                                                         std::int64_t bound) {
  const auto keys = pstnet::slot_keys(p);
  std::vector<std::int64_t> x(keys.size(), -bound);
  while (true) {
    SpectrumSpec spec;
    for (std::size_t i = 0; i < keys.size(); ++i) spec.x[keys[i]] = x[i];
    const ComplexMatrix h = identity_mixing_hamiltonian(p.image(), spec.x, 1.0);
    bool ok = true;
    for (const auto& stop : schedule.stops) {
      const ComplexMatrix u = expm_minus_i(h, boost::rational_cast<double>(stop.at));
      if (std::abs(std::abs(u(static_cast<Eigen::Index>(stop.site), static_cast<Eigen::Index>(schedule.source))) - 1.0) >
          1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return spec.x;
    std::size_t i = keys.size();
    while (i > 0 && x[i - 1] == bound) x[--i] = -bound;
    if (i == 0) return std::nullopt;
    ++x[i - 1];
  }
}

}  // namespace oracle
