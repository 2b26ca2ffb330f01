#include "pstnet/spin_export.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pstnet {

XYModel XYModel::zero(std::size_t d, double tau) {
  const auto n = static_cast<Eigen::Index>(d);
  return {d, tau, std::vector<double>(d, 0.0), RealMatrix::Zero(n, n), RealMatrix::Zero(n, n)};
}

XYModel to_xy(const ComplexMatrix& h, double tau) {
  const auto d = static_cast<std::size_t>(h.rows());
  XYModel m = XYModel::zero(d, tau);
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    m.onsite[static_cast<std::size_t>(r)] = h(r, r).real();
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      if (r == c) continue;
      m.J(r, c) = h(r, c).real();
      m.Jp(r, c) = h(r, c).imag();
    }
  }
  return m;
}

XYModel to_xy(const PstHamiltonian& h) { return to_xy(h.matrix(), h.tau()); }

ComplexMatrix from_xy(const XYModel& m) {
  const auto d = static_cast<Eigen::Index>(m.d);
  if (m.onsite.size() != m.d || m.J.rows() != d || m.J.cols() != d || m.Jp.rows() != d ||
      m.Jp.cols() != d) {
    throw std::invalid_argument("coupling tables do not match d");
  }
  constexpr double tol = 1e-12;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    if (std::abs(m.J(r, r)) > tol || std::abs(m.Jp(r, r)) > tol) {
      throw std::invalid_argument("coupling tables must have zero diagonals");
    }
    h(r, r) = m.onsite[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < r; ++c) {
      if (std::abs(m.J(r, c) - m.J(c, r)) > tol) {
        throw std::invalid_argument("J is not symmetric at (" + std::to_string(r) + "," + std::to_string(c) + ")");
      }
      if (std::abs(m.Jp(r, c) + m.Jp(c, r)) > tol) {
        throw std::invalid_argument("Jp is not antisymmetric at (" + std::to_string(r) + "," +
                                    std::to_string(c) + ")");
      }
      h(r, c) = Complex(m.J(r, c), m.Jp(r, c));
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

XYModel five_site_xy_closed_form(const FiveSiteIntegers& x, Complex alpha, Complex beta, double tau) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) {
    throw std::invalid_argument("mixing amplitudes must satisfy |a|^2 + |b|^2 = 1");
  }
  const double pi = std::numbers::pi;
  const auto energy = [](std::int64_t xi, double arg) { return -arg + kTwoPi * static_cast<double>(xi); };
  const double e0_logical = energy(x.zero_logical, 0.0);
  const double e0_pair = energy(x.zero_pair, 0.0);
  const double e_third = energy(x.third, 2.0 * pi / 3.0);
  const double e_two_thirds = energy(x.two_thirds, 4.0 * pi / 3.0);
  const double e_half = energy(x.half, pi);
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);

  XYModel m = XYModel::zero(5, tau);
  const double logical_onsite = (e0_logical * a2 + e0_pair * b2 + e_third + e_two_thirds) / (3.0 * tau);
  const double pair_onsite = (e0_logical * b2 + e0_pair * a2 + e_half) / (2.0 * tau);
  for (Site s : {0, 2, 4}) m.onsite[s] = logical_onsite;
  for (Site s : {1, 3}) m.onsite[s] = pair_onsite;

  auto set = [&m](Eigen::Index r, Eigen::Index c, double j, double jp) {
    m.J(r, c) = j;
    m.J(c, r) = j;
    m.Jp(r, c) = jp;
    m.Jp(c, r) = -jp;
  };

  // Pair sites 1 and 3.
  set(3, 1, (b2 * e0_logical + a2 * e0_pair - e_half) / (2.0 * tau), 0.0);

  // Logical cycle: one J for all three bonds, Jp alternating with the bond
  // orientation along the cycle.
  const double j_logical = (a2 * e0_logical + b2 * e0_pair - 0.5 * e_third - 0.5 * e_two_thirds) / (3.0 * tau);
  const double jp_logical = (e_third - e_two_thirds) / (2.0 * std::sqrt(3.0) * tau);
  set(2, 0, j_logical, jp_logical);
  set(4, 0, j_logical, -jp_logical);
  set(4, 2, j_logical, jp_logical);

  // Between cycles, indexed (logical, pair).
  const Complex ab = alpha * std::conj(beta);
  const double scale = (e0_logical - e0_pair) / (std::sqrt(6.0) * tau);
  for (Eigen::Index logical : {0, 2, 4}) {
    for (Eigen::Index pair : {1, 3}) set(logical, pair, ab.real() * scale, ab.imag() * scale);
  }
  return m;
}

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

void write_coupling_table(const XYModel& m, std::ostream& out) {
  constexpr double nonzero = 1e-12;
  out << m.d << ' ' << num(m.tau) << '\n';
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(m.d); ++r) {
    for (Eigen::Index c = 0; c < r; ++c) {
      const double j = m.J(r, c);
      const double jp = m.Jp(r, c);
      if (std::abs(j) <= nonzero && std::abs(jp) <= nonzero) continue;
      out << r << ' ' << c << ' ' << num(std::abs(j) <= nonzero ? 0.0 : j) << ' '
          << num(std::abs(jp) <= nonzero ? 0.0 : jp) << '\n';
    }
  }
  for (std::size_t s = 0; s < m.d; ++s) out << s << ' ' << num(m.onsite[s]) << '\n';
}

std::string format_coupling_table(const XYModel& m) {
  std::ostringstream out;
  write_coupling_table(m, out);
  return out.str();
}

XYModel parse_coupling_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&lineno](const std::string& what) {
    throw std::invalid_argument("coupling table line " + std::to_string(lineno) + ": " + what);
  };

  XYModel m;
  bool header = false;
  std::vector<bool> onsite_seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    try {
      if (!header) {
        if (tok.size() != 2) fail("expected header 'd tau'");
        const std::size_t d = std::stoul(tok[0]);
        if (d == 0) fail("d must be positive");
        m = XYModel::zero(d, std::stod(tok[1]));
        onsite_seen.assign(d, false);
        header = true;
      } else if (tok.size() == 4) {
        const std::size_t r = std::stoul(tok[0]);
        const std::size_t c = std::stoul(tok[1]);
        if (r >= m.d || c >= r) fail("coupling rows need d > m > n");
        const auto ri = static_cast<Eigen::Index>(r);
        const auto ci = static_cast<Eigen::Index>(c);
        m.J(ri, ci) = m.J(ci, ri) = std::stod(tok[2]);
        m.Jp(ri, ci) = std::stod(tok[3]);
        m.Jp(ci, ri) = -m.Jp(ri, ci);
      } else if (tok.size() == 2) {
        const std::size_t s = std::stoul(tok[0]);
        if (s >= m.d) fail("site out of range");
        m.onsite[s] = std::stod(tok[1]);
        onsite_seen[s] = true;
      } else {
        fail("expected 'm n J Jp' or 'm onsite'");
      }
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("coupling table line", 0) == 0) throw;
      fail("malformed number");
    } catch (const std::out_of_range&) {
      fail("number out of range");
    }
  }
  if (!header) throw std::invalid_argument("coupling table is empty");
  for (std::size_t s = 0; s < m.d; ++s) {
    if (!onsite_seen[s]) throw std::invalid_argument("coupling table misses onsite energy of site " + std::to_string(s));
  }
  return m;
}

}  // namespace pstnet
