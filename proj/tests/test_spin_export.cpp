#include <gtest/gtest.h>

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"
#include "pstnet/spin_export.hpp"

namespace pstnet {
namespace {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

double max_diff(const XYModel& a, const XYModel& b) {
  double worst = std::max(max_abs(a.J - b.J), max_abs(a.Jp - b.Jp));
  for (std::size_t s = 0; s < a.d; ++s) worst = std::max(worst, std::abs(a.onsite[s] - b.onsite[s]));
  return worst;
}

// Full 2^d spin Hamiltonian of an XY model, spin m being bit m of the basis
// index (1 = excited).
ComplexMatrix spin_hamiltonian(const XYModel& m) {
  ComplexMatrix x(2, 2), y(2, 2), up(2, 2);
  // Local basis order (down, up).
  x << 0, 1, 1, 0;
  y << 0, Complex(0, 1), Complex(0, -1), 0;
  up << 0, 0, 0, 1;
  const auto d = static_cast<int>(m.d);
  auto embed = [d](const std::vector<std::pair<int, ComplexMatrix>>& ops) {
    ComplexMatrix full = ComplexMatrix::Identity(1, 1);
    for (int site = d - 1; site >= 0; --site) {
      ComplexMatrix local = ComplexMatrix::Identity(2, 2);
      for (const auto& [s, op] : ops) {
        if (s == site) local = op;
      }
      full = Eigen::kroneckerProduct(full, local).eval();
    }
    return full;
  };
  const Eigen::Index dim = Eigen::Index{1} << d;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int a = 0; a < d; ++a) {
    h += m.onsite[static_cast<std::size_t>(a)] * embed({{a, up}});
    for (int b = 0; b < a; ++b) {
      h += 0.5 * m.J(a, b) * (embed({{a, x}, {b, x}}) + embed({{a, y}, {b, y}}));
      h += 0.5 * m.Jp(a, b) * (embed({{a, x}, {b, y}}) - embed({{a, y}, {b, x}}));
    }
  }
  return h;
}

struct RandomFiveSite {
  FiveSiteIntegers x;
  Complex alpha;
  Complex beta;
  double tau;
};

RandomFiveSite draw_five_site(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> xs(-6, 6);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> taus(0.25, 4.0);
  const double theta = angle(rng) / 4.0;
  return {{xs(rng), xs(rng), xs(rng), xs(rng), xs(rng)},
          std::polar(std::cos(theta), angle(rng)),
          std::polar(std::sin(theta), angle(rng)),
          taus(rng)};
}

TEST(ToXy, SwapHasOneCoupling) {
  SpectrumSpec spec;
  spec.x[{Fraction(0), 1}] = 0;
  spec.x[{Fraction(1, 2), 1}] = 1;
  const XYModel m = to_xy(build_hamiltonian(Permutation({1, 0}), spec));
  EXPECT_NEAR(m.onsite[0], M_PI / 2.0, 1e-15);
  EXPECT_NEAR(m.onsite[1], M_PI / 2.0, 1e-15);
  EXPECT_NEAR(m.J(1, 0), -M_PI / 2.0, 1e-15);
  EXPECT_NEAR(m.Jp(1, 0), 0.0, 1e-15);
  EXPECT_EQ(format_coupling_table(m), "2 1\n1 0 -1.57079632679 0\n0 1.57079632679\n1 1.57079632679\n");
}

TEST(ToXy, SingleExcitationBlockOfTheSpinModel) {
  std::mt19937_64 rng(12);
  for (std::size_t d : {2u, 3u, 4u}) {
    const Permutation p = oracle::random_permutation(rng, d);
    const ComplexMatrix h = build_hamiltonian(p, oracle::random_spec(rng, p, true)).matrix();
    const ComplexMatrix full = spin_hamiltonian(to_xy(h));
    ComplexMatrix block(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index c = 0; c < block.cols(); ++c) block(r, c) = full(Eigen::Index{1} << r, Eigen::Index{1} << c);
    }
    EXPECT_LE(max_abs(block - h), 1e-12) << "d = " << d;
    EXPECT_LE(std::abs(full(0, 0)), 1e-15);
  }
}

TEST(FiveSiteClosedForm, MatchesSpectralConstruction) {
  std::mt19937_64 rng(99);
  for (int draw = 0; draw < 100; ++draw) {
    const auto c = draw_five_site(rng);
    const XYModel closed = five_site_xy_closed_form(c.x, c.alpha, c.beta, c.tau);
    const XYModel built = to_xy(build_hamiltonian(five_site_permutation(), c.x.to_spec(c.alpha, c.beta, c.tau)));
    EXPECT_LE(max_diff(closed, built), 1e-12) << "draw " << draw;
  }
}

TEST(FiveSiteClosedForm, EqualZeroIntegersDecoupleTheCycles) {
  std::mt19937_64 rng(3);
  for (int draw = 0; draw < 20; ++draw) {
    auto c = draw_five_site(rng);
    c.x.zero_pair = c.x.zero_logical;
    const XYModel m = to_xy(build_hamiltonian(five_site_permutation(), c.x.to_spec(c.alpha, c.beta, c.tau)));
    for (Eigen::Index logical : {0, 2, 4}) {
      for (Eigen::Index pair : {1, 3}) {
        EXPECT_LE(std::abs(m.J(logical, pair)), 1e-12);
        EXPECT_LE(std::abs(m.Jp(logical, pair)), 1e-12);
      }
    }
  }
}

TEST(FiveSiteClosedForm, RejectsUnnormalizedMixing) {
  EXPECT_THROW(five_site_xy_closed_form(FiveSiteIntegers{}, 1.0, 0.5), std::invalid_argument);
}

TEST(FromXy, InvertsToXy) {
  std::mt19937_64 rng(21);
  for (int draw = 0; draw < 100; ++draw) {
    const Permutation p = oracle::random_permutation(rng, 1 + draw % 8);
    const ComplexMatrix h = build_hamiltonian(p, oracle::random_spec(rng, p, true)).matrix();
    EXPECT_LE(max_abs(from_xy(to_xy(h)) - h), 1e-12);
  }
}

TEST(FromXy, RejectsBrokenSymmetry) {
  XYModel m = XYModel::zero(3);
  m.J(1, 0) = 1.0;
  EXPECT_THROW(from_xy(m), std::invalid_argument);
  m.J(0, 1) = 1.0;
  EXPECT_NO_THROW(from_xy(m));
  m.Jp(2, 0) = 0.5;
  m.Jp(0, 2) = 0.5;
  EXPECT_THROW(from_xy(m), std::invalid_argument);
  XYModel diag = XYModel::zero(2);
  diag.J(1, 1) = 1.0;
  EXPECT_THROW(from_xy(diag), std::invalid_argument);
  XYModel short_onsite = XYModel::zero(2);
  short_onsite.onsite.pop_back();
  EXPECT_THROW(from_xy(short_onsite), std::invalid_argument);
}

TEST(CouplingTable, RoundTripsToTwelveDigits) {
  std::mt19937_64 rng(4);
  for (int draw = 0; draw < 20; ++draw) {
    const auto c = draw_five_site(rng);
    const XYModel m = five_site_xy_closed_form(c.x, c.alpha, c.beta, c.tau);
    const XYModel back = parse_coupling_table(format_coupling_table(m));
    EXPECT_EQ(back.d, 5u);
    EXPECT_NEAR(back.tau, c.tau, 1e-11 * c.tau);
    EXPECT_LE(max_diff(back, m), 1e-10);
    EXPECT_EQ(format_coupling_table(back), format_coupling_table(m));
  }
}

TEST(CouplingTable, ParseErrorsNameTheLine) {
  EXPECT_THROW(parse_coupling_table(""), std::invalid_argument);
  EXPECT_THROW(parse_coupling_table("2 1\n0 0.5\n"), std::invalid_argument);
  try {
    parse_coupling_table("2 1\n0 1 0.5 0\n0 1\n1 1\n");
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    parse_coupling_table("2 1\n1 0 x 0\n");
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_EQ(std::string(e.what()), "coupling table line 2: malformed number");
  }
}

}  // namespace
}  // namespace pstnet
