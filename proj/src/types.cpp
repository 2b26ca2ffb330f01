#include "pstnet/types.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pstnet {

Fraction wrap_turns(Fraction turns) {
  const std::int64_t num = turns.numerator();
  const std::int64_t den = turns.denominator();
  std::int64_t r = num % den;
  if (r < 0) r += den;
  return Fraction(r, den);
}

Complex unit_phase(Fraction turns) {
  const Fraction w = wrap_turns(turns);
  const double angle = kTwoPi * static_cast<double>(w.numerator()) /
                       static_cast<double>(w.denominator());
  return std::polar(1.0, angle);
}

std::string to_string(const Fraction& f) {
  if (f.denominator() == 1) return std::to_string(f.numerator());
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

namespace {

std::int64_t parse_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw std::invalid_argument("malformed rational '" + whole + "'");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + whole + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("malformed rational '" + whole + "'");
  return v;
}

}  // namespace

Fraction parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Fraction(parse_int(text, text));
  const std::int64_t num = parse_int(text.substr(0, slash), text);
  const std::int64_t den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return Fraction(num, den);
}

std::string format_complex(Complex z) {
  char buf[96];
  const double re = z.real() == 0.0 ? 0.0 : z.real();
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::snprintf(buf, sizeof buf, "%.12g%c%.12gi", re, std::signbit(im) ? '-' : '+',
                std::fabs(im));
  return buf;
}

std::string format_matrix(const ComplexMatrix& m) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
  return out.str();
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix g = u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

}  // namespace pstnet
