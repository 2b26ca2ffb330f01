#include "pstnet/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace pstnet {

ConfigError::ConfigError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + field + ": " + message),
      line_(line),
      field_(std::move(field)) {}

Permutation NetworkConfig::permutation_value() const { return Permutation(permutation); }

TransferSchedule NetworkConfig::schedule_value() const {
  if (logical.size() < 2) throw std::invalid_argument("config needs at least two logical nodes");
  TransferSchedule s;
  s.source = logical.front();
  for (std::size_t j = 1; j < logical.size(); ++j) s.stops.push_back({logical[j], schedule.at(j - 1)});
  return s;
}

SpectrumSpec NetworkConfig::spectrum() const {
  SpectrumSpec spec;
  spec.x = x;
  spec.mixing = mixing;
  spec.tau = tau;
  return spec;
}

bool NetworkConfig::operator==(const NetworkConfig& o) const {
  return d == o.d && permutation == o.permutation && logical == o.logical && schedule == o.schedule &&
         grid == o.grid && output == o.output && spectrum() == o.spectrum();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits "[a, b, c]" into trimmed items; "[]" gives none. Nested brackets
// are kept inside their item.
std::vector<std::string> split_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw std::invalid_argument("expected a bracketed list");
  const std::string body = t.substr(1, t.size() - 2);
  std::vector<std::string> items;
  if (trim(body).empty()) return items;
  int depth = 0;
  std::string current;
  for (char ch : body) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (depth < 0) throw std::invalid_argument("unbalanced brackets");
    if (ch == ',' && depth == 0) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  if (depth != 0) throw std::invalid_argument("unbalanced brackets");
  items.push_back(trim(current));
  for (const auto& item : items) {
    if (item.empty()) throw std::invalid_argument("empty list item");
  }
  return items;
}

std::int64_t parse_integer(const std::string& text) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + text + "' is not an integer");
  }
  if (pos != text.size()) throw std::invalid_argument("'" + text + "' is not an integer");
  return v;
}

double parse_real(const std::string& text) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + text + "' is not a number");
  }
  if (pos != text.size() || !std::isfinite(v)) throw std::invalid_argument("'" + text + "' is not a number");
  return v;
}

std::size_t parse_count(const std::string& text) {
  const std::int64_t v = parse_integer(text);
  if (v < 0) throw std::invalid_argument("'" + text + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

// "re", "im i", or "re+im i" / "re-im i" (no spaces).
Complex parse_complex(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  }
  if (text.empty()) throw std::invalid_argument("empty complex number");
  if (text.back() != 'i') return {parse_real(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // Find the sign that separates real and imaginary parts, skipping exponents.
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      return {parse_real(body.substr(0, k)), parse_real(body.substr(k))};
    }
  }
  if (body.empty() || body == "+") return {0.0, 1.0};
  if (body == "-") return {0.0, -1.0};
  return {0.0, parse_real(body)};
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string complex_text(Complex z) {
  if (z.imag() == 0.0) return real_text(z.real());
  std::string im = real_text(z.imag());
  if (im.front() != '-') im = "+" + im;
  return real_text(z.real()) + im + "i";
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& text, Fn&& item) {
  std::vector<T> out;
  for (const auto& s : split_list(text)) out.push_back(item(s));
  return out;
}

}  // namespace

NetworkConfig parse_config(const std::string& text) {
  NetworkConfig cfg;
  std::map<std::string, std::size_t> seen;  // field -> line
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, line, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "(empty)", "missing key");
    if (!seen.emplace(key, lineno).second) throw ConfigError(lineno, key, "duplicate key");

    try {
      if (key == "d") {
        cfg.d = parse_count(value);
        if (cfg.d == 0) throw std::invalid_argument("d must be positive");
      } else if (key == "permutation") {
        cfg.permutation = parse_list<Site>(value, parse_count);
      } else if (key == "logical") {
        cfg.logical = parse_list<Site>(value, parse_count);
      } else if (key == "schedule") {
        cfg.schedule = parse_list<Fraction>(value, [](const std::string& s) { return parse_fraction(s); });
        for (const auto& f : cfg.schedule) {
          if (f <= 0 || f > 1) throw std::invalid_argument("fraction " + to_string(f) + " outside (0,1]");
        }
      } else if (key == "tau") {
        cfg.tau = parse_real(value);
        if (!(cfg.tau > 0.0)) throw std::invalid_argument("tau must be positive");
      } else if (key == "grid") {
        cfg.grid = parse_count(value);
        if (cfg.grid < 2) throw std::invalid_argument("grid needs at least 2 samples");
      } else if (key == "output") {
        cfg.output = value;
      } else if (key.rfind("x[", 0) == 0 && key.back() == ']') {
        const SlotKey slot = parse_slot_key(key.substr(2, key.size() - 3));
        if (!cfg.x.emplace(slot, parse_integer(value)).second) {
          throw std::invalid_argument("slot " + to_string(slot) + " given twice");
        }
      } else if (key.rfind("mixing[", 0) == 0 && key.back() == ']') {
        const Fraction phase = parse_fraction(key.substr(7, key.size() - 8));
        if (phase < 0 || phase >= 1) throw std::invalid_argument("phase outside [0,1)");
        const auto rows = split_list(value);
        const auto n = static_cast<Eigen::Index>(rows.size());
        ComplexMatrix b(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
          const auto entries = split_list(rows[static_cast<std::size_t>(r)]);
          if (static_cast<Eigen::Index>(entries.size()) != n) throw std::invalid_argument("mixing matrix must be square");
          for (Eigen::Index c = 0; c < n; ++c) b(r, c) = parse_complex(entries[static_cast<std::size_t>(c)]);
        }
        if (!cfg.mixing.emplace(phase, b).second) throw std::invalid_argument("phase given twice");
      } else {
        throw std::invalid_argument("unknown key");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(lineno, key, e.what());
    }
  }

  auto line_of = [&seen](const std::string& k) {
    const auto it = seen.find(k);
    return it == seen.end() ? std::size_t{0} : it->second;
  };
  if (!seen.contains("d")) throw ConfigError(0, "d", "missing required key");
  if (!seen.contains("permutation")) throw ConfigError(0, "permutation", "missing required key");
  if (cfg.permutation.size() != cfg.d) {
    throw ConfigError(line_of("permutation"), "permutation",
                      "has " + std::to_string(cfg.permutation.size()) + " entries, expected d = " +
                          std::to_string(cfg.d));
  }
  try {
    (void)cfg.permutation_value();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line_of("permutation"), "permutation", e.what());
  }

  std::set<Site> logical_seen;
  for (Site s : cfg.logical) {
    if (s >= cfg.d) throw ConfigError(line_of("logical"), "logical", "site " + std::to_string(s) + " outside 0..d-1");
    if (!logical_seen.insert(s).second) {
      throw ConfigError(line_of("logical"), "logical", "site " + std::to_string(s) + " listed twice");
    }
  }
  const std::size_t stops = cfg.logical.empty() ? 0 : cfg.logical.size() - 1;
  if (!seen.contains("schedule")) {
    for (std::size_t j = 1; j <= stops; ++j) {
      cfg.schedule.emplace_back(static_cast<std::int64_t>(j), static_cast<std::int64_t>(stops));
    }
  } else {
    const std::size_t at = line_of("schedule");
    if (cfg.schedule.size() != stops) {
      throw ConfigError(at, "schedule", "needs one fraction per stop (" + std::to_string(stops) + ")");
    }
    for (std::size_t j = 1; j < cfg.schedule.size(); ++j) {
      if (cfg.schedule[j] <= cfg.schedule[j - 1]) throw ConfigError(at, "schedule", "fractions must increase");
    }
    if (!cfg.schedule.empty() && cfg.schedule.back() != Fraction(1)) {
      throw ConfigError(at, "schedule", "final fraction must be 1");
    }
  }
  return cfg;
}

std::string serialize_config(const NetworkConfig& c) {
  std::ostringstream out;
  auto list = [&out](const auto& items, auto&& fmt) {
    out << '[';
    for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << fmt(items[i]);
    out << "]\n";
  };
  auto plain = [](auto v) { return std::to_string(v); };

  out << "d = " << c.d << '\n';
  out << "permutation = ";
  list(c.permutation, plain);
  if (!c.logical.empty()) {
    out << "logical = ";
    list(c.logical, plain);
    out << "schedule = ";
    list(c.schedule, [](const Fraction& f) { return to_string(f); });
  }
  out << "tau = " << real_text(c.tau) << '\n';
  out << "grid = " << c.grid << '\n';
  if (!c.output.empty()) out << "output = " << c.output << '\n';
  for (const auto& [key, v] : c.x) out << "x[" << to_string(key) << "] = " << v << '\n';
  for (const auto& [phase, b] : c.mixing) {
    out << "mixing[" << phase.numerator() << '/' << phase.denominator() << "] = [";
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      out << (r ? ", [" : "[");
      for (Eigen::Index col = 0; col < b.cols(); ++col) out << (col ? ", " : "") << complex_text(b(r, col));
      out << ']';
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace pstnet
