#include "pstnet/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pstnet/bus_designer.hpp"
#include "pstnet/spin_export.hpp"

namespace pstnet {

namespace {

struct Named {
  Command command;
  const char* name;
};

constexpr Named kCommands[] = {
    {Command::Decompose, "decompose"}, {Command::Design, "design"},
    {Command::Simulate, "simulate"},   {Command::Verify, "verify"},
    {Command::Bound, "bound"},         {Command::Compat, "compat"},
    {Command::ExportSpin, "export-spin"},
};

std::string fixed9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  // Rounding can produce "-0.000000000" for tiny negatives.
  if (std::string(buf) == "-0.000000000") return "0.000000000";
  return buf;
}

std::string braces(const std::vector<Site>& sites) {
  std::string s = "{";
  for (std::size_t i = 0; i < sites.size(); ++i) s += (i ? "," : "") + std::to_string(sites[i]);
  return s + "}";
}

// Destination for generated text: --out, then the config's output, then stdout.
template <typename Writer>
void emit(const std::optional<std::string>& path, std::ostream& out, Writer&& write) {
  if (!path || path->empty()) {
    write(out);
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + *path);
  write(file);
  if (!file.flush()) throw std::runtime_error("cannot write " + *path);
}

std::optional<std::string> output_path(const NetworkConfig& cfg, const RunOptions& opt) {
  if (opt.out) return opt.out;
  if (!cfg.output.empty()) return cfg.output;
  return std::nullopt;
}

int decompose(const NetworkConfig& cfg, std::ostream& out) {
  const Permutation p = cfg.permutation_value();
  out << "cycles: " << cycle_notation(p) << '\n';
  for (std::size_t i = 0; i < p.cycles().size(); ++i) {
    const auto& c = p.cycles()[i];
    out << "cycle " << i << ": " << braces(c.members) << " length " << c.length() << '\n';
  }
  for (const auto& cls : group_eigenvalues(p.cycles())) {
    out << "eigenphase " << to_string(cls.phase) << ": multiplicity " << cls.multiplicity() << ", cycles";
    for (auto s : cls.slots) out << ' ' << s;
    out << '\n';
  }
  out << "slots:";
  for (const auto& key : slot_keys(p)) out << ' ' << to_string(key);
  out << '\n';
  if (cfg.logical.empty()) return kExitOk;
  if (const auto violation = validate_logical_set(p, cfg.logical)) {
    out << "logical set: " << violation->describe(p) << '\n';
    return kExitVerificationFailed;
  }
  out << "logical set: ok (one cycle)\n";
  return kExitOk;
}

int design(const NetworkConfig& cfg, const RunOptions& opt, std::ostream& out) {
  const Permutation p = cfg.permutation_value();
  DesignOutcome outcome;
  try {
    outcome = design_subset_bus(p, cfg.schedule_value(), opt.search_bound);
  } catch (const DesignError& e) {
    out << "design rejected: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
  if (!outcome.spec) {
    out << "infeasible: no integers in [-" << opt.search_bound << ", " << opt.search_bound
        << "] reach every stop\n";
    return kExitVerificationFailed;
  }
  out << "method: " << to_string(outcome.method) << '\n';
  for (const auto& [key, v] : outcome.spec->x) out << "x[" << to_string(key) << "] = " << v << '\n';
  if (opt.out) {
    NetworkConfig designed = cfg;
    designed.x = outcome.spec->x;
    designed.mixing.clear();
    emit(opt.out, out, [&](std::ostream& o) { o << serialize_config(designed); });
  }
  return kExitOk;
}

int simulate(const NetworkConfig& cfg, const RunOptions& opt, std::ostream& out) {
  const Permutation p = cfg.permutation_value();
  const PstHamiltonian h = build_hamiltonian(p, cfg.spectrum());
  if (cfg.logical.empty()) throw std::invalid_argument("simulate needs a logical source node");
  const std::size_t samples = opt.grid.value_or(cfg.grid);
  if (samples < 2) throw std::invalid_argument("grid needs at least 2 samples");
  const auto times = uniform_grid(h.tau(), samples);
  const EvolutionTrace trace = occupation_probabilities(h, cfg.logical.front(), times);
  emit(output_path(cfg, opt), out, [&](std::ostream& o) { write_trace_csv(trace, o); });
  return kExitOk;
}

int verify(const NetworkConfig& cfg, std::ostream& out) {
  const Permutation p = cfg.permutation_value();
  const TransferSchedule schedule = cfg.schedule_value();
  const ScheduleCheck check = verify_schedule(p, cfg.spectrum(), schedule);
  out << "U(tau) matches permutation " << cycle_notation(p) << ": " << (check.permutation_ok ? "yes" : "NO")
      << '\n';
  for (std::size_t j = 0; j < check.stops.size(); ++j) {
    const StopCheck& s = check.stops[j];
    out << "stop " << j + 1 << ": " << schedule.source << " -> " << s.stop.site << " at t/tau = "
        << to_string(s.stop.at) << "  fidelity " << fixed9(s.magnitude);
    if (s.exact) out << "  exact " << (*s.exact ? "ok" : "fail");
    out << (s.passed ? "  ok" : "  FAILED") << '\n';
  }
  out << (check.passed() ? "all stops verified\n" : "verification failed\n");
  return check.passed() ? kExitOk : kExitVerificationFailed;
}

int bound(const NetworkConfig& cfg, const RunOptions& opt, std::ostream& out) {
  const Permutation p = cfg.permutation_value();
  if (cfg.logical.empty()) throw std::invalid_argument("bound needs a logical source node");
  const Site source = cfg.logical.front();
  const std::size_t home = p.cycle_index(source);
  std::optional<EvolutionTrace> trace;
  if (!cfg.x.empty()) {
    const PstHamiltonian h = build_hamiltonian(p, cfg.spectrum());
    const auto times = uniform_grid(h.tau(), opt.grid.value_or(cfg.grid));
    trace = occupation_probabilities(h, source, times);
  }
  bool within = true;
  const std::size_t d0 = p.cycles()[home].length();
  for (std::size_t i = 0; i < p.cycles().size(); ++i) {
    if (i == home) continue;
    const auto& c = p.cycles()[i];
    const LeakageBound b = occupation_bound(d0, c.length());
    out << "cycle " << braces(c.members) << " (d0=" << d0 << ", d1=" << c.length() << "): bound "
        << to_string(b.bound) << " = " << fixed9(b.value());
    if (trace) {
      double peak = 0.0;
      for (const auto& row : trace->probabilities) {
        for (Site s : c.members) peak = std::max(peak, row[s]);
      }
      out << ", sampled max " << fixed9(peak);
      if (peak > b.value() + 1e-9) {
        out << "  EXCEEDED";
        within = false;
      }
    }
    out << '\n';
  }
  return within ? kExitOk : kExitVerificationFailed;
}

int compat(const NetworkConfig& cfg, const RunOptions& opt, std::ostream& out) {
  const Permutation p = cfg.permutation_value();
  const PstHamiltonian h = build_hamiltonian(p, cfg.spectrum());
  const TransferSchedule schedule = cfg.schedule_value();
  bool all = true;
  for (std::size_t a = 0; a < schedule.stops.size(); ++a) {
    for (std::size_t b = a + 1; b < schedule.stops.size(); ++b) {
      const Fraction fa = schedule.stops[a].at;
      const Fraction fb = schedule.stops[b].at;
      const double ta = boost::rational_cast<double>(fa) * h.tau();
      const double tb = boost::rational_cast<double>(fb) * h.tau();
      const auto verdict = compatibility_check(evolution_operator_at(h, fa), ta, evolution_operator_at(h, fb), tb,
                                               opt.branch_bound);
      out << "U(" << to_string(fa) << " tau) vs U(" << to_string(fb) << " tau): ";
      if (verdict.compatible) {
        out << "compatible\n";
      } else {
        out << "incompatible (" << to_string(verdict.reason) << ")\n";
        all = false;
      }
    }
  }
  return all ? kExitOk : kExitVerificationFailed;
}

int export_spin(const NetworkConfig& cfg, const RunOptions& opt, std::ostream& out) {
  const PstHamiltonian h = build_hamiltonian(cfg.permutation_value(), cfg.spectrum());
  const XYModel model = to_xy(h);
  emit(output_path(cfg, opt), out, [&](std::ostream& o) { write_coupling_table(model, o); });
  return kExitOk;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& c : kCommands) {
    if (name == c.name) return c.command;
  }
  return std::nullopt;
}

std::string to_string(Command c) {
  for (const auto& n : kCommands) {
    if (n.command == c) return n.name;
  }
  return "unknown";
}

void write_trace_csv(const EvolutionTrace& trace, std::ostream& out) {
  const std::size_t d = trace.probabilities.empty() ? 0 : trace.probabilities.front().size();
  out << 't';
  for (std::size_t m = 0; m < d; ++m) out << ",P_" << m;
  out << '\n';
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out << fixed9(trace.times[k]);
    for (double v : trace.probabilities[k]) out << ',' << fixed9(v);
    out << '\n';
  }
}

void write_trace_csv(const EvolutionTrace& trace, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write " + path);
  write_trace_csv(trace, static_cast<std::ostream&>(file));
  if (!file.flush()) throw std::runtime_error("cannot write " + path);
}

int run(Command command, const NetworkConfig& config, const RunOptions& options, std::ostream& out,
        std::ostream& err) {
  try {
    switch (command) {
      case Command::Decompose:
        return decompose(config, out);
      case Command::Design:
        return design(config, options, out);
      case Command::Simulate:
        return simulate(config, options, out);
      case Command::Verify:
        return verify(config, out);
      case Command::Bound:
        return bound(config, options, out);
      case Command::Compat:
        return compat(config, options, out);
      case Command::ExportSpin:
        return export_spin(config, options, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pstnet
