#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pstnet/config.hpp"
#include "pstnet/spectral_hamiltonian.hpp"

namespace pstnet {

enum class Command { Decompose, Design, Simulate, Verify, Bound, Compat, ExportSpin };

/// "decompose", "design", "simulate", "verify", "bound", "compat", "export-spin".
std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

struct RunOptions {
  std::optional<std::string> out;
  std::optional<std::size_t> grid;
  std::int64_t search_bound = 8;
  std::int64_t branch_bound = 8;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Executes one command. Reports go to `out`, diagnostics to `err`.
/// Returns kExitOk, kExitVerificationFailed, or kExitUsage.
int run(Command command, const NetworkConfig& config, const RunOptions& options, std::ostream& out,
        std::ostream& err);

/// "t,P_0,...,P_{d-1}" header, then one row per sample in 9-decimal fixed
/// notation with LF line endings.
void write_trace_csv(const EvolutionTrace& trace, std::ostream& out);
/// Throws std::runtime_error if `path` cannot be written.
void write_trace_csv(const EvolutionTrace& trace, const std::string& path);

}  // namespace pstnet
