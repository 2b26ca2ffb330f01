#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pstnet/cli.hpp"
#include "pstnet/config.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect state transfer network designer and simulator"};
  app.require_subcommand(1);

  std::string config_path;
  pstnet::RunOptions options;
  std::string out;
  std::size_t grid = 0;

  const char* commands[][2] = {
      {"decompose", "Cycle structure, eigenphase classes and slot keys"},
      {"design", "Choose integer energies for the configured bus"},
      {"simulate", "Write occupation probabilities over one period as CSV"},
      {"verify", "Check every scheduled transfer and U(tau)"},
      {"bound", "Cross-cycle occupation bounds against sampled maxima"},
      {"compat", "Test pairs of stop-time unitaries for a common Hamiltonian"},
      {"export-spin", "Write the XY coupling table"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Network config file")->required();
    sub->add_option("--out", out, "Output path");
    sub->add_option("--grid", grid, "Number of time samples on [0, tau]")->check(CLI::Range(2, 10000000));
    sub->add_option("--search-bound", options.search_bound, "Integer search box half-width")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--branch-bound", options.branch_bound, "Logarithm branch range")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pstnet::kExitOk : pstnet::kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const auto command = pstnet::parse_command(chosen->get_name());
  if (!out.empty()) options.out = out;
  if (grid != 0) options.grid = grid;

  pstnet::NetworkConfig config;
  try {
    config = pstnet::parse_config(read_file(config_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << '\n';
    return pstnet::kExitUsage;
  }
  return pstnet::run(*command, config, options, std::cout, std::cerr);
}
