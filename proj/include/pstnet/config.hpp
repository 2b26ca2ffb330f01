#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pstnet/bus_designer.hpp"
#include "pstnet/permutation.hpp"
#include "pstnet/spectral_hamiltonian.hpp"

namespace pstnet {

/// Network description read from a line-oriented `key = value` file.
///
///   d = 5
///   permutation = [4, 3, 0, 1, 2]
///   logical = [0, 2, 4]            # source first, then stops in order
///   schedule = [1/2, 1]            # one fraction of tau per stop
///   tau = 1
///   grid = 512
///   output = trace.csv
///   x[0/1:1] = 0                   # phase numerator/denominator : slot
///   mixing[0/1] = [[0.6, 0.8], [0.8, -0.6]]
///
/// `#` starts a comment. When `schedule` is omitted the stops are spaced
/// evenly, stop j at j / (number of stops).
struct NetworkConfig {
  std::size_t d = 0;
  std::vector<Site> permutation;
  std::vector<Site> logical;
  std::vector<Fraction> schedule;
  double tau = 1.0;
  std::map<SlotKey, std::int64_t> x;
  std::map<Fraction, ComplexMatrix> mixing;
  std::size_t grid = 512;
  std::string output;

  Permutation permutation_value() const;
  /// Throws std::invalid_argument when fewer than two logical nodes are set.
  TransferSchedule schedule_value() const;
  SpectrumSpec spectrum() const;

  bool operator==(const NetworkConfig& o) const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string field, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Throws ConfigError naming the line and field at fault.
NetworkConfig parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const NetworkConfig& config);

}  // namespace pstnet
