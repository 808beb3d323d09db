#pragma once

// Experiment configuration. JSON keys mirror the command-line flags, so a
// config file, a CLI invocation and the "config" echo of a report are
// interchangeable.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chanlab/channel.hpp"
#include "chanlab/optimize.hpp"

namespace chanlab::harness {

/// One resolved grid point. m is 0 for commands that take no subspace.
struct GridPoint {
  Eigen::Index k = 0;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  std::string d_token;
  std::string m_token;
};

struct ExperimentConfig {
  std::string command;
  std::vector<int> k{2, 3, 4, 5, 6, 7, 8};
  /// Integers, or "<c>k2" for c*k^2.
  std::vector<std::string> d{"4k2", "16k2"};
  /// Integers, "d/<c>" for d/c, "kd" for k*d.
  std::vector<std::string> m{"d/8", "d/2"};
  int trials = 100;
  int subspace_trials = 20;
  std::uint64_t seed = 1;
  OptimizerConfig optimizer{};
  std::map<std::string, double> constants;
  std::string objective;      // empty means the command's default family
  std::vector<double> eps;    // tail grid; empty means the command default
  int samples = 1000;         // point-cloud size for net commands
  int probes = 1000;          // random probes per section
  int center_trials = 2000;
  double budget = kDefaultBudget;
  std::string out;
  std::string format = "json";
  bool bits = false;
  /// Not echoed: results never depend on it.
  int workers = 1;

  /// Throws DomainError on invalid values.
  void validate() const;

  double constant(const std::string& name, double fallback) const;
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{
      "violation",        "singular-window",      "eigen-window",
      "central-value",    "levy-tail",            "lipschitz-restriction",
      "omega-membership", "oscillation",          "schatten4-roundness",
      "subgaussian-pair", "dudley",               "net-certificate"};
  return names;
}

/// Whether the command ranges over subspace dimensions m.
bool uses_subspace(const std::string& command);
/// Whether the command ranges over d (otherwise k is the only dimension).
bool uses_d(const std::string& command);

/// Resolves the k/d/m grids in order k, then d, then m. Duplicates are kept.
std::vector<GridPoint> resolve_grid(const ExperimentConfig& cfg);

Eigen::Index resolve_d_token(const std::string& token, Eigen::Index k);
Eigen::Index resolve_m_token(const std::string& token, Eigen::Index k, Eigen::Index d);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Reads keys present in `j` over the values already in `cfg`. Accepts a whole
/// report too, using its "config" member. Unknown keys are rejected.
void merge_json(ExperimentConfig& cfg, const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Comma-separated lists.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::string> parse_token_list(const std::string& text);

}  // namespace chanlab::harness
