#pragma once

#include "chanlab/harness/config.hpp"
#include "chanlab/harness/report.hpp"

namespace chanlab::harness {

/// Per channel on every (k, d, m) grid point: entangled overlap, U =
/// smin_product_upper_bound(k, m/(kd)), exact product-output entropy when
/// within budget, S1 from smin_upper_by_search, the optimizer estimate of
/// max g_tilde and H = log k - k g_hat^2 (heuristic), gap_diagnostic = U - 2 S1
/// (indicative only).
ExperimentReport run_violation_pipeline(const ExperimentConfig& cfg);

/// Dispatches on cfg.command (any command in known_commands()). Validates the
/// config first. Fills wall_seconds.
ExperimentReport run_named_experiment(const ExperimentConfig& cfg);

}  // namespace chanlab::harness
