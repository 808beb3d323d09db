#pragma once

// Experiment reports and their JSON / CSV serialization.
//
// JSON layout (schema_version 1):
//   schema_version, library_version, command, config, entropy_unit,
//   runs: [{k, d, m, summary{...}, labels{...}, entropy_fields[...],
//           trial_columns[...], trials[[...], ...]}],
//   plot_data: [{x, y, series}], timing{wall_seconds}
// Keys are sorted. Unavailable values are null.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chanlab/harness/config.hpp"

namespace chanlab::harness {

inline constexpr int kSchemaVersion = 1;

using Cell = std::optional<double>;

struct RunRecord {
  Eigen::Index k = 0;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  std::map<std::string, Cell> summary;
  std::map<std::string, std::string> labels;
  /// Names in summary / trial_columns that hold entropies (converted by --bits).
  std::vector<std::string> entropy_fields;
  std::vector<std::string> trial_columns;
  std::vector<std::vector<Cell>> trials;
};

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
  std::string series;
};

struct ExperimentReport {
  std::string command;
  std::string library_version;
  ExperimentConfig config;
  std::string entropy_unit = "nats";
  std::vector<RunRecord> runs;
  std::vector<PlotPoint> plot_data;
  std::optional<double> wall_seconds;
};

std::string library_version();

/// Copy with every entropy field divided by ln 2 and unit "bits". A report
/// already in bits is returned unchanged.
ExperimentReport to_bits(const ExperimentReport& report);

/// Throws std::logic_error if a stored value is NaN or infinite.
void require_finite(const ExperimentReport& report);

nlohmann::json to_json(const ExperimentReport& report, bool include_timing = true);
ExperimentReport report_from_json(const nlohmann::json& j);

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
std::string to_json_text(const ExperimentReport& report, bool include_timing = true);

/// Header "run,k,d,m,trial,<columns>" then one row per trial.
std::string to_csv_text(const ExperimentReport& report);
/// Header "x,y,series" then one row per plot point.
std::string plot_csv_text(const ExperimentReport& report);

/// Path of the plot-data companion: "<stem>.plot.csv" next to `path`.
std::string plot_data_path(const std::string& path);

/// Text of the main output file for `format` ("json" or "csv"), converted to
/// bits first when config.bits is set.
std::string render_report(const ExperimentReport& report, const std::string& format);

/// Writes `report` as json or csv (plus the plot-data CSV when there are plot
/// points and the format is csv). Converts to bits first when config.bits is
/// set. Throws IoError naming the path, DomainError on an unknown format.
void emit_report(const ExperimentReport& report, const std::string& path,
                 const std::string& format);

ExperimentReport parse_report_file(const std::string& path);

}  // namespace chanlab::harness
