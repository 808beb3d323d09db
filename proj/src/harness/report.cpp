#include "chanlab/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "chanlab/errors.hpp"

namespace chanlab::harness {

namespace {

nlohmann::json cell_json(const Cell& c) {
  return c ? nlohmann::json(*c) : nlohmann::json(nullptr);
}

Cell cell_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string library_version() { return CHANLAB_VERSION; }

ExperimentReport to_bits(const ExperimentReport& report) {
  if (report.entropy_unit == "bits") return report;
  ExperimentReport out = report;
  out.entropy_unit = "bits";
  for (RunRecord& run : out.runs) {
    for (const std::string& name : run.entropy_fields) {
      auto s = run.summary.find(name);
      if (s != run.summary.end() && s->second) *s->second /= std::numbers::ln2;
      const auto col = std::find(run.trial_columns.begin(), run.trial_columns.end(), name);
      if (col == run.trial_columns.end()) continue;
      const auto idx = static_cast<std::size_t>(col - run.trial_columns.begin());
      for (auto& row : run.trials) {
        if (row[idx]) *row[idx] /= std::numbers::ln2;
      }
    }
  }
  return out;
}

void require_finite(const ExperimentReport& report) {
  auto check = [](const Cell& c, const std::string& where) {
    if (c && !std::isfinite(*c)) throw std::logic_error("non-finite report value in " + where);
  };
  for (const RunRecord& run : report.runs) {
    for (const auto& [name, value] : run.summary) check(value, "summary." + name);
    for (const auto& row : run.trials) {
      for (std::size_t i = 0; i < row.size(); ++i) check(row[i], "trial column " + std::to_string(i));
    }
  }
  for (const PlotPoint& p : report.plot_data) {
    check(p.x, "plot_data");
    check(p.y, "plot_data");
  }
  if (report.wall_seconds) check(report.wall_seconds, "timing");
}

nlohmann::json to_json(const ExperimentReport& report, bool include_timing) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["library_version"] = report.library_version;
  j["command"] = report.command;
  j["config"] = to_json(report.config);
  j["entropy_unit"] = report.entropy_unit;
  j["runs"] = nlohmann::json::array();
  for (const RunRecord& run : report.runs) {
    nlohmann::json r;
    r["k"] = run.k;
    r["d"] = run.d;
    r["m"] = run.m;
    r["summary"] = nlohmann::json::object();
    for (const auto& [name, value] : run.summary) r["summary"][name] = cell_json(value);
    r["labels"] = nlohmann::json::object();
    for (const auto& [name, value] : run.labels) r["labels"][name] = value;
    r["entropy_fields"] = run.entropy_fields;
    r["trial_columns"] = run.trial_columns;
    r["trials"] = nlohmann::json::array();
    for (const auto& row : run.trials) {
      nlohmann::json cells = nlohmann::json::array();
      for (const Cell& c : row) cells.push_back(cell_json(c));
      r["trials"].push_back(std::move(cells));
    }
    j["runs"].push_back(std::move(r));
  }
  j["plot_data"] = nlohmann::json::array();
  for (const PlotPoint& p : report.plot_data) {
    j["plot_data"].push_back({{"x", p.x}, {"y", p.y}, {"series", p.series}});
  }
  if (include_timing) {
    j["timing"] = {{"wall_seconds", report.wall_seconds ? nlohmann::json(*report.wall_seconds)
                                                        : nlohmann::json(nullptr)}};
  }
  return j;
}

ExperimentReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw DomainError("unsupported report schema_version");
    }
    ExperimentReport r;
    r.library_version = j.at("library_version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    merge_json(r.config, j.at("config"));
    r.entropy_unit = j.at("entropy_unit").get<std::string>();
    for (const auto& jr : j.at("runs")) {
      RunRecord run;
      run.k = jr.at("k").get<Eigen::Index>();
      run.d = jr.at("d").get<Eigen::Index>();
      run.m = jr.at("m").get<Eigen::Index>();
      for (const auto& [name, v] : jr.at("summary").items()) run.summary[name] = cell_from_json(v);
      for (const auto& [name, v] : jr.at("labels").items()) run.labels[name] = v.get<std::string>();
      run.entropy_fields = jr.at("entropy_fields").get<std::vector<std::string>>();
      run.trial_columns = jr.at("trial_columns").get<std::vector<std::string>>();
      for (const auto& row : jr.at("trials")) {
        std::vector<Cell> cells;
        for (const auto& c : row) cells.push_back(cell_from_json(c));
        run.trials.push_back(std::move(cells));
      }
      r.runs.push_back(std::move(run));
    }
    for (const auto& p : j.at("plot_data")) {
      r.plot_data.push_back(
          {p.at("x").get<double>(), p.at("y").get<double>(), p.at("series").get<std::string>()});
    }
    if (j.contains("timing") && !j["timing"].at("wall_seconds").is_null()) {
      r.wall_seconds = j["timing"]["wall_seconds"].get<double>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed report: ") + e.what());
  }
}

std::string to_json_text(const ExperimentReport& report, bool include_timing) {
  return to_json(report, include_timing).dump(2) + "\n";
}

std::string to_csv_text(const ExperimentReport& report) {
  std::vector<std::string> columns;
  if (!report.runs.empty()) columns = report.runs.front().trial_columns;
  std::ostringstream os;
  os << "run,k,d,m,trial";
  for (const std::string& c : columns) os << ',' << csv_field(c);
  os << '\n';
  for (std::size_t r = 0; r < report.runs.size(); ++r) {
    const RunRecord& run = report.runs[r];
    if (run.trial_columns != columns) {
      throw std::logic_error("to_csv_text: runs disagree on trial columns");
    }
    for (std::size_t t = 0; t < run.trials.size(); ++t) {
      os << r << ',' << run.k << ',' << run.d << ',' << run.m << ',' << t;
      for (const Cell& c : run.trials[t]) {
        os << ',';
        if (c) os << format_number(*c);
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string plot_csv_text(const ExperimentReport& report) {
  std::ostringstream os;
  os << "x,y,series\n";
  for (const PlotPoint& p : report.plot_data) {
    os << format_number(p.x) << ',' << format_number(p.y) << ',' << csv_field(p.series) << '\n';
  }
  return os.str();
}

std::string plot_data_path(const std::string& path) {
  const std::string ext = ".csv";
  if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size()) + ".plot.csv";
  }
  return path + ".plot.csv";
}

std::string render_report(const ExperimentReport& report, const std::string& format) {
  const ExperimentReport r = report.config.bits ? to_bits(report) : report;
  require_finite(r);
  if (format == "json") return to_json_text(r);
  if (format == "csv") return to_csv_text(r);
  throw DomainError("format must be json or csv, got '" + format + "'");
}

void emit_report(const ExperimentReport& report, const std::string& path,
                 const std::string& format) {
  const std::string text = render_report(report, format);
  write_file(path, text);
  if (format == "csv" && !report.plot_data.empty()) {
    write_file(plot_data_path(path), plot_csv_text(report));
  }
}

ExperimentReport parse_report_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("report '" + path + "' is not valid JSON: " + e.what());
  }
  return report_from_json(j);
}

}  // namespace chanlab::harness
