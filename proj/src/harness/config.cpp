#include "chanlab/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chanlab/errors.hpp"

namespace chanlab::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

long long parse_integer(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw DomainError("invalid " + what + " '" + text + "'");
  }
  if (used != text.size()) throw DomainError("invalid " + what + " '" + text + "'");
  return v;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("invalid " + what + " '" + text + "'");
  }
  if (used != text.size()) throw DomainError("invalid " + what + " '" + text + "'");
  return v;
}

std::vector<std::string> token_array(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return parse_token_list(v.get<std::string>());
  if (v.is_number_integer()) return {std::to_string(v.get<long long>())};
  if (!v.is_array()) throw DomainError("config key '" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (e.is_string()) {
      out.push_back(trim(e.get<std::string>()));
    } else if (e.is_number_integer()) {
      out.push_back(std::to_string(e.get<long long>()));
    } else {
      throw DomainError("config key '" + key + "' holds a non-integer entry");
    }
  }
  return out;
}

int as_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw DomainError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

double as_double(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw DomainError("config key '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::vector<std::string> parse_token_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw DomainError("empty entry in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& t : parse_token_list(text)) {
    out.push_back(static_cast<int>(parse_integer(t, "integer")));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& t : parse_token_list(text)) out.push_back(parse_real(t, "number"));
  return out;
}

Eigen::Index resolve_d_token(const std::string& token, Eigen::Index k) {
  if (token.size() > 2 && token.substr(token.size() - 2) == "k2") {
    const long long c = parse_integer(token.substr(0, token.size() - 2), "d entry");
    return static_cast<Eigen::Index>(c) * k * k;
  }
  if (token == "k2") return k * k;
  return static_cast<Eigen::Index>(parse_integer(token, "d entry"));
}

Eigen::Index resolve_m_token(const std::string& token, Eigen::Index k, Eigen::Index d) {
  if (token == "kd") return k * d;
  if (token == "d") return d;
  if (token.rfind("d/", 0) == 0) {
    const long long c = parse_integer(token.substr(2), "m entry");
    if (c < 1) throw DomainError("m entry '" + token + "' needs a positive divisor");
    // floor(d / c), at least 1: odd k with d = 4k^2 is not divisible by 8
    return std::max<Eigen::Index>(1, d / static_cast<Eigen::Index>(c));
  }
  return static_cast<Eigen::Index>(parse_integer(token, "m entry"));
}

bool uses_subspace(const std::string& command) {
  return command == "violation" || command == "omega-membership" ||
         command == "oscillation" || command == "schatten4-roundness";
}

bool uses_d(const std::string& command) {
  return command != "subgaussian-pair" && command != "dudley" &&
         command != "net-certificate";
}

std::vector<GridPoint> resolve_grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> grid;
  for (int k : cfg.k) {
    if (k < 1) throw DomainError("k must be >= 1");
    if (!uses_d(cfg.command)) {
      grid.push_back({k, 0, 0, "", ""});
      continue;
    }
    for (const std::string& dt : cfg.d) {
      const Eigen::Index d = resolve_d_token(dt, k);
      if (d < 1) throw DomainError("d must be >= 1 (entry '" + dt + "')");
      if (!uses_subspace(cfg.command)) {
        grid.push_back({k, d, 0, dt, ""});
        continue;
      }
      for (const std::string& mt : cfg.m) {
        const Eigen::Index m = resolve_m_token(mt, k, d);
        if (m < 1 || m > k * d) {
          std::ostringstream os;
          os << "need 1 <= m <= k*d, got m=" << m << " for k=" << k << " d=" << d;
          throw DomainError(os.str());
        }
        grid.push_back({k, d, m, dt, mt});
      }
    }
  }
  return grid;
}

double ExperimentConfig::constant(const std::string& name, double fallback) const {
  const auto it = constants.find(name);
  return it == constants.end() ? fallback : it->second;
}

void ExperimentConfig::validate() const {
  const auto& names = known_commands();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw DomainError("unknown command '" + command + "'");
  }
  if (k.empty()) throw DomainError("k grid must be non-empty");
  if (uses_d(command) && d.empty()) throw DomainError("d grid must be non-empty");
  if (uses_subspace(command) && m.empty()) throw DomainError("m grid must be non-empty");
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (subspace_trials < 1) throw DomainError("subspace-trials must be >= 1");
  if (samples < 1) throw DomainError("samples must be >= 1");
  if (probes < 0) throw DomainError("probes must be >= 0");
  if (center_trials < 100) throw DomainError("center-trials must be >= 100");
  if (!(budget > 0.0)) throw DomainError("budget must be > 0");
  if (workers < 1) throw DomainError("workers must be >= 1");
  if (format != "json" && format != "csv") {
    throw DomainError("format must be json or csv, got '" + format + "'");
  }
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("eps entries must be > 0");
  }
  if (!std::is_sorted(eps.begin(), eps.end())) throw DomainError("eps must be ascending");
  for (const auto& [name, value] : constants) {
    if (!std::isfinite(value)) throw DomainError("constant '" + name + "' is not finite");
  }
  optimizer.validate();
  resolve_grid(*this);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["k"] = cfg.k;
  j["d"] = cfg.d;
  j["m"] = cfg.m;
  j["trials"] = cfg.trials;
  j["subspace-trials"] = cfg.subspace_trials;
  j["seed"] = cfg.seed;
  j["starts"] = cfg.optimizer.starts;
  j["max-iters"] = cfg.optimizer.max_iters;
  j["initial-step"] = cfg.optimizer.initial_step;
  j["step-shrink"] = cfg.optimizer.step_shrink;
  j["grad-tol"] = cfg.optimizer.grad_tol;
  j["rel-tol"] = cfg.optimizer.rel_tol;
  j["optimizer-seed"] = cfg.optimizer.seed;
  j["constant"] = nlohmann::json::object();
  for (const auto& [name, value] : cfg.constants) j["constant"][name] = value;
  j["objective"] = cfg.objective;
  j["eps"] = cfg.eps;
  j["samples"] = cfg.samples;
  j["probes"] = cfg.probes;
  j["center-trials"] = cfg.center_trials;
  j["budget"] = cfg.budget;
  j["out"] = cfg.out;
  j["format"] = cfg.format;
  j["bits"] = cfg.bits;
  return j;
}

static void merge_json_unchecked(ExperimentConfig& cfg, const nlohmann::json& input) {
  const nlohmann::json& j =
      input.is_object() && input.contains("config") && input.contains("schema_version")
          ? input.at("config")
          : input;
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      cfg.command = v.get<std::string>();
    } else if (key == "k") {
      cfg.k.clear();
      for (const std::string& t : token_array(v, key)) {
        cfg.k.push_back(static_cast<int>(parse_integer(t, "k entry")));
      }
    } else if (key == "d") {
      cfg.d = token_array(v, key);
    } else if (key == "m") {
      cfg.m = token_array(v, key);
    } else if (key == "trials") {
      cfg.trials = as_int(v, key);
    } else if (key == "subspace-trials") {
      cfg.subspace_trials = as_int(v, key);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw DomainError("seed must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "starts") {
      cfg.optimizer.starts = as_int(v, key);
    } else if (key == "max-iters") {
      cfg.optimizer.max_iters = as_int(v, key);
    } else if (key == "initial-step") {
      cfg.optimizer.initial_step = as_double(v, key);
    } else if (key == "step-shrink") {
      cfg.optimizer.step_shrink = as_double(v, key);
    } else if (key == "grad-tol") {
      cfg.optimizer.grad_tol = as_double(v, key);
    } else if (key == "rel-tol") {
      cfg.optimizer.rel_tol = as_double(v, key);
    } else if (key == "optimizer-seed") {
      if (!v.is_number_unsigned()) throw DomainError("optimizer-seed must be >= 0");
      cfg.optimizer.seed = v.get<std::uint64_t>();
    } else if (key == "constant") {
      if (!v.is_object()) throw DomainError("config key 'constant' must be an object");
      for (const auto& [name, value] : v.items()) cfg.constants[name] = as_double(value, name);
    } else if (key == "objective") {
      cfg.objective = v.get<std::string>();
    } else if (key == "eps") {
      if (v.is_string()) {
        cfg.eps = parse_double_list(v.get<std::string>());
      } else {
        cfg.eps.clear();
        for (const auto& e : v) cfg.eps.push_back(as_double(e, key));
      }
    } else if (key == "samples") {
      cfg.samples = as_int(v, key);
    } else if (key == "probes") {
      cfg.probes = as_int(v, key);
    } else if (key == "center-trials") {
      cfg.center_trials = as_int(v, key);
    } else if (key == "budget") {
      cfg.budget = as_double(v, key);
    } else if (key == "out") {
      cfg.out = v.get<std::string>();
    } else if (key == "format") {
      cfg.format = v.get<std::string>();
    } else if (key == "bits") {
      cfg.bits = v.get<bool>();
    } else if (key == "workers") {
      cfg.workers = as_int(v, key);
    } else {
      throw DomainError("unknown config key '" + key + "'");
    }
  }
}

void merge_json(ExperimentConfig& cfg, const nlohmann::json& input) {
  try {
    merge_json_unchecked(cfg, input);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed config value: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig cfg;
  merge_json(cfg, j);
  return cfg;
}

}  // namespace chanlab::harness
