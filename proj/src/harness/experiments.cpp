#include "chanlab/harness/experiments.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "chanlab/chaining.hpp"
#include "chanlab/channel.hpp"
#include "chanlab/concentration.hpp"
#include "chanlab/entropy.hpp"
#include "chanlab/errors.hpp"
#include "chanlab/parallel.hpp"
#include "chanlab/sampling.hpp"
#include "chanlab/stats.hpp"

namespace chanlab::harness {

namespace {

std::uint64_t point_seed(std::uint64_t seed, const GridPoint& g) {
  return derive_seed(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(g.k)),
                                 static_cast<std::uint64_t>(g.d)),
                     static_cast<std::uint64_t>(g.m));
}

std::string grid_tag(const GridPoint& g) {
  std::ostringstream os;
  if (!g.d_token.empty()) {
    os << "[d=" << g.d_token;
    if (!g.m_token.empty()) os << ",m=" << g.m_token;
    os << "]";
  }
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

RunRecord make_run(const GridPoint& g, std::vector<std::string> columns) {
  RunRecord run;
  run.k = g.k;
  run.d = g.d;
  run.m = g.m;
  run.trial_columns = std::move(columns);
  return run;
}

void add_order_stats(RunRecord& run, const std::string& prefix,
                     const std::vector<double>& values) {
  if (values.empty()) return;
  const OrderSummary s = summarize(values);
  run.summary[prefix + "_median"] = s.median;
  run.summary[prefix + "_q1"] = s.q1;
  run.summary[prefix + "_q3"] = s.q3;
  run.summary[prefix + "_mean"] = s.mean;
  run.summary[prefix + "_min"] = s.min;
  run.summary[prefix + "_max"] = s.max;
}

void add_rows(RunRecord& run, const std::vector<std::vector<double>>& columns) {
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t t = 0; t < rows; ++t) {
    std::vector<Cell> row;
    for (const auto& col : columns) row.emplace_back(col[t]);
    run.trials.push_back(std::move(row));
  }
}

std::function<double(const CMatrix&)> family_function(ObjectiveFamily family) {
  switch (family) {
    case ObjectiveFamily::kGTilde: return [](const CMatrix& x) { return g_tilde(x); };
    case ObjectiveFamily::kOpNorm: return [](const CMatrix& x) { return operator_norm(x); };
    case ObjectiveFamily::kSchatten4:
      return [](const CMatrix& x) { return schatten_norm(x, 4.0); };
  }
  throw DomainError("unknown objective family");
}

double family_lipschitz(ObjectiveFamily family) {
  return family == ObjectiveFamily::kGTilde ? 2.0 : 1.0;
}

ObjectiveFamily family_or(const ExperimentConfig& cfg, ObjectiveFamily fallback) {
  return cfg.objective.empty() ? fallback : objective_family_from_string(cfg.objective);
}

std::string prob_key(const std::string& prefix, double x) { return prefix + "@" + fmt(x); }

SectionBudget section_budget(const ExperimentConfig& cfg) {
  return {cfg.probes, cfg.workers};
}

// ---------------------------------------------------------------------------

RunRecord violation_run(const ExperimentConfig& cfg, const GridPoint& g,
                        std::vector<PlotPoint>& plot) {
  const auto k = g.k;
  const auto d = g.d;
  const auto m = g.m;
  const double lambda = static_cast<double>(m) / static_cast<double>(k * d);
  if (k < 2) throw DomainError("violation: k must be >= 2");
  const double u_bound = smin_product_upper_bound(k, lambda);
  const double log_k = std::log(static_cast<double>(k));
  const std::uint64_t base = point_seed(cfg.seed, g);

  struct Row {
    double overlap = 0, u_at_overlap = 0, s1 = 0, g_hat = 0, h = 0, gap = 0;
    double s1_converged = 0;
    Cell product_entropy;
  };
  std::vector<Row> rows(static_cast<std::size_t>(cfg.trials));
  parallel_for(rows.size(), cfg.workers, [&](std::size_t t) {
    RngStream stream(base, t);
    const RandomChannel phi = sample_channel(k, d, m, stream);
    Row& r = rows[t];
    r.overlap = entangled_overlap_from_isometry(phi);
    r.u_at_overlap = smin_product_upper_bound(k, std::min(1.0, r.overlap));
    if (product_output_cost(phi) <= cfg.budget) {
      r.product_entropy = von_neumann(product_output_on_entangled(phi, cfg.budget)).nats;
    }
    OptimizerConfig opt = cfg.optimizer;
    opt.seed = derive_seed(derive_seed(base, t), 1);
    const SminSearchResult s1 = smin_upper_by_search(phi, opt);
    r.s1 = s1.value;
    r.s1_converged = s1.converged ? 1.0 : 0.0;
    opt.seed = derive_seed(derive_seed(base, t), 2);
    const ExtremizeResult gmax =
        riemannian_extremize(g_objective(phi.isometry(), k, d), m, Direction::kMaximize, opt);
    r.g_hat = g_tilde(phi.image_matrix(gmax.argpoint));
    r.h = smin_channel_bound_from_gmax(k, r.g_hat);
    r.gap = u_bound - 2.0 * r.s1;
  });

  RunRecord run = make_run(g, {"overlap", "smin_product_upper_at_overlap", "product_entropy",
                               "smin_single_upper", "s1_converged", "g_max_estimate",
                               "smin_hs_heuristic_lower", "gap_diagnostic"});
  run.entropy_fields = {"smin_product_upper",
                        "smin_product_upper_at_overlap",
                        "product_entropy",
                        "smin_single_upper",
                        "smin_hs_heuristic_lower",
                        "gap_diagnostic",
                        "log_k",
                        "two_log_k",
                        "smin_single_upper_median",
                        "smin_hs_heuristic_lower_median",
                        "gap_diagnostic_median",
                        "product_entropy_median"};
  std::vector<double> s1s, hs, gaps, overlaps, ghats, products;
  int h_above_s1 = 0;
  int s1_above_log_k = 0;
  int overlap_below_floor = 0;
  for (const Row& r : rows) {
    run.trials.push_back({r.overlap, r.u_at_overlap, r.product_entropy, r.s1, r.s1_converged,
                          r.g_hat, r.h, r.gap});
    s1s.push_back(r.s1);
    hs.push_back(r.h);
    gaps.push_back(r.gap);
    overlaps.push_back(r.overlap);
    ghats.push_back(r.g_hat);
    if (r.product_entropy) products.push_back(*r.product_entropy);
    if (r.h > r.s1 + 1e-9) ++h_above_s1;
    if (r.s1 > log_k + 1e-9) ++s1_above_log_k;
    if (r.overlap < lambda - 1e-9) ++overlap_below_floor;
  }
  run.summary["lambda"] = lambda;
  run.summary["smin_product_upper"] = u_bound;
  run.summary["log_k"] = log_k;
  run.summary["two_log_k"] = 2.0 * log_k;
  run.summary["smin_single_upper_median"] = median(s1s);
  run.summary["smin_hs_heuristic_lower_median"] = median(hs);
  run.summary["gap_diagnostic_median"] = median(gaps);
  run.summary["overlap_median"] = median(overlaps);
  run.summary["g_max_estimate_median"] = median(ghats);
  run.summary["product_entropy_median"] =
      products.empty() ? Cell{} : Cell{median(products)};
  run.summary["heuristic_above_search_count"] = h_above_s1;
  run.summary["search_above_log_k_count"] = s1_above_log_k;
  run.summary["overlap_below_floor_count"] = overlap_below_floor;
  run.labels["smin_product_upper"] = "certified upper bound on S_min of the product channel";
  run.labels["smin_single_upper"] = "certified upper bound on S_min (feasible input)";
  run.labels["smin_hs_heuristic_lower"] =
      "heuristic: uses an optimizer estimate of max g_tilde, not a certified maximum";
  run.labels["gap_diagnostic"] =
      "indicative: U - 2*S1; a violation would need a certified lower bound on S_min";
  run.labels["product_entropy"] =
      products.size() == rows.size() ? "exact" : "skipped where the cost exceeds the budget";

  const std::string tag = grid_tag(g);
  plot.push_back({static_cast<double>(k), median(gaps), "gap_diagnostic_median" + tag});
  plot.push_back({static_cast<double>(k), u_bound, "smin_product_upper" + tag});
  plot.push_back({static_cast<double>(k), 2.0 * median(s1s), "two_smin_single_upper" + tag});
  return run;
}

RunRecord window_run(const ExperimentConfig& cfg, const GridPoint& g, bool eigen,
                     std::vector<PlotPoint>& plot) {
  const double c = eigen ? cfg.constant("C0", 6.0) : cfg.constant("C_win", 2.0);
  const std::uint64_t seed = point_seed(cfg.seed, g);
  const WindowReport w =
      eigen ? eigen_window_experiment(g.k, g.d, cfg.trials, c, seed, cfg.workers)
            : singular_window_experiment(g.k, g.d, cfg.trials, c, seed, cfg.workers);
  RunRecord run = make_run(g, {"deviation", "pass"});
  std::vector<double> pass;
  for (double dev : w.deviations) pass.push_back(dev < c ? 1.0 : 0.0);
  add_rows(run, {w.deviations, pass});
  run.summary["window_constant"] = c;
  run.summary["pass_fraction"] = w.pass_fraction;
  run.summary["worst_deviation"] = w.worst_deviation;
  add_order_stats(run, "deviation", w.deviations);
  plot.push_back({static_cast<double>(g.k), w.pass_fraction, "pass_fraction" + grid_tag(g)});
  return run;
}

double central_reference(ObjectiveFamily family, Eigen::Index k, Eigen::Index d) {
  const double kd = static_cast<double>(k);
  const double dd = static_cast<double>(d);
  switch (family) {
    case ObjectiveFamily::kOpNorm: return 1.0 / std::sqrt(kd) + 1.0 / std::sqrt(dd);
    case ObjectiveFamily::kGTilde: return std::sqrt(1.0 / dd);
    case ObjectiveFamily::kSchatten4: return std::pow(1.0 / kd + 1.0 / dd, 0.25);
  }
  return 0.0;
}

RunRecord central_value_run(const ExperimentConfig& cfg, const GridPoint& g,
                            std::vector<PlotPoint>& plot) {
  const ObjectiveFamily family = family_or(cfg, ObjectiveFamily::kOpNorm);
  const std::vector<double> values =
      sample_values(matrix_function(g.k, g.d, family_function(family)),
                    hs_sphere_sampler(g.k, g.d), cfg.trials, point_seed(cfg.seed, g),
                    cfg.workers);
  if (values.size() < 100) throw DomainError("central-value: trials must be >= 100");
  RunRecord run = make_run(g, {"value"});
  add_rows(run, {values});
  add_order_stats(run, "value", values);
  const double ref = central_reference(family, g.k, g.d);
  run.summary["reference"] = ref;
  run.summary["median_relative_error"] = std::abs(median(values) - ref) / ref;
  run.labels["objective"] = to_string(family);
  plot.push_back({static_cast<double>(g.k), median(values), "median" + grid_tag(g)});
  plot.push_back({static_cast<double>(g.k), ref, "reference" + grid_tag(g)});
  return run;
}

RunRecord levy_tail_run(const ExperimentConfig& cfg, const GridPoint& g,
                        std::vector<PlotPoint>& plot) {
  const ObjectiveFamily family = family_or(cfg, ObjectiveFamily::kOpNorm);
  const std::vector<double> eps =
      cfg.eps.empty() ? std::vector<double>{0.01, 0.02, 0.05, 0.1, 0.2} : cfg.eps;
  const PointFunction f = matrix_function(g.k, g.d, family_function(family));
  const PointSampler sampler = hs_sphere_sampler(g.k, g.d);
  const std::uint64_t seed = point_seed(cfg.seed, g);
  const double n_real = 2.0 * static_cast<double>(g.k * g.d);
  const TailCurve curve = levy_tail_experiment(f, family_lipschitz(family), n_real, sampler,
                                               eps, cfg.trials, seed, cfg.workers);
  const std::vector<double> values = sample_values(f, sampler, cfg.trials, seed, cfg.workers);
  std::vector<double> dev;
  for (double v : values) dev.push_back(std::abs(v - curve.central_value));
  RunRecord run = make_run(g, {"value", "deviation"});
  add_rows(run, {values, dev});
  run.summary["central_value"] = curve.central_value;
  run.summary["lipschitz"] = family_lipschitz(family);
  run.summary["c1_fit"] = curve.c1_fit ? Cell{*curve.c1_fit} : Cell{};
  for (std::size_t i = 0; i < eps.size(); ++i) {
    run.summary[prob_key("exceed_prob", eps[i])] = curve.exceed_prob[i];
    plot.push_back({eps[i], curve.exceed_prob[i],
                    "exceed_prob[k=" + std::to_string(g.k) + ",d=" + std::to_string(g.d) + "]"});
  }
  run.labels["objective"] = to_string(family);
  run.labels["central_kind"] = to_string(curve.central_kind);
  return run;
}

RunRecord lipschitz_run(const ExperimentConfig& cfg, const GridPoint& g,
                        std::vector<PlotPoint>& plot) {
  const LipschitzRestrictionReport r =
      lipschitz_restriction_test(g.k, g.d, cfg.trials, point_seed(cfg.seed, g), cfg.workers);
  RunRecord run = make_run(g, {"ratio"});
  add_rows(run, {r.ratios});
  run.summary["pairs"] = r.pairs;
  run.summary["violations"] = r.violations;
  for (std::size_t l = 0; l < r.link_violations.size(); ++l) {
    run.summary["link_violations_" + std::to_string(l)] = r.link_violations[l];
  }
  run.summary["worst_ratio"] = r.worst_ratio;
  run.summary["rejections"] = static_cast<double>(r.rejections);
  plot.push_back({static_cast<double>(g.k), r.worst_ratio, "worst_ratio" + grid_tag(g)});
  return run;
}

RunRecord omega_run(const ExperimentConfig& cfg, const GridPoint& g,
                    std::vector<PlotPoint>& plot) {
  const OmegaMembershipReport r =
      omega_membership_experiment(g.k, g.d, g.m, cfg.subspace_trials, cfg.optimizer,
                                  point_seed(cfg.seed, g), section_budget(cfg));
  std::vector<double> member;
  for (bool b : r.member) member.push_back(b ? 1.0 : 0.0);
  RunRecord run = make_run(g, {"max_opnorm", "member"});
  add_rows(run, {r.max_opnorm, member});
  run.summary["threshold"] = r.threshold;
  run.summary["fraction"] = r.fraction;
  add_order_stats(run, "max_opnorm", r.max_opnorm);
  run.labels["max_opnorm"] = "lower estimate of the section maximum";
  plot.push_back({static_cast<double>(g.k), r.fraction, "fraction" + grid_tag(g)});
  return run;
}

RunRecord oscillation_run(const ExperimentConfig& cfg, const GridPoint& g,
                          std::vector<PlotPoint>& plot) {
  const ObjectiveFamily family = family_or(cfg, ObjectiveFamily::kGTilde);
  const OscillationReport r = oscillation_experiment(
      family, g.k, g.d, g.m, cfg.subspace_trials, cfg.optimizer, point_seed(cfg.seed, g),
      cfg.center_trials, section_budget(cfg));
  RunRecord run = make_run(g, {"section_max", "section_min", "osc"});
  add_rows(run, {r.section_max, r.section_min, r.osc_values});
  run.summary["center"] = r.center;
  add_order_stats(run, "osc", r.osc_values);
  add_order_stats(run, "section_max", r.section_max);
  run.labels["objective"] = to_string(family);
  run.labels["osc"] = "lower estimate: optimizer plus random probes";
  const std::string tag = grid_tag(g);
  plot.push_back({static_cast<double>(g.k), median(r.osc_values), "osc_median" + tag});
  plot.push_back({static_cast<double>(g.k), median(r.section_max), "section_max_median" + tag});
  return run;
}

RunRecord roundness_run(const ExperimentConfig& cfg, const GridPoint& g,
                        std::vector<PlotPoint>& plot) {
  const RoundnessReport r =
      schatten4_section_roundness(g.k, g.d, g.m, cfg.subspace_trials, cfg.optimizer,
                                  point_seed(cfg.seed, g), section_budget(cfg));
  std::vector<double> excess;
  for (double q : r.ratios) excess.push_back(q - 1.0);
  RunRecord run = make_run(g, {"max_norm", "min_norm", "ratio_minus_1"});
  add_rows(run, {r.max_norm, r.min_norm, excess});
  run.summary["edge"] = std::pow(static_cast<double>(g.k), -0.25);
  run.summary["edge_violations"] = r.edge_violations;
  add_order_stats(run, "ratio_minus_1", excess);
  plot.push_back(
      {static_cast<double>(g.k), median(excess), "ratio_minus_1_median" + grid_tag(g)});
  return run;
}

RunRecord subgaussian_run(const ExperimentConfig& cfg, const GridPoint& g,
                          std::vector<PlotPoint>& plot) {
  const Eigen::Index n = g.k;
  if (n < 2) throw DomainError("subgaussian-pair: dimension (k) must be >= 2");
  const double dist = cfg.constant("dist", 0.2);
  if (!(dist > 0.0) || dist > std::sqrt(2.0)) {
    throw DomainError("subgaussian-pair: constant dist must lie in (0, sqrt 2]");
  }
  const double c = 1.0 - dist * dist / 2.0;
  CVector x = CVector::Zero(n);
  CVector y = CVector::Zero(n);
  x(0) = 1.0;
  y(0) = c;
  y(1) = std::sqrt(std::max(0.0, 1.0 - c * c));
  const std::vector<double> lambdas =
      cfg.eps.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4} : cfg.eps;
  const PointFunction f = [](const CVector& v) { return std::abs(v(0)); };
  const SubgaussianPairReport r = subgaussian_pair_experiment(
      f, x, y, cfg.trials, lambdas, point_seed(cfg.seed, g), cfg.workers);
  RunRecord run = make_run(g, {"difference"});
  add_rows(run, {r.differences});
  run.summary["aligned_distance"] = r.aligned_distance;
  run.summary["c1_fit"] = r.curve.c1_fit ? Cell{*r.curve.c1_fit} : Cell{};
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    run.summary[prob_key("exceed_prob", lambdas[i])] = r.curve.exceed_prob[i];
    plot.push_back({lambdas[i], r.curve.exceed_prob[i], "exceed_prob[n=" + std::to_string(n) + "]"});
  }
  run.labels["function"] = "|v_1|";
  return run;
}

RunRecord dudley_run(const ExperimentConfig& cfg, const GridPoint& g,
                     std::vector<PlotPoint>& plot) {
  const Eigen::Index n = g.k;
  const std::uint64_t seed = point_seed(cfg.seed, g);
  RngStream stream(seed, 0);
  std::vector<CVector> cloud;
  for (int i = 0; i < cfg.samples; ++i) cloud.push_back(haar_unit_vector(n, stream));
  const FinitePointSet ps = FinitePointSet::euclidean(std::move(cloud));
  const double a = cfg.constant("A", 2.0);
  const double alpha = cfg.constant("alpha", static_cast<double>(n) / 2.0);
  const GaussianProcessReport r =
      gaussian_process_dudley(ps, n, cfg.trials, a, alpha, derive_seed(seed, 1), cfg.workers);
  RunRecord run = make_run(g, {"sup_increment"});
  add_rows(run, {r.sup_increments});
  run.summary["bound"] = r.bound;
  run.summary["mean_sup"] = r.mean_sup;
  run.summary["radius"] = r.radius;
  run.summary["A"] = a;
  run.summary["alpha"] = alpha;
  run.summary["levels"] = static_cast<double>(r.nets.levels.size());
  for (const CoveringLevel& l : r.nets.levels) {
    run.summary["covering_number_j" + std::to_string(l.j)] = static_cast<double>(l.count);
    plot.push_back({static_cast<double>(l.j), static_cast<double>(l.count),
                    "covering_number[n=" + std::to_string(n) + "]"});
  }
  run.labels["process"] = "X_s = Re<g, s>/sqrt(n)";
  return run;
}

RunRecord net_certificate_run(const ExperimentConfig& cfg, const GridPoint& g,
                              std::vector<PlotPoint>& plot) {
  const Eigen::Index k = g.k;
  const double eta = cfg.constant("eta", 0.25);
  const std::uint64_t seed = point_seed(cfg.seed, g);
  const SphereNet net = sphere_net(k, static_cast<std::size_t>(cfg.samples), eta, seed);
  std::vector<double> cert(static_cast<std::size_t>(cfg.trials));
  std::vector<double> norm(cert.size());
  std::vector<double> ratio(cert.size());
  parallel_for(cert.size(), cfg.workers, [&](std::size_t t) {
    RngStream s(derive_seed(seed, 1), t);
    const CMatrix z = ginibre(k, k, s);
    const CMatrix delta = 0.5 * (z + z.adjoint());
    cert[t] = net_opnorm_certificate(delta, net);
    norm[t] = hermitian_spectrum(delta).cwiseAbs().maxCoeff();
    ratio[t] = norm[t] > 0.0 ? cert[t] / norm[t] : 1.0;
  });
  int violations = 0;
  for (std::size_t t = 0; t < cert.size(); ++t) {
    if (cert[t] < norm[t] - 1e-9 || cert[t] > 2.0 * norm[t] + 1e-9) ++violations;
  }
  RunRecord run = make_run(g, {"certificate", "opnorm", "ratio"});
  add_rows(run, {cert, norm, ratio});
  run.summary["net_size"] = static_cast<double>(net.points.size());
  run.summary["covering_radius"] = net.covering_radius;
  run.summary["covering_bound"] = covering_bound(k, eta);
  run.summary["eta"] = eta;
  run.summary["violations"] = violations;
  add_order_stats(run, "ratio", ratio);
  run.labels["net"] = "greedy net of a sampled cloud; covering radius measured on the cloud";
  plot.push_back({static_cast<double>(k), static_cast<double>(net.points.size()), "net_size"});
  return run;
}

using RunFn = RunRecord (*)(const ExperimentConfig&, const GridPoint&, std::vector<PlotPoint>&);

RunRecord singular_window_run(const ExperimentConfig& c, const GridPoint& g,
                              std::vector<PlotPoint>& p) {
  return window_run(c, g, false, p);
}

RunRecord eigen_window_run(const ExperimentConfig& c, const GridPoint& g,
                           std::vector<PlotPoint>& p) {
  return window_run(c, g, true, p);
}

RunFn lookup(const std::string& command) {
  if (command == "violation") return violation_run;
  if (command == "singular-window") return singular_window_run;
  if (command == "eigen-window") return eigen_window_run;
  if (command == "central-value") return central_value_run;
  if (command == "levy-tail") return levy_tail_run;
  if (command == "lipschitz-restriction") return lipschitz_run;
  if (command == "omega-membership") return omega_run;
  if (command == "oscillation") return oscillation_run;
  if (command == "schatten4-roundness") return roundness_run;
  if (command == "subgaussian-pair") return subgaussian_run;
  if (command == "dudley") return dudley_run;
  if (command == "net-certificate") return net_certificate_run;
  throw DomainError("unknown command '" + command + "'");
}

ExperimentReport run_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  const RunFn fn = lookup(cfg.command);
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.command = cfg.command;
  report.library_version = library_version();
  report.config = cfg;
  for (const GridPoint& g : resolve_grid(cfg)) report.runs.push_back(fn(cfg, g, report.plot_data));
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

ExperimentReport run_violation_pipeline(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.command = "violation";
  return run_grid(c);
}

ExperimentReport run_named_experiment(const ExperimentConfig& cfg) { return run_grid(cfg); }

}  // namespace chanlab::harness
