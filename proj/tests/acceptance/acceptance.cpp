// Acceptance suite: one PASS/FAIL line per criterion, with its measured
// quantity and runtime. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "chanlab/chaining.hpp"
#include "chanlab/channel.hpp"
#include "chanlab/concentration.hpp"
#include "chanlab/entropy.hpp"
#include "chanlab/harness/experiments.hpp"
#include "chanlab/optimize.hpp"
#include "chanlab/sampling.hpp"
#include "chanlab/stats.hpp"
#include "oracles.hpp"

using namespace chanlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// tr (M M^+)^2 by explicit summation.
double quartic_oracle(const CMatrix& m) {
  const CMatrix a = oracle::partial_trace_second(matrix_to_vector(m), int(m.rows()), int(m.cols()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
  return s;
}

DensityMatrix random_state(Eigen::Index k, RngStream& s) {
  // Mixed states of every rank plus pure states.
  const Eigen::Index r = 1 + static_cast<Eigen::Index>(s.uniform() * double(k));
  const CMatrix g = ginibre(k, std::min(r, k), s);
  const CMatrix a = g * g.adjoint();
  return DensityMatrix(a / a.trace().real());
}

Outcome c01_fourth_moment_identity() {
  double worst = 0.0;
  int samples = 0;
  for (auto [k, d] : {std::pair{2, 8}, std::pair{4, 64}, std::pair{6, 144}}) {
    for (int t = 0; t < 1000; ++t) {
      RngStream s(101, std::uint64_t(k) * 100000 + t);
      const CMatrix m = uniform_hs_sphere(k, d, s);
      const double g = g_tilde(m);
      worst = std::max(worst, std::abs(g * g - (quartic_oracle(m) - 1.0 / k)));
      ++samples;
    }
  }
  return {worst <= 1e-9, fmt("max |g^2 - (tr|M|^4 - 1/k)| = %.3g over %.0f samples", worst, samples)};
}

Outcome c02_entropy_lemma() {
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    RngStream s(102, t);
    const Eigen::Index k = 2 + t % 7;
    const DensityMatrix sigma = random_state(k, s);
    const double entropy = oracle::von_neumann(sigma.matrix());
    const double dev = (sigma.matrix() - CMatrix::Identity(k, k) / double(k)).squaredNorm();
    const double bound = std::log(double(k)) - double(k) * dev;
    worst = std::max(worst, bound - entropy);
    if (entropy < bound - 1e-9) ++violations;
    if (std::abs(hs_entropy_lower_bound(sigma) - bound) > 1e-12) ++violations;
  }
  return {violations == 0, fmt("violations = %.0f, max (bound - S) = %.3g", violations, worst)};
}

Outcome c03_fourth_moment_mean() {
  const std::vector<double> v = sample_values(matrix_function(4, 64, quartic_oracle),
                                              hs_sphere_sampler(4, 64), 10000, 103);
  const double mean = chanlab::mean(v);
  const double target = 0.265625;
  const double rel = std::abs(mean - target) / target;
  return {rel <= 0.05, fmt("mean tr|M|^4 = %.6f vs %.6f (rel %.4f)", mean, target, rel)};
}

Outcome c04_opnorm_quantile() {
  const CentralValue c = central_value_estimate(
      matrix_function(4, 256, [](const CMatrix& m) { return operator_norm(m); }),
      hs_sphere_sampler(4, 256), 2000, 104);
  const double rel = std::abs(c.median - 0.5625) / 0.5625;
  return {rel <= 0.10, fmt("median ||M||_inf = %.5f vs 0.5625 (rel %.4f)", c.median, rel)};
}

Outcome c05_singular_window() {
  const double wide = singular_window_experiment(4, 256, 1000, 2.0, 105).pass_fraction;
  const double narrow = singular_window_experiment(4, 256, 1000, 0.1, 105).pass_fraction;
  return {wide >= 0.99 && narrow <= 0.5,
          fmt("pass fraction C=2: %.3f, C=0.1: %.3f", wide, narrow)};
}

Outcome c06_entangled_overlap() {
  int failures = 0;
  double margin = 1e300;
  for (auto [k, d, m] : {std::tuple{3, 9, 8}, std::tuple{2, 4, 4}}) {
    const double floor = double(m) / double(k * d);
    for (int seed = 0; seed < 100; ++seed) {
      RngStream s(106, std::uint64_t(seed));
      const RandomChannel phi = sample_channel(k, d, m, s);
      const DensityMatrix out = product_output_on_entangled(phi);
      const double overlap = entangled_overlap(out);
      margin = std::min(margin, overlap - floor);
      if (overlap < floor - 1e-9) ++failures;
      if (oracle::von_neumann(out.matrix()) > smin_product_upper_bound(k, overlap) + 1e-9) ++failures;
    }
  }
  return {failures == 0, fmt("failures = %.0f, min (overlap - m/kd) = %.4g", failures, margin)};
}

Outcome c07_gradients() {
  RngStream s(107, 0);
  const SubspaceBasis w = haar_isometry(4 * 16, 8, s);
  const RandomChannel phi = sample_channel(3, 6, 5, s);
  const FiniteDifferenceReport g = finite_difference_report(g_objective(w, 4, 16), 8, 20, 1e-5, 1);
  const FiniteDifferenceReport p =
      finite_difference_report(schatten4_objective(w, 4, 16), 8, 20, 1e-5, 2);
  const FiniteDifferenceReport e = finite_difference_report(entropy_objective(phi), 5, 20, 1e-5, 3);
  const double worst = std::max({g.max_rel_error, p.max_rel_error, e.max_rel_error});
  const bool all_points = g.points_checked == 20 && p.points_checked == 20 && e.points_checked == 20;
  return {worst <= 1e-4 && all_points,
          fmt("max rel error g=%.2e s4=%.2e entropy=%.2e", g.max_rel_error, p.max_rel_error,
              e.max_rel_error)};
}

Outcome c08_lipschitz_restriction() {
  const LipschitzRestrictionReport r = lipschitz_restriction_test(4, 64, 10000, 108);
  return {r.violations == 0 && r.pairs == 10000,
          fmt("violations = %.0f over %.0f pairs, worst ratio %.4f", r.violations, r.pairs,
              r.worst_ratio)};
}

Outcome c09_net_certificate() {
  const SphereNet net = sphere_net(2, 100000, 0.25, 109);
  if (net.covering_radius > 0.25) return {false, fmt("net covering radius %.4f", net.covering_radius)};
  RngStream s(109, 1);
  int failures = 0;
  double lo = 1e300, hi = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CMatrix z = ginibre(2, 2, s);
    const CMatrix delta = (z + z.adjoint()) / 2.0;
    const std::vector<double> ev = oracle::hermitian_eigenvalues(delta);
    const double norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    const double cert = net_opnorm_certificate(delta, net);
    lo = std::min(lo, cert / norm);
    hi = std::max(hi, cert / norm);
    if (cert < norm - 1e-9 || cert > 2.0 * norm + 1e-9) ++failures;
  }
  return {failures == 0,
          fmt("failures = %.0f, certificate/norm in [%.4f, %.4f]", failures, lo, hi)};
}

Outcome c10_lipschitz_extension() {
  const Eigen::Index k = 2, d = 4;
  int failures = 0;
  for (int rep = 0; rep < 20; ++rep) {
    RngStream s(110, rep);
    std::vector<CVector> pts;
    std::vector<double> values;
    for (int i = 0; i < 50; ++i) {
      pts.push_back(haar_unit_vector(k * d, s));
      values.push_back(g_tilde(vector_to_matrix(pts.back(), k, d)));
    }
    const LipschitzExtension ext(FinitePointSet::euclidean(pts), values, 2.0);
    for (int i = 0; i < 50; ++i)
      if (ext(pts[i]) != values[i]) ++failures;
    for (int i = 0; i < 200; ++i) pts.push_back(haar_unit_vector(k * d, s));
    std::vector<double> ext_values;
    for (const CVector& p : pts) ext_values.push_back(ext(p));
    const bool ok = oracle::pairwise_lipschitz(
        ext_values, 2.0, [&](std::size_t i, std::size_t j) { return (pts[i] - pts[j]).norm(); },
        1e-9);
    if (!ok) ++failures;
  }
  return {failures == 0, fmt("failures = %.0f over 20 repetitions", failures)};
}

Outcome c11_dudley() {
  const Eigen::Index n = 16;
  RngStream s(111, 0);
  std::vector<CVector> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back(haar_unit_vector(n, s));
  const GaussianProcessReport r =
      gaussian_process_dudley(FinitePointSet::euclidean(pts), n, 200, 2.0, n / 2.0, 112);
  return {r.mean_sup <= r.bound,
          fmt("mean sup = %.4f, bound = %.4f, levels = %.0f", r.mean_sup, r.bound,
              double(r.nets.levels.size()))};
}

Outcome c12_chaining_identity() {
  RngStream s(112, 0);
  std::vector<CVector> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(haar_unit_vector(3, s));
  const FinitePointSet ps = FinitePointSet::euclidean(pts);
  const DyadicNets nets = dyadic_nets(ps, 5);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    RngStream p(112, 1 + t);
    CVector g(3);
    for (Eigen::Index i = 0; i < 3; ++i) g(i) = p.complex_normal();
    std::vector<double> x;
    for (const CVector& q : pts) x.push_back(g.dot(q).real() + p.normal());
    worst = std::max(worst, chaining_decomposition_check(ps, nets.nets, x));
  }
  const bool shape = nets.levels.size() >= 2 && nets.levels.size() <= 5 &&
                     nets.nets.back().size() == ps.size();
  return {worst <= 1e-12 && shape,
          fmt("max residual = %.3g over %.0f levels", worst, double(nets.levels.size()))};
}

constexpr int kTrendStarts = 8;
constexpr int kTrendIters = 300;

OptimizerConfig trend_optimizer() {
  OptimizerConfig cfg;
  cfg.starts = kTrendStarts;
  cfg.max_iters = kTrendIters;
  cfg.rel_tol = 1e-10;
  return cfg;
}

Outcome c13_trends() {
  std::string detail;
  bool pass = true;
  std::vector<double> ratio_medians;
  for (Eigen::Index k : {2, 4, 8}) {
    const Eigen::Index d = 16 * k * k;
    const Eigen::Index m = d / 8;
    SectionBudget budget;
    budget.probes = 1000;
    const OscillationReport osc = oscillation_experiment(ObjectiveFamily::kGTilde, k, d, m, 20,
                                                         trend_optimizer(), 113, 2000, budget);
    const RoundnessReport round =
        schatten4_section_roundness(k, d, m, 20, trend_optimizer(), 114, budget);
    const double gmax = median(osc.section_max);
    std::vector<double> excess;
    for (double r : round.ratios) excess.push_back(r - 1.0);
    const double rmed = median(excess);
    ratio_medians.push_back(rmed);
    if (!(gmax <= 4.0 / double(k))) pass = false;
    if (round.edge_violations != 0) pass = false;
    detail += fmt("k=%.0f: max g~ %.4f (<= %.3f), ", double(k), gmax, 4.0 / double(k));
    detail += fmt("ratio-1 %.4f; ", rmed);
  }
  for (std::size_t i = 1; i < ratio_medians.size(); ++i)
    if (!(ratio_medians[i] < ratio_medians[i - 1])) pass = false;
  return {pass, detail};
}

Outcome c14_determinism() {
  using namespace chanlab::harness;
  std::vector<ExperimentConfig> configs;
  ExperimentConfig w;
  w.command = "singular-window";
  w.k = {4};
  w.d = {"256"};
  w.trials = 1000;
  w.constants["C_win"] = 2.0;
  configs.push_back(w);
  ExperimentConfig v;
  v.command = "violation";
  v.k = {2, 3};
  v.d = {"4k2"};
  v.m = {"d/2"};
  v.trials = 3;
  v.optimizer.starts = 4;
  v.optimizer.max_iters = 100;
  configs.push_back(v);
  ExperimentConfig o;
  o.command = "oscillation";
  o.k = {2};
  o.d = {"16k2"};
  o.m = {"d/8"};
  o.subspace_trials = 4;
  o.optimizer.starts = 4;
  o.optimizer.max_iters = 100;
  o.probes = 200;
  o.center_trials = 500;
  configs.push_back(o);
  ExperimentConfig l;
  l.command = "lipschitz-restriction";
  l.k = {4};
  l.d = {"64"};
  l.trials = 2000;
  configs.push_back(l);
  int mismatches = 0;
  for (ExperimentConfig cfg : configs) {
    const std::string first = to_json_text(run_named_experiment(cfg), false);
    const std::string second = to_json_text(run_named_experiment(cfg), false);
    cfg.workers = 2;
    const std::string threaded = to_json_text(run_named_experiment(cfg), false);
    if (first != second || first != threaded) ++mismatches;
  }
  return {mismatches == 0,
          fmt("mismatching reports = %.0f of %.0f (repeat and 2 workers)", mismatches,
              double(configs.size()))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "fourth-moment identity", 5, c01_fourth_moment_identity},
      {2, "entropy lemma", 30, c02_entropy_lemma},
      {3, "fourth-moment mean", 60, c03_fourth_moment_mean},
      {4, "operator-norm quantile", 120, c04_opnorm_quantile},
      {5, "singular-value window", 120, c05_singular_window},
      {6, "entangled overlap", 120, c06_entangled_overlap},
      {7, "gradient correctness", 30, c07_gradients},
      {8, "Lipschitz restriction", 60, c08_lipschitz_restriction},
      {9, "net certificate", 60, c09_net_certificate},
      {10, "Lipschitz extension", 30, c10_lipschitz_extension},
      {11, "Dudley dominance", 120, c11_dudley},
      {12, "chaining identity", 10, c12_chaining_identity},
      {13, "oscillation and roundness trends", 1800, c13_trends},
      {14, "determinism", 600, c14_determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d %-34s %s [%.1fs / limit %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), out.detail.c_str(), secs, c.time_limit_s,
                in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
