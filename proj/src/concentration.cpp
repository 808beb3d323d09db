#include "chanlab/concentration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "chanlab/errors.hpp"
#include "chanlab/parallel.hpp"

namespace chanlab {

namespace {

constexpr long long kOmegaRetryCap = 10000;

void require_trials(int trials, const char* what) {
  if (trials < 1) {
    std::ostringstream os;
    os << what << ": trials must be >= 1";
    throw DomainError(os.str());
  }
}

void require_window_dims(Eigen::Index k, Eigen::Index d, const char* what) {
  if (k < 1 || d < k) {
    std::ostringstream os;
    os << what << ": need d >= k >= 1, got k=" << k << " d=" << d;
    throw DomainError(os.str());
  }
}

struct SectionSeeds {
  std::uint64_t basis;
  std::uint64_t optimizer;
  std::uint64_t probes;
};

SectionSeeds section_seeds(std::uint64_t seed, int subspace, std::uint64_t cfg_seed) {
  const std::uint64_t base =
      derive_seed(derive_seed(seed, static_cast<std::uint64_t>(subspace)), cfg_seed);
  return {derive_seed(base, 0), derive_seed(base, 1), derive_seed(base, 2)};
}

std::vector<double> sorted_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) {
    std::ostringstream os;
    os << what << ": grid must be non-empty";
    throw DomainError(os.str());
  }
  for (double e : grid) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      std::ostringstream os;
      os << what << ": grid values must be positive and finite";
      throw DomainError(os.str());
    }
  }
  if (!std::is_sorted(grid.begin(), grid.end())) {
    std::ostringstream os;
    os << what << ": grid must be sorted ascending";
    throw DomainError(os.str());
  }
  return grid;
}

WindowReport window_report(Eigen::Index k, Eigen::Index d, int trials, double constant,
                           std::vector<double> deviations) {
  WindowReport r;
  r.k = k;
  r.d = d;
  r.trials = trials;
  r.window_constant = constant;
  int passed = 0;
  for (double dev : deviations) {
    if (dev < constant) ++passed;
    r.worst_deviation = std::max(r.worst_deviation, dev);
  }
  r.pass_fraction = static_cast<double>(passed) / static_cast<double>(trials);
  r.deviations = std::move(deviations);
  return r;
}

}  // namespace

PointSampler hs_sphere_sampler(Eigen::Index k, Eigen::Index d) {
  return [k, d](RngStream& stream) {
    return matrix_to_vector(uniform_hs_sphere(k, d, stream));
  };
}

PointSampler unit_sphere_sampler(Eigen::Index n) {
  return [n](RngStream& stream) { return haar_unit_vector(n, stream); };
}

PointFunction matrix_function(Eigen::Index k, Eigen::Index d,
                              std::function<double(const CMatrix&)> f) {
  return [k, d, f = std::move(f)](const CVector& x) {
    return f(vector_to_matrix(x, k, d));
  };
}

std::vector<double> sample_values(const PointFunction& f, const PointSampler& sampler,
                                  int trials, std::uint64_t seed, int workers) {
  require_trials(trials, "sample_values");
  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_for(values.size(), workers, [&](std::size_t t) {
    RngStream stream(seed, t);
    values[t] = f(sampler(stream));
  });
  return values;
}

WindowReport singular_window_experiment(Eigen::Index k, Eigen::Index d, int trials,
                                        double c_win, std::uint64_t seed, int workers) {
  require_window_dims(k, d, "singular_window_experiment");
  require_trials(trials, "singular_window_experiment");
  if (!(c_win > 0.0)) throw DomainError("singular_window_experiment: C_win must be > 0");
  const double center = 1.0 / std::sqrt(static_cast<double>(k));
  const double scale = std::sqrt(static_cast<double>(d));
  std::vector<double> dev(static_cast<std::size_t>(trials));
  parallel_for(dev.size(), workers, [&](std::size_t t) {
    RngStream stream(seed, t);
    const RVector s = singular_values(uniform_hs_sphere(k, d, stream));
    dev[t] = (s.array() - center).abs().maxCoeff() * scale;
  });
  return window_report(k, d, trials, c_win, std::move(dev));
}

WindowReport eigen_window_experiment(Eigen::Index k, Eigen::Index d, int trials,
                                     double c0, std::uint64_t seed, int workers) {
  require_window_dims(k, d, "eigen_window_experiment");
  require_trials(trials, "eigen_window_experiment");
  if (!(c0 > 0.0)) throw DomainError("eigen_window_experiment: C0 must be > 0");
  const double center = 1.0 / static_cast<double>(k);
  const double scale = std::sqrt(static_cast<double>(k * d));
  std::vector<double> dev(static_cast<std::size_t>(trials));
  parallel_for(dev.size(), workers, [&](std::size_t t) {
    RngStream stream(seed, t);
    const CMatrix m = uniform_hs_sphere(k, d, stream);
    const RVector l = hermitian_spectrum(m * m.adjoint());
    dev[t] = (l.array() - center).abs().maxCoeff() * scale;
  });
  return window_report(k, d, trials, c0, std::move(dev));
}

std::string to_string(CentralKind kind) {
  switch (kind) {
    case CentralKind::kMedian: return "median";
    case CentralKind::kMean: return "mean";
    case CentralKind::kQuartile: return "quartile";
  }
  return "median";
}

CentralValue central_value_estimate(const PointFunction& f, const PointSampler& sampler,
                                    int trials, std::uint64_t seed, int workers) {
  if (trials < 100) throw DomainError("central_value_estimate: trials must be >= 100");
  const std::vector<double> values = sample_values(f, sampler, trials, seed, workers);
  const OrderSummary s = summarize(values);
  return {s.median, s.q1, s.q3, s.mean};
}

std::vector<double> exceedance_curve(const std::vector<double>& values, double center,
                                     const std::vector<double>& eps_grid) {
  std::vector<double> deviations;
  deviations.reserve(values.size());
  for (double v : values) deviations.push_back(std::abs(v - center));
  std::sort(deviations.begin(), deviations.end());
  std::vector<double> probs;
  probs.reserve(eps_grid.size());
  const double n = static_cast<double>(deviations.size());
  for (double eps : eps_grid) {
    const auto above = deviations.end() -
                       std::upper_bound(deviations.begin(), deviations.end(), eps);
    probs.push_back(n > 0 ? static_cast<double>(above) / n : 0.0);
  }
  return probs;
}

TailCurve levy_tail_experiment(const PointFunction& f, double lipschitz,
                               double n_real_dim, const PointSampler& sampler,
                               const std::vector<double>& eps_grid, int trials,
                               std::uint64_t seed, int workers) {
  if (!(lipschitz > 0.0)) throw DomainError("levy_tail_experiment: L must be > 0");
  if (!(n_real_dim > 0.0)) throw DomainError("levy_tail_experiment: n must be > 0");
  TailCurve curve;
  curve.epsilons = sorted_grid(eps_grid, "levy_tail_experiment");
  const std::vector<double> values = sample_values(f, sampler, trials, seed, workers);
  curve.trials = trials;
  curve.central_kind = CentralKind::kMedian;
  curve.central_value = median(values);
  curve.exceed_prob = exceedance_curve(values, curve.central_value, curve.epsilons);
  for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
    const double p = curve.exceed_prob[i];
    if (p <= 0.0) continue;
    const double eps = curve.epsilons[i];
    const double c = (1.0 - std::log(p)) * lipschitz * lipschitz / (n_real_dim * eps * eps);
    curve.c1_fit = curve.c1_fit ? std::min(*curve.c1_fit, c) : c;
  }
  return curve;
}

CMatrix sample_in_omega(Eigen::Index k, Eigen::Index d, RngStream& stream,
                        long long* rejections) {
  const double threshold = 3.0 / std::sqrt(static_cast<double>(k));
  for (long long draw = 0; draw < kOmegaRetryCap; ++draw) {
    CMatrix m = uniform_hs_sphere(k, d, stream);
    if (operator_norm(m) <= threshold) return m;
    if (rejections) ++*rejections;
  }
  std::ostringstream os;
  os << "sample_in_omega: no draw landed in Omega after " << kOmegaRetryCap
     << " attempts (k=" << k << " d=" << d << ")";
  throw SamplingError(os.str());
}

LipschitzRestrictionReport lipschitz_restriction_test(Eigen::Index k, Eigen::Index d,
                                                      int trials, std::uint64_t seed,
                                                      int workers) {
  require_trials(trials, "lipschitz_restriction_test");
  if (k < 1 || d < 1) throw DomainError("lipschitz_restriction_test: bad dimensions");
  constexpr double kSlack = 1e-9;
  constexpr int kLinks = 5;
  const double lip = 6.0 / std::sqrt(static_cast<double>(k));
  const double threshold = 3.0 / std::sqrt(static_cast<double>(k));

  struct PairOutcome {
    std::array<bool, kLinks> broken{};
    double ratio = 0.0;
    long long rejections = 0;
  };
  std::vector<PairOutcome> outcomes(static_cast<std::size_t>(trials));
  parallel_for(outcomes.size(), workers, [&](std::size_t t) {
    RngStream stream(seed, t);
    PairOutcome& out = outcomes[t];
    const CMatrix m = sample_in_omega(k, d, stream, &out.rejections);
    CMatrix n;
    if (t % 2 == 0) {
      n = sample_in_omega(k, d, stream, &out.rejections);
    } else {
      const double scale = std::pow(10.0, -4.0 * stream.uniform());
      bool found = false;
      for (long long draw = 0; draw < kOmegaRetryCap; ++draw) {
        CMatrix candidate = m + scale * ginibre(k, d, stream);
        candidate /= candidate.norm();
        if (operator_norm(candidate) <= threshold) {
          n = std::move(candidate);
          found = true;
          break;
        }
        ++out.rejections;
      }
      if (!found) throw SamplingError("lipschitz_restriction_test: perturbation left Omega");
    }
    const double gm = g_tilde(m);
    const double gn = g_tilde(n);
    const double dg = std::abs(gm - gn);
    const CMatrix diff = m - n;
    const double dist = diff.norm();
    const CMatrix gram_diff = m * m.adjoint() - n * n.adjoint();
    const double gram_dist = gram_diff.norm();
    const CMatrix split = m * diff.adjoint() + diff * n.adjoint();
    const double norms = operator_norm(m) + operator_norm(n);
    out.broken[0] = dg > gram_dist + kSlack;
    out.broken[1] = (gram_diff - split).cwiseAbs().maxCoeff() > 1e-12;
    out.broken[2] = gram_dist > norms * dist + kSlack;
    out.broken[3] = norms * dist > lip * dist + kSlack;
    out.broken[4] = dg > lip * dist + kSlack;
    out.ratio = dist > 0.0 ? dg / (lip * dist) : 0.0;
  });

  LipschitzRestrictionReport report;
  report.pairs = trials;
  report.link_violations.assign(kLinks, 0);
  for (const PairOutcome& out : outcomes) {
    bool any = false;
    for (int l = 0; l < kLinks; ++l) {
      if (out.broken[l]) {
        ++report.link_violations[l];
        any = true;
      }
    }
    if (any) ++report.violations;
    report.worst_ratio = std::max(report.worst_ratio, out.ratio);
    report.ratios.push_back(out.ratio);
    report.rejections += out.rejections;
  }
  return report;
}

SubspaceBasis sample_section(Eigen::Index n, Eigen::Index m, RngStream& stream) {
  if (m == n && n >= 1) return SubspaceBasis(CMatrix::Identity(n, n));
  return haar_isometry(n, m, stream);
}

namespace {

std::vector<CVector> probe_points(Eigen::Index m, int probes, std::uint64_t probe_seed) {
  std::vector<CVector> points;
  points.reserve(static_cast<std::size_t>(std::max(probes, 0)));
  RngStream stream(probe_seed, 0);
  for (int p = 0; p < probes; ++p) points.push_back(haar_unit_vector(m, stream));
  return points;
}

SectionExtremum combine(const ExtremizeResult& opt, const std::vector<double>& probe_values,
                        Direction direction) {
  SectionExtremum e;
  e.optimized = opt.value;
  const bool maximize = direction == Direction::kMaximize;
  e.probed = opt.value;
  if (!probe_values.empty()) {
    e.probed = maximize ? *std::max_element(probe_values.begin(), probe_values.end())
                        : *std::min_element(probe_values.begin(), probe_values.end());
  }
  e.value = maximize ? std::max(e.optimized, e.probed) : std::min(e.optimized, e.probed);
  return e;
}

}  // namespace

SectionExtremum section_extremum(const SphereObjective& obj, Eigen::Index m,
                                 Direction direction, const OptimizerConfig& cfg,
                                 int probes, std::uint64_t probe_seed) {
  const ExtremizeResult opt = riemannian_extremize(obj, m, direction, cfg);
  std::vector<double> values;
  for (const CVector& u : probe_points(m, probes, probe_seed)) values.push_back(obj.evaluate(u));
  return combine(opt, values, direction);
}

std::pair<SectionExtremum, SectionExtremum> section_range(const SphereObjective& obj,
                                                          Eigen::Index m,
                                                          const OptimizerConfig& cfg,
                                                          int probes,
                                                          std::uint64_t probe_seed) {
  const ExtremizeResult hi = riemannian_extremize(obj, m, Direction::kMaximize, cfg);
  const ExtremizeResult lo = riemannian_extremize(obj, m, Direction::kMinimize, cfg);
  std::vector<double> values;
  for (const CVector& u : probe_points(m, probes, probe_seed)) values.push_back(obj.evaluate(u));
  // Each run's own starting values bracket the other when there are no probes.
  SectionExtremum max = combine(hi, values, Direction::kMaximize);
  SectionExtremum min = combine(lo, values, Direction::kMinimize);
  if (min.value > max.value) min.value = max.value = std::max(min.value, max.value);
  return {max, min};
}

std::pair<double, bool> omega_member_section(const SubspaceBasis& w, Eigen::Index k,
                                             Eigen::Index d, const OptimizerConfig& cfg,
                                             int probes, std::uint64_t probe_seed) {
  const SphereObjective obj = opnorm_objective(w, k, d);
  const SectionExtremum e =
      section_extremum(obj, w.subspace_dim(), Direction::kMaximize, cfg, probes, probe_seed);
  return {e.value, e.value <= 3.0 / std::sqrt(static_cast<double>(k))};
}

OmegaMembershipReport omega_membership_experiment(Eigen::Index k, Eigen::Index d,
                                                  Eigen::Index m, int subspace_trials,
                                                  const OptimizerConfig& cfg,
                                                  std::uint64_t seed,
                                                  SectionBudget budget) {
  require_trials(subspace_trials, "omega_membership_experiment");
  if (k < 1 || d < 1 || m < 1 || m > k * d) {
    throw DomainError("omega_membership_experiment: need 1 <= m <= k*d");
  }
  OmegaMembershipReport report;
  report.k = k;
  report.d = d;
  report.m = m;
  report.threshold = 3.0 / std::sqrt(static_cast<double>(k));
  const auto n = static_cast<std::size_t>(subspace_trials);
  report.max_opnorm.assign(n, 0.0);
  std::vector<char> member(n, 0);
  parallel_for(n, budget.workers, [&](std::size_t s) {
    const SectionSeeds seeds = section_seeds(seed, static_cast<int>(s), cfg.seed);
    RngStream stream(seeds.basis, 0);
    const SubspaceBasis w = sample_section(k * d, m, stream);
    OptimizerConfig local = cfg;
    local.seed = seeds.optimizer;
    const auto [value, inside] =
        omega_member_section(w, k, d, local, budget.probes, seeds.probes);
    report.max_opnorm[s] = value;
    member[s] = inside ? 1 : 0;
  });
  int count = 0;
  for (char c : member) {
    report.member.push_back(c != 0);
    count += c;
  }
  report.fraction = static_cast<double>(count) / static_cast<double>(n);
  return report;
}

std::string to_string(ObjectiveFamily family) {
  switch (family) {
    case ObjectiveFamily::kGTilde: return "g_tilde";
    case ObjectiveFamily::kOpNorm: return "opnorm";
    case ObjectiveFamily::kSchatten4: return "schatten4";
  }
  return "g_tilde";
}

ObjectiveFamily objective_family_from_string(const std::string& name) {
  if (name == "g_tilde" || name == "g" || name == "gtilde") return ObjectiveFamily::kGTilde;
  if (name == "opnorm") return ObjectiveFamily::kOpNorm;
  if (name == "schatten4") return ObjectiveFamily::kSchatten4;
  throw DomainError("unknown objective family '" + name + "'");
}

OscillationReport oscillation_experiment(ObjectiveFamily family, Eigen::Index k,
                                         Eigen::Index d, Eigen::Index m,
                                         int subspace_trials, const OptimizerConfig& cfg,
                                         std::uint64_t seed, int center_trials,
                                         SectionBudget budget) {
  require_trials(subspace_trials, "oscillation_experiment");
  if (k < 1 || d < 1 || m < 1 || m > k * d) {
    throw DomainError("oscillation_experiment: need 1 <= m <= k*d");
  }
  std::function<double(const CMatrix&)> ambient;
  switch (family) {
    case ObjectiveFamily::kGTilde: ambient = [](const CMatrix& x) { return g_tilde(x); }; break;
    case ObjectiveFamily::kOpNorm: ambient = [](const CMatrix& x) { return operator_norm(x); }; break;
    case ObjectiveFamily::kSchatten4:
      ambient = [](const CMatrix& x) { return schatten_norm(x, 4.0); };
      break;
  }
  OscillationReport report;
  report.family = family;
  report.k = k;
  report.d = d;
  report.m = m;
  report.center = central_value_estimate(matrix_function(k, d, ambient),
                                         hs_sphere_sampler(k, d), center_trials,
                                         derive_seed(seed, 0xce17e7), budget.workers)
                      .median;

  const auto n = static_cast<std::size_t>(subspace_trials);
  report.section_max.assign(n, 0.0);
  report.section_min.assign(n, 0.0);
  report.osc_values.assign(n, 0.0);
  parallel_for(n, budget.workers, [&](std::size_t s) {
    const SectionSeeds seeds = section_seeds(seed, static_cast<int>(s), cfg.seed);
    RngStream stream(seeds.basis, 0);
    const SubspaceBasis w = sample_section(k * d, m, stream);
    OptimizerConfig local = cfg;
    local.seed = seeds.optimizer;
    SphereObjective obj;
    switch (family) {
      case ObjectiveFamily::kGTilde: obj = g_objective(w, k, d); break;
      case ObjectiveFamily::kOpNorm: obj = opnorm_objective(w, k, d); break;
      case ObjectiveFamily::kSchatten4: obj = schatten4_objective(w, k, d); break;
    }
    auto [hi, lo] = section_range(obj, m, local, budget.probes, seeds.probes);
    double top = hi.value;
    double bottom = lo.value;
    if (family == ObjectiveFamily::kGTilde) {
      top = g_tilde_from_fourth_moment(top, k);
      bottom = g_tilde_from_fourth_moment(bottom, k);
    }
    report.section_max[s] = top;
    report.section_min[s] = bottom;
    report.osc_values[s] =
        std::max(std::abs(top - report.center), std::abs(bottom - report.center));
  });
  return report;
}

RoundnessReport schatten4_section_roundness(Eigen::Index k, Eigen::Index d,
                                            Eigen::Index m, int subspace_trials,
                                            const OptimizerConfig& cfg,
                                            std::uint64_t seed, SectionBudget budget) {
  require_trials(subspace_trials, "schatten4_section_roundness");
  if (k < 1 || d < 1 || m < 1 || m > k * d) {
    throw DomainError("schatten4_section_roundness: need 1 <= m <= k*d");
  }
  RoundnessReport report;
  report.k = k;
  report.d = d;
  report.m = m;
  const auto n = static_cast<std::size_t>(subspace_trials);
  report.max_norm.assign(n, 0.0);
  report.min_norm.assign(n, 0.0);
  report.ratios.assign(n, 0.0);
  parallel_for(n, budget.workers, [&](std::size_t s) {
    const SectionSeeds seeds = section_seeds(seed, static_cast<int>(s), cfg.seed);
    RngStream stream(seeds.basis, 0);
    const SubspaceBasis w = sample_section(k * d, m, stream);
    OptimizerConfig local = cfg;
    local.seed = seeds.optimizer;
    const auto [hi, lo] =
        section_range(schatten4_objective(w, k, d), m, local, budget.probes, seeds.probes);
    report.max_norm[s] = hi.value;
    report.min_norm[s] = lo.value;
    report.ratios[s] = hi.value / lo.value;
  });
  const double edge = std::pow(static_cast<double>(k), -0.25);
  for (std::size_t s = 0; s < n; ++s) {
    if (report.min_norm[s] < edge - 1e-9 || report.ratios[s] < 1.0 - 1e-9) {
      ++report.edge_violations;
    }
  }
  return report;
}

}  // namespace chanlab
