#pragma once

// Monte Carlo experiments around concentration on the Hilbert-Schmidt sphere
// S_HS of k x d matrices and on random sections S_HS cap E.
//
// Every experiment draws trial t from RngStream(seed, t) (or a stream derived
// from it), keeps the full per-trial sample, and reduces it in trial order, so
// reports are identical for any worker count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chanlab/matrix_core.hpp"
#include "chanlab/optimize.hpp"
#include "chanlab/sampling.hpp"
#include "chanlab/stats.hpp"

namespace chanlab {

/// Draws a point of C^n (e.g. a flattened k x d matrix).
using PointSampler = std::function<CVector(RngStream&)>;
/// Real function of a point produced by a PointSampler.
using PointFunction = std::function<double(const CVector&)>;

/// Flattened uniform point of the HS sphere of k x d matrices.
PointSampler hs_sphere_sampler(Eigen::Index k, Eigen::Index d);
/// Uniform point of the unit sphere of C^n.
PointSampler unit_sphere_sampler(Eigen::Index n);

/// Evaluates f on a flattened k x d matrix.
PointFunction matrix_function(Eigen::Index k, Eigen::Index d,
                              std::function<double(const CMatrix&)> f);

/// Values f(sample_t) for t in [0, trials), sample_t from RngStream(seed, t).
std::vector<double> sample_values(const PointFunction& f, const PointSampler& sampler,
                                  int trials, std::uint64_t seed, int workers = 1);

// ---------------------------------------------------------------------------
// Spectral windows

struct WindowReport {
  Eigen::Index k = 0;
  Eigen::Index d = 0;
  int trials = 0;
  double window_constant = 0.0;
  double pass_fraction = 0.0;
  /// Largest normalized deviation over all trials.
  double worst_deviation = 0.0;
  /// Per-trial normalized deviation; trial t passes iff deviation < constant.
  std::vector<double> deviations;
};

/// Trial passes iff every singular value s of M satisfies
/// |s - 1/sqrt k| < C_win / sqrt d. Normalized deviation: max |s - 1/sqrt k| sqrt d.
WindowReport singular_window_experiment(Eigen::Index k, Eigen::Index d, int trials,
                                        double c_win, std::uint64_t seed,
                                        int workers = 1);

/// Trial passes iff every eigenvalue l of M M^dagger satisfies
/// |l - 1/k| < C0 / sqrt(kd). Normalized deviation: max |l - 1/k| sqrt(kd).
/// Uses the same samples as singular_window_experiment for equal seeds.
WindowReport eigen_window_experiment(Eigen::Index k, Eigen::Index d, int trials,
                                     double c0, std::uint64_t seed, int workers = 1);

// ---------------------------------------------------------------------------
// Central values and tails

enum class CentralKind { kMedian, kMean, kQuartile };
std::string to_string(CentralKind kind);

struct CentralValue {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
};

/// Empirical order statistics of f over `trials` samples (trials >= 100).
CentralValue central_value_estimate(const PointFunction& f, const PointSampler& sampler,
                                    int trials, std::uint64_t seed, int workers = 1);

struct TailCurve {
  std::vector<double> epsilons;
  std::vector<double> exceed_prob;
  int trials = 0;
  double central_value = 0.0;
  CentralKind central_kind = CentralKind::kMedian;
  /// Largest c1 with exceed_prob <= e * exp(-c1 n eps^2 / L^2) at every grid
  /// point; empty when no grid point has a positive exceedance.
  std::optional<double> c1_fit;
};

/// Empirical P(|f - median| > eps) over eps_grid (sorted, positive).
TailCurve levy_tail_experiment(const PointFunction& f, double lipschitz,
                               double n_real_dim, const PointSampler& sampler,
                               const std::vector<double>& eps_grid, int trials,
                               std::uint64_t seed, int workers = 1);

/// Fills exceedance probabilities of |values - center| > eps over a sorted grid.
std::vector<double> exceedance_curve(const std::vector<double>& values, double center,
                                     const std::vector<double>& eps_grid);

// ---------------------------------------------------------------------------
// Lipschitz restriction to Omega = {M in S_HS : ||M||_inf <= 3/sqrt k}

struct LipschitzRestrictionReport {
  int pairs = 0;
  /// Pairs breaking any link of the chain (tolerance 1e-9 per link).
  int violations = 0;
  /// Per-link failure counts:
  ///  [0] |g(M) - g(N)| <= ||MM^+ - NN^+||_HS
  ///  [1] MM^+ - NN^+ = M(M - N)^+ + (M - N)N^+ (identity, 1e-12 entrywise)
  ///  [2] ||MM^+ - NN^+||_HS <= (||M||_inf + ||N||_inf) ||M - N||_HS
  ///  [3] (||M||_inf + ||N||_inf) ||M - N||_HS <= 6/sqrt k ||M - N||_HS
  ///  [4] |g(M) - g(N)| <= 6/sqrt k ||M - N||_HS
  std::vector<int> link_violations;
  /// max |g(M) - g(N)| / (6/sqrt k ||M - N||_HS) over pairs with M != N.
  double worst_ratio = 0.0;
  /// Per-pair |g(M) - g(N)| / (6/sqrt k ||M - N||_HS), 0 when M == N.
  std::vector<double> ratios;
  /// Rejection draws spent to land in Omega.
  long long rejections = 0;
};

/// Draws M uniformly from S_HS conditioned on Omega (at most 10^4 draws, else
/// SamplingError).
CMatrix sample_in_omega(Eigen::Index k, Eigen::Index d, RngStream& stream,
                        long long* rejections = nullptr);

/// Pairs are independent draws from Omega for even trials and local
/// perturbations N = normalize(M + t Z), t log-uniform in [1e-4, 1],
/// conditioned on Omega, for odd trials.
LipschitzRestrictionReport lipschitz_restriction_test(Eigen::Index k, Eigen::Index d,
                                                      int trials, std::uint64_t seed,
                                                      int workers = 1);

// ---------------------------------------------------------------------------
// Random sections S_HS cap E

/// Haar basis of an m-dimensional subspace of C^n; the full space (m == n)
/// has a single point in its Grassmannian and is returned as the identity.
SubspaceBasis sample_section(Eigen::Index n, Eigen::Index m, RngStream& stream);

struct SectionExtremum {
  double optimized = 0.0;  // multi-start optimizer result
  double probed = 0.0;     // best random probe
  double value = 0.0;      // better of the two
};

/// Extremum of `obj` over the unit sphere of C^m from the optimizer plus
/// `probes` random points drawn from RngStream(probe_seed, 0).
SectionExtremum section_extremum(const SphereObjective& obj, Eigen::Index m,
                                 Direction direction, const OptimizerConfig& cfg,
                                 int probes, std::uint64_t probe_seed);

/// Max and min sharing the same probe points, so max >= min always.
std::pair<SectionExtremum, SectionExtremum> section_range(const SphereObjective& obj,
                                                          Eigen::Index m,
                                                          const OptimizerConfig& cfg,
                                                          int probes,
                                                          std::uint64_t probe_seed);

struct SectionBudget {
  int probes = 1000;
  int workers = 1;
};

struct OmegaMembershipReport {
  Eigen::Index k = 0;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  double threshold = 0.0;  // 3/sqrt k
  std::vector<double> max_opnorm;
  std::vector<bool> member;
  double fraction = 0.0;
};

/// Estimated max of ||.||_inf over S_HS cap range(w); member iff <= 3/sqrt k.
std::pair<double, bool> omega_member_section(const SubspaceBasis& w, Eigen::Index k,
                                             Eigen::Index d, const OptimizerConfig& cfg,
                                             int probes, std::uint64_t probe_seed);

OmegaMembershipReport omega_membership_experiment(Eigen::Index k, Eigen::Index d,
                                                  Eigen::Index m, int subspace_trials,
                                                  const OptimizerConfig& cfg,
                                                  std::uint64_t seed,
                                                  SectionBudget budget = {});

enum class ObjectiveFamily { kGTilde, kOpNorm, kSchatten4 };
std::string to_string(ObjectiveFamily family);
ObjectiveFamily objective_family_from_string(const std::string& name);

struct OscillationReport {
  ObjectiveFamily family = ObjectiveFamily::kGTilde;
  Eigen::Index k = 0;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  double center = 0.0;  // ambient median of f over S_HS
  std::vector<double> section_max;
  std::vector<double> section_min;
  std::vector<double> osc_values;  // max(|max - center|, |min - center|)
};

/// Per random section, sup |f - center| from the estimated max and min of f.
/// For g_tilde the quartic tr|M|^4 is optimized and converted back.
OscillationReport oscillation_experiment(ObjectiveFamily family, Eigen::Index k,
                                         Eigen::Index d, Eigen::Index m,
                                         int subspace_trials, const OptimizerConfig& cfg,
                                         std::uint64_t seed, int center_trials = 2000,
                                         SectionBudget budget = {});

struct RoundnessReport {
  Eigen::Index k = 0;
  Eigen::Index d = 0;
  Eigen::Index m = 0;
  std::vector<double> max_norm;
  std::vector<double> min_norm;
  std::vector<double> ratios;  // max/min of ||.||_4 over each section
  /// Sections where min < k^{-1/4} - 1e-9 or ratio < 1 - 1e-9 (both impossible).
  int edge_violations = 0;
};

RoundnessReport schatten4_section_roundness(Eigen::Index k, Eigen::Index d,
                                            Eigen::Index m, int subspace_trials,
                                            const OptimizerConfig& cfg,
                                            std::uint64_t seed,
                                            SectionBudget budget = {});

}  // namespace chanlab
