#pragma once

// Multi-start projected-gradient search on the unit sphere of C^m.
//
// Objectives are real functions of u in S(C^m) that only depend on u up to a
// global phase. Gradients are Euclidean with respect to the real inner product
// Re<a, b>; the optimizer projects them onto the complex tangent space
// g - <u, g> u and retracts by renormalization.

#include <cstdint>
#include <functional>
#include <optional>

#include "chanlab/channel.hpp"
#include "chanlab/matrix_core.hpp"

namespace chanlab {

struct OptimizerConfig {
  int starts = 32;
  int max_iters = 500;
  double initial_step = 0.1;
  double step_shrink = 0.5;
  double grad_tol = 1e-8;
  /// Stop a start once an accepted step improves the value by less than
  /// rel_tol * max(1, |f|).
  double rel_tol = 1e-13;
  std::uint64_t seed = 0;

  /// Throws DomainError on non-positive counts/steps or step_shrink >= 1.
  void validate() const;
};

enum class Direction { kMaximize, kMinimize };

struct SphereObjective {
  std::function<double(const CVector&)> evaluate;
  std::function<CVector(const CVector&)> gradient;
  std::optional<double> lipschitz_hint;
  /// Points where the objective is smooth enough for finite differences.
  /// Empty means "everywhere".
  std::function<bool(const CVector&)> is_regular;
};

struct ExtremizeResult {
  double value = 0.0;
  CVector argpoint;
  int iterations = 0;   // iterations of the winning start
  bool converged = false;
  int start_index = 0;  // winning start
};

/// One projected-gradient run from `start` (normalized first). Accepted
/// iterates are strictly monotone in the requested direction. Throws
/// OptimizerError when the objective or gradient is non-finite.
ExtremizeResult local_extremize(const SphereObjective& obj, const CVector& start,
                                Direction direction, const OptimizerConfig& cfg,
                                int start_index = 0);

/// Best of cfg.starts local runs from Haar-random starts drawn from
/// RngStream(cfg.seed, start). Exact ties go to the lowest start index.
ExtremizeResult riemannian_extremize(const SphereObjective& obj, Eigen::Index m,
                                     Direction direction, const OptimizerConfig& cfg);

/// Quartic tr|M(u)|^4 with M(u) the k x d avatar of W u. Its maximum gives the
/// maximum of g_tilde through g_tilde^2 = tr|M|^4 - 1/k.
SphereObjective g_objective(const SubspaceBasis& w, Eigen::Index k, Eigen::Index d);

/// Largest singular value of M(u). Gradient from the top singular pair; the
/// objective is non-smooth where the top singular value is degenerate.
SphereObjective opnorm_objective(const SubspaceBasis& w, Eigen::Index k, Eigen::Index d,
                                 bool validate = true);

/// Schatten-4 norm ||M(u)||_4 = (tr|M(u)|^4)^(1/4).
SphereObjective schatten4_objective(const SubspaceBasis& w, Eigen::Index k,
                                    Eigen::Index d);

/// Output entropy S(M M^dagger) of the pure input u.
SphereObjective entropy_objective(const RandomChannel& phi, bool validate = true);

struct FiniteDifferenceReport {
  double max_rel_error = 0.0;
  int points_checked = 0;
  int points_skipped = 0;  // rejected by is_regular
};

/// Compares Re<gradient(u), delta> with central differences of
/// evaluate(normalize(u + h delta)) along 10 random unit tangent directions
/// at each of `points` random regular points.
FiniteDifferenceReport finite_difference_report(const SphereObjective& obj,
                                                Eigen::Index m, int points, double h,
                                                std::uint64_t seed = 0);

double finite_difference_check(const SphereObjective& obj, Eigen::Index m, int points,
                               double h, std::uint64_t seed = 0);

}  // namespace chanlab
