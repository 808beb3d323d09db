#pragma once

#include "chanlab/channel.hpp"
#include "chanlab/matrix_core.hpp"
#include "chanlab/optimize.hpp"

namespace chanlab {

/// Entropy in nats.
struct EntropyValue {
  double nats = 0.0;
  double bits() const;
};

/// -sum lambda log lambda over the spectrum clipped at 1e-12 (0 log 0 = 0).
EntropyValue von_neumann(const DensityMatrix& rho);

/// Same formula on a raw eigenvalue list (clipped first).
double entropy_of_spectrum(const RVector& eigenvalues);

/// log k - k ||sigma - Id/k||_HS^2; never exceeds S(sigma).
double hs_entropy_lower_bound(const DensityMatrix& sigma);

/// log k - k g_max^2. A certified lower bound on S_min only when g_max is a
/// certified upper bound on max g_tilde over the unit sphere of W; with an
/// optimizer estimate of the maximum it is heuristic.
double smin_channel_bound_from_gmax(Eigen::Index k, double g_max);

/// Entropy of the k^2-dimensional spectrum with one eigenvalue lambda and the
/// remaining k^2 - 1 equal: -l log l - (1 - l) log((1 - l) / (k^2 - 1)).
/// With lambda = m/(kd) this bounds S_min(Phi (x) conj Phi) from above.
double smin_product_upper_bound(Eigen::Index k, double lambda);

struct SminSearchResult {
  double value = 0.0;  // nats
  CVector witness;     // unit input achieving `value`
  int iterations = 0;
  bool converged = false;
};

/// Multi-start minimization of S(Phi(|u><u|)) over unit u. Every pure input is
/// feasible, so the result is an upper bound on S_min(Phi).
SminSearchResult smin_upper_by_search(const RandomChannel& phi,
                                      const OptimizerConfig& cfg);

}  // namespace chanlab
