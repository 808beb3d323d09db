#include "chanlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chanlab/errors.hpp"

namespace chanlab {

double EntropyValue::bits() const { return nats / std::numbers::ln2; }

double entropy_of_spectrum(const RVector& eigenvalues) {
  const RVector clipped = clip_spectrum(eigenvalues);
  double s = 0.0;
  for (Eigen::Index i = 0; i < clipped.size(); ++i) {
    const double x = clipped(i);
    if (x > 0.0) s -= x * std::log(x);
  }
  // roundoff near pure states (an eigenvalue just above 1) must not leave [0, log n]
  return std::clamp(s, 0.0, std::log(static_cast<double>(clipped.size())));
}

EntropyValue von_neumann(const DensityMatrix& rho) {
  return {entropy_of_spectrum(hermitian_spectrum(rho.matrix()))};
}

double hs_entropy_lower_bound(const DensityMatrix& sigma) {
  const auto k = sigma.dim();
  const double kd = static_cast<double>(k);
  const double dist_sq = (sigma.matrix() - CMatrix::Identity(k, k) / kd).squaredNorm();
  return std::log(kd) - kd * dist_sq;
}

double smin_channel_bound_from_gmax(Eigen::Index k, double g_max) {
  if (k < 1) throw DomainError("smin_channel_bound_from_gmax: k must be >= 1");
  if (!(g_max >= 0.0)) throw DomainError("smin_channel_bound_from_gmax: g_max must be >= 0");
  const double kd = static_cast<double>(k);
  return std::log(kd) - kd * g_max * g_max;
}

double smin_product_upper_bound(Eigen::Index k, double lambda) {
  if (k < 2) throw DomainError("smin_product_upper_bound: k must be >= 2");
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "smin_product_upper_bound: lambda must lie in (0, 1], got " << lambda;
    throw DomainError(os.str());
  }
  const double rest = 1.0 - lambda;
  double s = -lambda * std::log(lambda);
  if (rest > 0.0) {
    const double others = static_cast<double>(k * k - 1);
    s -= rest * std::log(rest / others);
  }
  return s;
}

SminSearchResult smin_upper_by_search(const RandomChannel& phi,
                                      const OptimizerConfig& cfg) {
  const SphereObjective obj = entropy_objective(phi);
  const ExtremizeResult best =
      riemannian_extremize(obj, phi.m(), Direction::kMinimize, cfg);
  SminSearchResult out;
  out.value = best.value;
  out.witness = best.argpoint;
  out.iterations = best.iterations;
  out.converged = best.converged;
  return out;
}

}  // namespace chanlab
