#pragma once

// Nets, covering numbers and chaining on finite samples of metric spaces.
// Nets are always built on a finite cloud; "covering" means covering the cloud.

#include <cstdint>
#include <functional>
#include <vector>

#include "chanlab/concentration.hpp"
#include "chanlab/matrix_core.hpp"

namespace chanlab {

using Distance = std::function<double(const CVector&, const CVector&)>;

/// Points plus a metric. Abstract index spaces embed as 1-dimensional vectors.
class FinitePointSet {
 public:
  FinitePointSet(std::vector<CVector> points, Distance distance);

  /// Points with the Euclidean (= Hilbert-Schmidt) distance |x - y|.
  static FinitePointSet euclidean(std::vector<CVector> points);
  /// Real numbers on a line with |x - y|.
  static FinitePointSet line(const std::vector<double>& xs);

  std::size_t size() const { return points_.size(); }
  const CVector& point(std::size_t i) const { return points_[i]; }
  const std::vector<CVector>& points() const { return points_; }
  double distance(std::size_t i, std::size_t j) const;
  double distance_to(const CVector& x, std::size_t j) const;

  /// Spot-checks zero diagonal, symmetry and the triangle inequality on
  /// `triples` random index triples (slack 1e-9). Throws DomainError.
  void validate(int triples, std::uint64_t seed) const;

 private:
  std::vector<CVector> points_;
  Distance distance_;
};

struct NetResult {
  std::vector<std::size_t> net_indices;  // in insertion order
  double eta = 0.0;
  /// max over the cloud of the distance to the nearest net point
  double covering_radius = 0.0;
  bool covering_radius_checked = false;
};

/// Farthest-point greedy net starting from index 0; ties go to the lowest
/// index. Stops once every point is within eta of the net.
NetResult greedy_net(const FinitePointSet& ps, double eta);

/// (1 + 2/eta)^(2n): volumetric bound on eta-nets of the unit sphere of C^n.
double covering_bound(Eigen::Index n_complex_dim, double eta);

/// h(x) = min_y [h(y) + L dist(x, y)] over a finite domain Y.
class LipschitzExtension {
 public:
  /// Throws DomainError if the values are not L-Lipschitz on Y (slack 1e-9).
  LipschitzExtension(FinitePointSet domain, std::vector<double> values, double lipschitz);

  double operator()(const CVector& x) const;
  const FinitePointSet& domain() const { return domain_; }
  double lipschitz() const { return lipschitz_; }

 private:
  FinitePointSet domain_;
  std::vector<double> values_;
  double lipschitz_;
};

double lipschitz_extend(const FinitePointSet& domain, const std::vector<double>& values,
                        double lipschitz, const CVector& x);

/// Largest |h(a) - h(b)| / dist(a, b) - L over distinct pairs; <= 0 means
/// the values are L-Lipschitz. Pairs at distance 0 must have equal values.
double lipschitz_excess(const FinitePointSet& ps, const std::vector<double>& values,
                        double lipschitz);

struct SphereNet {
  Eigen::Index n = 0;
  std::vector<CVector> points;
  double eta = 0.0;
  std::size_t cloud_size = 0;
  double covering_radius = 0.0;  // measured on the cloud
};

/// Greedy eta-net of `samples` uniform points of the unit sphere of C^n drawn
/// from RngStream(seed, 0).
SphereNet sphere_net(Eigen::Index n, std::size_t samples, double eta, std::uint64_t seed);

/// 2 max_{x in net} |<x, delta x>|. Throws DomainError if delta is not
/// Hermitian, the dimensions differ, or net.covering_radius > 1/4.
double net_opnorm_certificate(const CMatrix& delta, const SphereNet& net);

struct SubgaussianPairReport {
  TailCurve curve;  // exceedance of |f(Ux) - f(Uy)|, central value 0
  double aligned_distance = 0.0;
  std::vector<double> differences;
};

/// f(Ux) - f(Uy) for Haar unitaries U drawn from RngStream(seed, t).
std::vector<double> pair_differences(const PointFunction& f, const CVector& x,
                                     const CVector& y, int trials, std::uint64_t seed,
                                     int workers = 1);

/// min over theta of |x - e^{i theta} y| for unit x, y.
double aligned_distance(const CVector& x, const CVector& y);

/// Empirical tail of |f(Ux) - f(Uy)| over lambda_grid. c1_fit is the largest
/// c with P <= e exp(-c n lambda^2 / dist^2) at every grid point, with dist
/// the aligned distance. Throws DomainError when x and y coincide up to a phase.
SubgaussianPairReport subgaussian_pair_experiment(const PointFunction& f,
                                                  const CVector& x, const CVector& y,
                                                  int trials,
                                                  const std::vector<double>& lambda_grid,
                                                  std::uint64_t seed, int workers = 1);

struct CoveringLevel {
  int j = 0;           // eta = 2^-j
  double eta = 1.0;
  std::size_t count = 1;
};

/// 2 sum_{i < last} beta_i (sqrt(2 log(N_{i+1}^2)) + A), beta_i = 2^{-j_i + 1}/sqrt(alpha).
/// Levels must be consecutive dyadic (eta_i = 2^-j_i), the first must satisfy
/// eta >= radius, all counts >= 1. The deepest level closes the chain and
/// contributes no link of its own.
double dudley_bound(const std::vector<CoveringLevel>& levels, double a, double alpha,
                    double radius);

/// beta (sqrt(2 log N) + A): the bound on E max of N subgaussian variables.
double max_gaussian_bound(std::size_t n, double beta, double a);

/// max_j dist(point 0, point j): the radius seen from the first greedy center.
double eccentricity(const FinitePointSet& ps, std::size_t center = 0);

struct DyadicNets {
  std::vector<CoveringLevel> levels;
  std::vector<std::vector<std::size_t>> nets;  // sorted indices
};

/// Greedy nets at eta = 2^-j for j = j0, j0 + 1, ... where 2^-j0 is the
/// smallest power of two >= eccentricity(ps). Stops at the first net holding
/// every point; when max_levels is reached the last level is the whole set.
DyadicNets dyadic_nets(const FinitePointSet& ps, int max_levels = 64);

/// Nearest point of `net` to point s; ties go to the lowest index.
std::size_t nearest_in_net(const FinitePointSet& ps, const std::vector<std::size_t>& net,
                           std::size_t s);

/// max_s |X_s - (X_{pi_0(s)} + sum_k (X_{pi_{k+1}(s)} - X_{pi_k(s)}))|.
/// The first net must be a single point and the deepest net must project
/// every point to itself; otherwise DomainError.
double chaining_decomposition_check(const FinitePointSet& ps,
                                    const std::vector<std::vector<std::size_t>>& nets,
                                    const std::vector<double>& process);

struct GaussianProcessReport {
  std::vector<double> sup_increments;  // max_s X_s - min_s X_s per draw
  double mean_sup = 0.0;
  double bound = 0.0;
  DyadicNets nets;
  double radius = 0.0;
};

/// X_s = Re<g, s> / sqrt(n) with g standard complex Gaussian, draw t from
/// RngStream(seed, t), compared with dudley_bound on the greedy dyadic nets.
GaussianProcessReport gaussian_process_dudley(const FinitePointSet& ps, Eigen::Index n,
                                              int draws, double a, double alpha,
                                              std::uint64_t seed, int workers = 1);

}  // namespace chanlab
