#include "chanlab/chaining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chanlab/errors.hpp"
#include "chanlab/parallel.hpp"
#include "chanlab/sampling.hpp"

namespace chanlab {

namespace {

constexpr double kSlack = 1e-9;

double euclidean_distance(const CVector& x, const CVector& y) { return (x - y).norm(); }

}  // namespace

FinitePointSet::FinitePointSet(std::vector<CVector> points, Distance distance)
    : points_(std::move(points)), distance_(std::move(distance)) {
  if (!distance_) throw DomainError("FinitePointSet: missing distance function");
}

FinitePointSet FinitePointSet::euclidean(std::vector<CVector> points) {
  return FinitePointSet(std::move(points), euclidean_distance);
}

FinitePointSet FinitePointSet::line(const std::vector<double>& xs) {
  std::vector<CVector> points;
  points.reserve(xs.size());
  for (double x : xs) {
    CVector p(1);
    p(0) = x;
    points.push_back(std::move(p));
  }
  return euclidean(std::move(points));
}

double FinitePointSet::distance(std::size_t i, std::size_t j) const {
  return distance_(points_[i], points_[j]);
}

double FinitePointSet::distance_to(const CVector& x, std::size_t j) const {
  return distance_(x, points_[j]);
}

void FinitePointSet::validate(int triples, std::uint64_t seed) const {
  if (points_.empty()) return;
  RngStream stream(seed, 0);
  std::uniform_int_distribution<std::size_t> pick(0, points_.size() - 1);
  for (int t = 0; t < triples; ++t) {
    const std::size_t a = pick(stream.engine());
    const std::size_t b = pick(stream.engine());
    const std::size_t c = pick(stream.engine());
    const double ab = distance(a, b);
    if (!(ab >= 0.0) || std::abs(distance(a, a)) > kSlack ||
        std::abs(ab - distance(b, a)) > kSlack ||
        ab > distance(a, c) + distance(c, b) + kSlack) {
      std::ostringstream os;
      os << "FinitePointSet: metric axioms fail on (" << a << ", " << b << ", " << c << ")";
      throw DomainError(os.str());
    }
  }
}

NetResult greedy_net(const FinitePointSet& ps, double eta) {
  if (!(eta > 0.0)) throw DomainError("greedy_net: eta must be > 0");
  if (ps.size() == 0) throw DomainError("greedy_net: empty point set");
  NetResult net;
  net.eta = eta;
  std::vector<double> nearest(ps.size(), std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  while (true) {
    net.net_indices.push_back(next);
    double far = -1.0;
    std::size_t far_index = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      nearest[i] = std::min(nearest[i], ps.distance(i, next));
      if (nearest[i] > far) {
        far = nearest[i];
        far_index = i;
      }
    }
    if (far <= eta) {
      net.covering_radius = far;
      break;
    }
    next = far_index;
  }
  net.covering_radius_checked = true;
  return net;
}

double covering_bound(Eigen::Index n_complex_dim, double eta) {
  if (!(eta > 0.0)) throw DomainError("covering_bound: eta must be > 0");
  if (n_complex_dim < 0) throw DomainError("covering_bound: dimension must be >= 0");
  return std::pow(1.0 + 2.0 / eta, 2.0 * static_cast<double>(n_complex_dim));
}

double lipschitz_excess(const FinitePointSet& ps, const std::vector<double>& values,
                        double lipschitz) {
  if (values.size() != ps.size()) throw DomainError("lipschitz_excess: size mismatch");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const double dv = std::abs(values[i] - values[j]);
      const double dist = ps.distance(i, j);
      worst = std::max(worst, dv - lipschitz * dist);
    }
  }
  return worst;
}

LipschitzExtension::LipschitzExtension(FinitePointSet domain, std::vector<double> values,
                                       double lipschitz)
    : domain_(std::move(domain)), values_(std::move(values)), lipschitz_(lipschitz) {
  if (!(lipschitz_ >= 0.0)) throw DomainError("lipschitz_extend: L must be >= 0");
  if (domain_.size() == 0) throw DomainError("lipschitz_extend: empty domain");
  if (values_.size() != domain_.size()) {
    throw DomainError("lipschitz_extend: one value per domain point required");
  }
  const double excess = lipschitz_excess(domain_, values_, lipschitz_);
  if (excess > kSlack) {
    std::ostringstream os;
    os << "lipschitz_extend: values are not " << lipschitz_
       << "-Lipschitz on the domain (excess " << excess << ")";
    throw DomainError(os.str());
  }
}

double LipschitzExtension::operator()(const CVector& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const double dist = domain_.distance_to(x, i);
    // exact agreement on the domain, independent of rounding in L * 0
    if (dist == 0.0) return values_[i];
    best = std::min(best, values_[i] + lipschitz_ * dist);
  }
  return best;
}

double lipschitz_extend(const FinitePointSet& domain, const std::vector<double>& values,
                        double lipschitz, const CVector& x) {
  return LipschitzExtension(domain, values, lipschitz)(x);
}

SphereNet sphere_net(Eigen::Index n, std::size_t samples, double eta, std::uint64_t seed) {
  if (n < 1) throw DomainError("sphere_net: n must be >= 1");
  if (samples < 1) throw DomainError("sphere_net: need at least one sample");
  RngStream stream(seed, 0);
  std::vector<CVector> cloud;
  cloud.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) cloud.push_back(haar_unit_vector(n, stream));
  const FinitePointSet ps = FinitePointSet::euclidean(std::move(cloud));
  const NetResult net = greedy_net(ps, eta);
  SphereNet out;
  out.n = n;
  out.eta = eta;
  out.cloud_size = samples;
  out.covering_radius = net.covering_radius;
  for (std::size_t i : net.net_indices) out.points.push_back(ps.point(i));
  return out;
}

double net_opnorm_certificate(const CMatrix& delta, const SphereNet& net) {
  if (delta.rows() != delta.cols() || delta.rows() != net.n) {
    throw DomainError("net_opnorm_certificate: delta must be n x n for the net dimension");
  }
  if (hermitian_defect(delta) > tol::kHermitian * std::max(1.0, delta.norm())) {
    throw DomainError("net_opnorm_certificate: delta is not Hermitian");
  }
  if (net.points.empty() || net.covering_radius > 0.25) {
    std::ostringstream os;
    os << "net_opnorm_certificate: need a 1/4-net, covering radius is "
       << net.covering_radius;
    throw DomainError(os.str());
  }
  double best = 0.0;
  for (const CVector& x : net.points) {
    best = std::max(best, std::abs(x.dot(delta * x)));
  }
  return 2.0 * best;
}

double aligned_distance(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw DomainError("aligned_distance: size mismatch");
  const double overlap = std::min(1.0, std::abs(x.dot(y)));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

std::vector<double> pair_differences(const PointFunction& f, const CVector& x,
                                     const CVector& y, int trials, std::uint64_t seed,
                                     int workers) {
  if (trials < 1) throw DomainError("pair_differences: trials must be >= 1");
  if (x.size() != y.size() || x.size() < 1) {
    throw DomainError("pair_differences: x and y must share a positive dimension");
  }
  const Eigen::Index n = x.size();
  std::vector<double> diffs(static_cast<std::size_t>(trials));
  parallel_for(diffs.size(), workers, [&](std::size_t t) {
    RngStream stream(seed, t);
    const SubspaceBasis u = haar_isometry(n, n, stream);
    diffs[t] = f(u.columns() * x) - f(u.columns() * y);
  });
  return diffs;
}

SubgaussianPairReport subgaussian_pair_experiment(const PointFunction& f,
                                                  const CVector& x, const CVector& y,
                                                  int trials,
                                                  const std::vector<double>& lambda_grid,
                                                  std::uint64_t seed, int workers) {
  if (std::abs(x.norm() - 1.0) > tol::kConstruction ||
      std::abs(y.norm() - 1.0) > tol::kConstruction) {
    throw DomainError("subgaussian_pair_experiment: x and y must be unit vectors");
  }
  SubgaussianPairReport report;
  report.aligned_distance = aligned_distance(x, y);
  if (report.aligned_distance < 1e-12) {
    throw DomainError("subgaussian_pair_experiment: x and y coincide up to a phase");
  }
  for (double l : lambda_grid) {
    if (!(l > 0.0)) throw DomainError("subgaussian_pair_experiment: lambdas must be > 0");
  }
  if (lambda_grid.empty() || !std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
    throw DomainError("subgaussian_pair_experiment: lambda grid must be sorted and non-empty");
  }
  report.differences = pair_differences(f, x, y, trials, seed, workers);
  TailCurve& c = report.curve;
  c.epsilons = lambda_grid;
  c.trials = trials;
  c.central_value = 0.0;
  c.central_kind = CentralKind::kMedian;
  c.exceed_prob = exceedance_curve(report.differences, 0.0, lambda_grid);
  const double n = static_cast<double>(x.size());
  const double dist_sq = report.aligned_distance * report.aligned_distance;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double p = c.exceed_prob[i];
    if (p <= 0.0) continue;
    const double l = lambda_grid[i];
    const double fit = (1.0 - std::log(p)) * dist_sq / (n * l * l);
    c.c1_fit = c.c1_fit ? std::min(*c.c1_fit, fit) : fit;
  }
  return report;
}

double max_gaussian_bound(std::size_t n, double beta, double a) {
  if (n < 1) throw DomainError("max_gaussian_bound: N must be >= 1");
  return beta * (std::sqrt(2.0 * std::log(static_cast<double>(n))) + a);
}

double dudley_bound(const std::vector<CoveringLevel>& levels, double a, double alpha,
                    double radius) {
  if (levels.empty()) throw DomainError("dudley_bound: no covering levels");
  if (!(alpha > 0.0)) throw DomainError("dudley_bound: alpha must be > 0");
  if (!(a >= 0.0)) throw DomainError("dudley_bound: A must be >= 0");
  if (!(radius >= 0.0)) throw DomainError("dudley_bound: radius must be >= 0");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const CoveringLevel& l = levels[i];
    if (std::abs(l.eta - std::ldexp(1.0, -l.j)) > 1e-12 * std::ldexp(1.0, -l.j)) {
      throw DomainError("dudley_bound: level eta must equal 2^-j");
    }
    if (l.count < 1) throw DomainError("dudley_bound: covering numbers must be >= 1");
    if (i > 0 && l.j != levels[i - 1].j + 1) {
      std::ostringstream os;
      os << "dudley_bound: missing dyadic level between j=" << levels[i - 1].j
         << " and j=" << l.j;
      throw DomainError(os.str());
    }
  }
  if (levels.front().eta < radius) {
    throw DomainError("dudley_bound: first level must satisfy 2^-j0 >= radius");
  }
  const double scale = 1.0 / std::sqrt(alpha);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double beta = std::ldexp(1.0, -levels[i].j + 1) * scale;
    const double pairs = static_cast<double>(levels[i + 1].count);
    sum += beta * (std::sqrt(2.0 * std::log(pairs * pairs)) + a);
  }
  return 2.0 * sum;
}

double eccentricity(const FinitePointSet& ps, std::size_t center) {
  if (center >= ps.size()) throw DomainError("eccentricity: center out of range");
  double r = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) r = std::max(r, ps.distance(center, i));
  return r;
}

DyadicNets dyadic_nets(const FinitePointSet& ps, int max_levels) {
  if (ps.size() == 0) throw DomainError("dyadic_nets: empty point set");
  if (max_levels < 1) throw DomainError("dyadic_nets: max_levels must be >= 1");
  const double radius = eccentricity(ps);
  int j = 0;
  if (radius > 0.0) {
    j = static_cast<int>(std::floor(-std::log2(radius)));
    while (std::ldexp(1.0, -j) < radius) --j;
    while (std::ldexp(1.0, -(j + 1)) >= radius) ++j;
  }
  std::vector<std::size_t> everything(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) everything[i] = i;

  DyadicNets out;
  for (int level = 0; level < max_levels; ++level, ++j) {
    std::vector<std::size_t> net;
    if (level + 1 == max_levels) {
      net = everything;
    } else {
      net = greedy_net(ps, std::ldexp(1.0, -j)).net_indices;
      std::sort(net.begin(), net.end());
    }
    out.levels.push_back({j, std::ldexp(1.0, -j), net.size()});
    const bool complete = net.size() == ps.size();
    out.nets.push_back(std::move(net));
    if (complete) break;
  }
  return out;
}

std::size_t nearest_in_net(const FinitePointSet& ps, const std::vector<std::size_t>& net,
                           std::size_t s) {
  if (net.empty()) throw DomainError("nearest_in_net: empty net");
  std::size_t best = net.front();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t p : net) {
    const double dist = ps.distance(s, p);
    if (dist < best_dist || (dist == best_dist && p < best)) {
      best = p;
      best_dist = dist;
    }
  }
  return best;
}

double chaining_decomposition_check(const FinitePointSet& ps,
                                    const std::vector<std::vector<std::size_t>>& nets,
                                    const std::vector<double>& process) {
  if (process.size() != ps.size()) {
    throw DomainError("chaining_decomposition_check: one process value per point required");
  }
  if (nets.empty() || nets.front().size() != 1) {
    throw DomainError("chaining_decomposition_check: the first net must be a single point");
  }
  for (const auto& net : nets) {
    for (std::size_t p : net) {
      if (p >= ps.size()) throw DomainError("chaining_decomposition_check: bad net index");
    }
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < ps.size(); ++s) {
    std::size_t prev = nets.front().front();
    double value = process[prev];
    for (std::size_t k = 1; k < nets.size(); ++k) {
      const std::size_t cur = nearest_in_net(ps, nets[k], s);
      value += process[cur] - process[prev];
      prev = cur;
    }
    if (prev != s) {
      std::ostringstream os;
      os << "chaining_decomposition_check: deepest net does not separate point " << s;
      throw DomainError(os.str());
    }
    worst = std::max(worst, std::abs(process[s] - value));
  }
  return worst;
}

GaussianProcessReport gaussian_process_dudley(const FinitePointSet& ps, Eigen::Index n,
                                              int draws, double a, double alpha,
                                              std::uint64_t seed, int workers) {
  if (draws < 1) throw DomainError("gaussian_process_dudley: draws must be >= 1");
  if (ps.size() == 0) throw DomainError("gaussian_process_dudley: empty point set");
  for (const CVector& p : ps.points()) {
    if (p.size() != n) throw DomainError("gaussian_process_dudley: dimension mismatch");
  }
  GaussianProcessReport report;
  report.radius = eccentricity(ps);
  report.nets = dyadic_nets(ps);
  report.bound = dudley_bound(report.nets.levels, a, alpha, report.radius);
  report.sup_increments.assign(static_cast<std::size_t>(draws), 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  parallel_for(report.sup_increments.size(), workers, [&](std::size_t t) {
    RngStream stream(seed, t);
    CVector g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = stream.complex_normal();
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const CVector& p : ps.points()) {
      const double x = g.dot(p).real() * scale;
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
    report.sup_increments[t] = hi - lo;
  });
  report.mean_sup = mean(report.sup_increments);
  return report;
}

}  // namespace chanlab
