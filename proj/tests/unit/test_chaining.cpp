#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "chanlab/chaining.hpp"
#include "chanlab/errors.hpp"
#include "chanlab/sampling.hpp"
#include "oracles.hpp"

using namespace chanlab;

namespace {

std::vector<CVector> sphere_cloud(Eigen::Index n, int count, std::uint64_t seed) {
  RngStream s(seed, 0);
  std::vector<CVector> pts;
  for (int i = 0; i < count; ++i) pts.push_back(haar_unit_vector(n, s));
  return pts;
}

// Exhaustive covering and packing check of a net on its point set.
void expect_net_properties(const FinitePointSet& ps, const NetResult& net) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double best = 1e300;
    for (std::size_t p : net.net_indices) best = std::min(best, ps.distance(i, p));
    ASSERT_LE(best, net.eta + 1e-12) << "point " << i;
  }
  for (std::size_t a = 0; a < net.net_indices.size(); ++a)
    for (std::size_t b = a + 1; b < net.net_indices.size(); ++b)
      ASSERT_GT(ps.distance(net.net_indices[a], net.net_indices[b]), net.eta);
}

CMatrix random_hermitian(Eigen::Index n, RngStream& s) {
  const CMatrix z = ginibre(n, n, s);
  return (z + z.adjoint()) / 2.0;
}

}  // namespace

TEST(PointSet, MetricValidation) {
  FinitePointSet::euclidean(sphere_cloud(3, 50, 1)).validate(200, 1);
  const FinitePointSet bad({CVector::Ones(1), CVector::Zero(1)},
                           [](const CVector& a, const CVector& b) { return (a - b).real().sum(); });
  EXPECT_THROW(bad.validate(200, 2), DomainError);
}

TEST(GreedyNet, LineExample) {
  const FinitePointSet ps = FinitePointSet::line({0.0, 1.0, 2.0});
  const NetResult net = greedy_net(ps, 0.5);
  EXPECT_EQ(net.net_indices, (std::vector<std::size_t>{0, 2, 1}));
  EXPECT_EQ(greedy_net(ps, 2.0).net_indices.size(), 1u);
  EXPECT_EQ(greedy_net(ps, 5.0).net_indices.size(), 1u);
}

TEST(GreedyNet, Errors) {
  EXPECT_THROW(greedy_net(FinitePointSet::line({}), 0.5), DomainError);
  EXPECT_THROW(greedy_net(FinitePointSet::line({0.0}), 0.0), DomainError);
}

TEST(GreedyNet, SphereCloudWithinCoveringBound) {
  const FinitePointSet ps = FinitePointSet::euclidean(sphere_cloud(2, 10000, 3));
  const NetResult net = greedy_net(ps, 0.5);
  EXPECT_LE(double(net.net_indices.size()), 625.0);
  EXPECT_LE(net.covering_radius, 0.5);
  expect_net_properties(ps, net);
}

TEST(GreedyNet, NeverExceedsCoveringBound) {
  const FinitePointSet ps = FinitePointSet::euclidean(sphere_cloud(2, 5000, 4));
  for (double eta : {1.0, 0.5, 0.25}) {
    const NetResult net = greedy_net(ps, eta);
    EXPECT_LE(double(net.net_indices.size()), covering_bound(2, eta)) << "eta=" << eta;
    expect_net_properties(ps, net);
  }
}

TEST(CoveringBound, Arithmetic) {
  EXPECT_DOUBLE_EQ(covering_bound(1, 2.0), 4.0);
  EXPECT_DOUBLE_EQ(covering_bound(2, 0.5), 625.0);
  EXPECT_THROW(covering_bound(2, 0.0), DomainError);
}

TEST(LipschitzExtension, Examples) {
  const FinitePointSet y = FinitePointSet::line({0.0});
  CVector x(1);
  x(0) = 1.0;
  EXPECT_DOUBLE_EQ(lipschitz_extend(y, {0.0}, 1.0, x), 1.0);
  const FinitePointSet y3 = FinitePointSet::line({0.0, 1.0, 3.0});
  const std::vector<double> h = {0.0, 0.5, 1.0};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(lipschitz_extend(y3, h, 1.0, y3.point(i)), h[i]);
  x(0) = 2.0;
  EXPECT_DOUBLE_EQ(lipschitz_extend(y3, h, 1.0, x), 1.5);
}

TEST(LipschitzExtension, RejectsNonLipschitzData) {
  const FinitePointSet y = FinitePointSet::line({0.0, 1.0});
  EXPECT_THROW(LipschitzExtension(y, {0.0, 2.0}, 1.0), DomainError);
  EXPECT_NO_THROW(LipschitzExtension(y, {0.0, 2.0}, 2.0));
}

TEST(LipschitzExtension, GTildeOnTheSphere) {
  const Eigen::Index k = 2, d = 4;
  const auto g = [&](const CVector& v) { return g_tilde(vector_to_matrix(v, k, d)); };
  const std::vector<CVector> ypts = sphere_cloud(k * d, 50, 5);
  std::vector<double> values;
  for (const CVector& p : ypts) values.push_back(g(p));
  const LipschitzExtension ext(FinitePointSet::euclidean(ypts), values, 2.0);
  for (std::size_t i = 0; i < ypts.size(); ++i) EXPECT_EQ(ext(ypts[i]), values[i]);

  std::vector<CVector> all = ypts;
  for (const CVector& p : sphere_cloud(k * d, 200, 6)) all.push_back(p);
  std::vector<double> ext_values;
  for (const CVector& p : all) ext_values.push_back(ext(p));
  EXPECT_TRUE(oracle::pairwise_lipschitz(
      ext_values, 2.0, [&](std::size_t i, std::size_t j) { return (all[i] - all[j]).norm(); },
      1e-9));
}

TEST(NetCertificate, Examples) {
  const SphereNet net = sphere_net(2, 20000, 0.25, 7);
  ASSERT_LE(net.covering_radius, 0.25);
  CMatrix delta = CMatrix::Zero(2, 2);
  delta(0, 0) = 1.0;
  delta(1, 1) = -1.0;
  EXPECT_GE(net_opnorm_certificate(delta, net), 1.0);
  EXPECT_EQ(net_opnorm_certificate(CMatrix::Zero(2, 2), net), 0.0);
}

TEST(NetCertificate, BracketsTheOperatorNorm) {
  const SphereNet net = sphere_net(2, 100000, 0.25, 8);
  ASSERT_LE(net.covering_radius, 0.25);
  RngStream s(8, 1);
  for (int t = 0; t < 100; ++t) {
    const CMatrix delta = random_hermitian(2, s);
    const std::vector<double> ev = oracle::hermitian_eigenvalues(delta);
    const double norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    const double bound = net_opnorm_certificate(delta, net);
    EXPECT_GE(bound, norm - 1e-9);
    EXPECT_LE(bound, 2.0 * norm + 1e-9);
  }
}

TEST(NetCertificate, Errors) {
  const SphereNet net = sphere_net(2, 20000, 0.25, 9);
  EXPECT_THROW(net_opnorm_certificate(CMatrix::Zero(3, 3), net), DomainError);
  CMatrix skew = CMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  EXPECT_THROW(net_opnorm_certificate(skew, net), DomainError);
  const SphereNet coarse = sphere_net(2, 200, 0.6, 9);
  if (coarse.covering_radius > 0.25) {
    EXPECT_THROW(net_opnorm_certificate(CMatrix::Identity(2, 2), coarse), DomainError);
  }
  SphereNet loose = net;
  loose.covering_radius = 0.3;
  EXPECT_THROW(net_opnorm_certificate(CMatrix::Identity(2, 2), loose), DomainError);
}

TEST(SubgaussianPair, PhaseEquivalentPairHasNoDifferences) {
  const PointFunction f = [](const CVector& v) { return std::abs(v(0)); };
  RngStream s(10, 0);
  const CVector x = haar_unit_vector(8, s);
  const CVector y = std::polar(1.0, 1.234) * x;
  EXPECT_NEAR(aligned_distance(x, y), 0.0, 1e-7);
  for (double diff : pair_differences(f, x, y, 500, 1)) EXPECT_LE(diff, 1e-14);
  EXPECT_THROW(subgaussian_pair_experiment(f, x, y, 100, {0.1}, 1), DomainError);
}

TEST(SubgaussianPair, MonotoneAndBoundedByAlignedDistance) {
  const int n = 32;
  const PointFunction f = [](const CVector& v) { return std::abs(v(0)); };
  CVector x = CVector::Zero(n);
  CVector y = CVector::Zero(n);
  x(0) = 1.0;
  const double c = 1.0 - 0.2 * 0.2 / 2.0;
  y(0) = c;
  y(1) = Complex(0.0, std::sqrt(1.0 - c * c));
  const SubgaussianPairReport r = subgaussian_pair_experiment(f, x, y, 10000, {0.05, 0.1, 0.2, 0.3}, 11);
  EXPECT_NEAR(r.aligned_distance, 0.2, 1e-12);
  const auto& p = r.curve.exceed_prob;
  EXPECT_GT(p[0], 0.0);
  EXPECT_LE(p[2], p[1]);
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LE(p[i], p[i - 1]);
  // 1-Lipschitz and circled: |f(Ux) - f(Uy)| <= aligned distance
  EXPECT_EQ(p[3], 0.0);
  for (double diff : r.differences) EXPECT_LE(diff, 0.2 + 1e-12);
}

TEST(SubgaussianPair, TailGrowsWithDistance) {
  const int n = 32;
  const PointFunction f = [](const CVector& v) { return std::abs(v(0)); };
  const auto pair_at = [&](double dist) {
    CVector y = CVector::Zero(n);
    const double c = 1.0 - dist * dist / 2.0;
    y(0) = c;
    y(1) = std::sqrt(1.0 - c * c);
    return y;
  };
  CVector x = CVector::Zero(n);
  x(0) = 1.0;
  const double near = subgaussian_pair_experiment(f, x, pair_at(0.2), 10000, {0.1}, 12).curve.exceed_prob[0];
  const double far = subgaussian_pair_experiment(f, x, pair_at(0.4), 10000, {0.1}, 12).curve.exceed_prob[0];
  EXPECT_GT(far, near);
}

TEST(Dudley, SinglePointSpace) {
  const FinitePointSet ps = FinitePointSet::line({0.3});
  const DyadicNets nets = dyadic_nets(ps);
  ASSERT_EQ(nets.levels.size(), 1u);
  EXPECT_EQ(dudley_bound(nets.levels, 2.0, 1.0, 0.0), 0.0);
  // explicit three-level truncation of a one-point space: only the A terms survive
  const std::vector<CoveringLevel> levels = {{0, 1.0, 1}, {1, 0.5, 1}, {2, 0.25, 1}};
  EXPECT_DOUBLE_EQ(dudley_bound(levels, 2.0, 4.0, 0.0), 2.0 * (1.0 + 0.5) * 2.0);
}

TEST(Dudley, TwoPointSpaceByHand) {
  const FinitePointSet ps = FinitePointSet::line({0.0, 1.0});
  const DyadicNets nets = dyadic_nets(ps);
  ASSERT_EQ(nets.levels.size(), 2u);
  EXPECT_EQ(nets.levels[0].j, 0);
  EXPECT_EQ(nets.levels[0].count, 1u);
  EXPECT_EQ(nets.levels[1].count, 2u);
  // 2 * beta_0 * (sqrt(2 log 2^2) + A), beta_0 = 2 / sqrt(alpha)
  const double hand = 2.0 * 2.0 * (std::sqrt(2.0 * std::log(4.0)) + 2.0);
  EXPECT_NEAR(dudley_bound(nets.levels, 2.0, 1.0, 1.0), hand, 1e-12);
  EXPECT_NEAR(hand, 14.660437, 1e-6);
}

TEST(Dudley, Errors) {
  EXPECT_THROW(dudley_bound({{0, 1.0, 1}, {2, 0.25, 4}}, 2.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(dudley_bound({{1, 0.5, 1}, {2, 0.25, 4}}, 2.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(dudley_bound({{0, 0.7, 1}}, 2.0, 1.0, 0.5), DomainError);
  EXPECT_THROW(dudley_bound({}, 2.0, 1.0, 0.5), DomainError);
}

TEST(Dudley, MonotoneInCountsAndA) {
  const std::vector<CoveringLevel> base = {{0, 1.0, 1}, {1, 0.5, 3}, {2, 0.25, 9}, {3, 0.125, 20}};
  const double b = dudley_bound(base, 2.0, 2.0, 1.0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto more = base;
    more[i].count += 5;
    EXPECT_GE(dudley_bound(more, 2.0, 2.0, 1.0), b);
  }
  EXPECT_GE(dudley_bound(base, 3.0, 2.0, 1.0), b);
}

TEST(Dudley, BoundsGaussianProcessOnSphere) {
  const Eigen::Index n = 16;
  const FinitePointSet ps = FinitePointSet::euclidean(sphere_cloud(n, 1000, 13));
  const GaussianProcessReport r = gaussian_process_dudley(ps, n, 200, 2.0, n / 2.0, 14);
  EXPECT_EQ(r.sup_increments.size(), 200u);
  EXPECT_GT(r.mean_sup, 0.0);
  EXPECT_LE(r.mean_sup, r.bound);
}

TEST(MaxGaussian, EmpiricalExpectationBelowBound) {
  const double beta = 0.7;
  for (std::size_t n : {10u, 100u, 1000u}) {
    RngStream s(15, n);
    double acc = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(beta * s.normal()));
      acc += m;
    }
    EXPECT_LE(acc / 1000.0, max_gaussian_bound(n, beta, 2.0)) << "N=" << n;
  }
}

TEST(Chaining, SingleLevelIsExact) {
  const FinitePointSet one = FinitePointSet::line({0.5});
  EXPECT_EQ(chaining_decomposition_check(one, {{0}}, {3.25}), 0.0);
  const FinitePointSet three = FinitePointSet::line({0.0, 0.1, 0.2});
  EXPECT_LE(chaining_decomposition_check(three, {{0}, {0, 1, 2}}, {1.0, -2.0, 5.5}), 1e-12);
}

TEST(Chaining, ArbitraryFunctionFiveLevels) {
  const FinitePointSet ps = FinitePointSet::euclidean(sphere_cloud(3, 100, 16));
  const DyadicNets nets = dyadic_nets(ps, 5);
  EXPECT_LE(nets.levels.size(), 5u);
  EXPECT_EQ(nets.nets.back().size(), ps.size());
  EXPECT_EQ(nets.nets.front().size(), 1u);
  RngStream s(16, 1);
  std::vector<double> f;
  for (std::size_t i = 0; i < ps.size(); ++i) f.push_back(100.0 * s.normal());
  EXPECT_LE(chaining_decomposition_check(ps, nets.nets, f), 1e-12);
}

TEST(Chaining, GaussianProcessDraw) {
  const Eigen::Index n = 4;
  const FinitePointSet ps = FinitePointSet::euclidean(sphere_cloud(n, 300, 17));
  const DyadicNets nets = dyadic_nets(ps);
  RngStream s(17, 1);
  CVector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = s.complex_normal();
  std::vector<double> x;
  for (const CVector& p : ps.points()) x.push_back(g.dot(p).real() / std::sqrt(double(n)));
  EXPECT_LE(chaining_decomposition_check(ps, nets.nets, x), 1e-12);
}

TEST(Chaining, Errors) {
  const FinitePointSet three = FinitePointSet::line({0.0, 0.1, 0.2});
  EXPECT_THROW(chaining_decomposition_check(three, {{0}, {0, 2}}, {1.0, 2.0, 3.0}), DomainError);
  EXPECT_THROW(chaining_decomposition_check(three, {{0, 1}, {0, 1, 2}}, {1.0, 2.0, 3.0}),
               DomainError);
  EXPECT_THROW(chaining_decomposition_check(three, {{0}, {0, 1, 2}}, {1.0}), DomainError);
}

TEST(Chaining, NearestTieGoesToLowestIndex) {
  const FinitePointSet ps = FinitePointSet::line({0.0, 1.0, 2.0});
  EXPECT_EQ(nearest_in_net(ps, {2, 0}, 1), 0u);
  EXPECT_THROW(nearest_in_net(ps, {}, 1), DomainError);
}

TEST(Determinism, WorkerCountDoesNotMatter) {
  const FinitePointSet ps = FinitePointSet::euclidean(sphere_cloud(4, 200, 18));
  EXPECT_EQ(gaussian_process_dudley(ps, 4, 50, 2.0, 2.0, 19, 1).sup_increments,
            gaussian_process_dudley(ps, 4, 50, 2.0, 2.0, 19, 3).sup_increments);
  const PointFunction f = [](const CVector& v) { return std::abs(v(0)); };
  const auto x = sphere_cloud(6, 2, 20);
  EXPECT_EQ(pair_differences(f, x[0], x[1], 100, 21, 1), pair_differences(f, x[0], x[1], 100, 21, 4));
}
