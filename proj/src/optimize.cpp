#include "chanlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "chanlab/errors.hpp"
#include "chanlab/sampling.hpp"

namespace chanlab {

namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// u -> M(u) = avatar of W u, and the pullback G -> W^dagger vec(G).
class Section {
 public:
  Section(const CMatrix& w, Eigen::Index k, Eigen::Index d)
      : identity_(w.rows() == w.cols() && w.isIdentity(0.0)),
        m_(w.cols()),
        k_(k),
        d_(d) {
    if (!identity_) w_ = std::make_shared<const CMatrix>(w);
    if (k < 1 || d < 1 || w.rows() != k * d) {
      std::ostringstream os;
      os << "objective: basis has " << w.rows() << " rows, expected k*d = " << k
         << "*" << d;
      throw DomainError(os.str());
    }
  }

  Eigen::Index m() const { return m_; }

  RowMajor avatar(const CVector& u) const {
    check(u);
    if (identity_) return Eigen::Map<const RowMajor>(u.data(), k_, d_);
    const CVector x = (*w_) * u;
    return Eigen::Map<const RowMajor>(x.data(), k_, d_);
  }

  CVector pullback(const RowMajor& g) const {
    const Eigen::Map<const CVector> flat(g.data(), g.size());
    if (identity_) return flat;
    return w_->adjoint() * flat;
  }

 private:
  void check(const CVector& u) const {
    if (u.size() != m_) {
      throw DomainError("objective: point dimension does not match the subspace");
    }
  }

  bool identity_;  // full-space sections skip the basis products
  std::shared_ptr<const CMatrix> w_;
  Eigen::Index m_;
  Eigen::Index k_;
  Eigen::Index d_;
};

[[noreturn]] void non_finite(int start_index, const char* what) {
  std::ostringstream os;
  os << "optimizer: non-finite " << what << " in start " << start_index;
  throw OptimizerError(os.str());
}

void require_finite(double value, int start_index, const char* what) {
  if (!std::isfinite(value)) non_finite(start_index, what);
}

// Unit vector along the complex tangent space at u, or empty when m == 1.
std::optional<CVector> random_tangent(const CVector& u, RngStream& stream) {
  if (u.size() < 2) return std::nullopt;
  for (int attempt = 0; attempt < 16; ++attempt) {
    CVector delta(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) delta(i) = stream.complex_normal();
    delta -= u.dot(delta) * u;
    const double norm = delta.norm();
    if (norm > 1e-8) return CVector(delta / norm);
  }
  return std::nullopt;
}

constexpr double kMaxStep = 1e8;

// Runs the mandatory finite-difference validation of a non-smooth objective.
void validate_gradient(const SphereObjective& obj, Eigen::Index m, const char* name) {
  if (m < 2) return;
  const FiniteDifferenceReport report = finite_difference_report(obj, m, 2, 1e-5, 0x5eed);
  if (report.points_checked > 0 && report.max_rel_error > 1e-3) {
    std::ostringstream os;
    os << name << ": gradient fails finite-difference validation (relative error "
       << report.max_rel_error << ")";
    throw std::logic_error(os.str());
  }
}

}  // namespace

void OptimizerConfig::validate() const {
  if (starts < 1) throw DomainError("OptimizerConfig: starts must be >= 1");
  if (max_iters < 1) throw DomainError("OptimizerConfig: max_iters must be >= 1");
  if (!(initial_step > 0.0)) throw DomainError("OptimizerConfig: initial_step must be > 0");
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) {
    throw DomainError("OptimizerConfig: step_shrink must lie in (0, 1)");
  }
  if (!(grad_tol > 0.0)) throw DomainError("OptimizerConfig: grad_tol must be > 0");
  if (!(rel_tol >= 0.0)) throw DomainError("OptimizerConfig: rel_tol must be >= 0");
}

ExtremizeResult local_extremize(const SphereObjective& obj, const CVector& start,
                                Direction direction, const OptimizerConfig& cfg,
                                int start_index) {
  cfg.validate();
  const double start_norm = start.norm();
  if (start.size() == 0 || !(start_norm > 0.0)) {
    throw DomainError("local_extremize: start must be a non-zero vector");
  }
  const double sign = direction == Direction::kMaximize ? 1.0 : -1.0;

  CVector u = start / start_norm;
  double f = obj.evaluate(u);
  require_finite(f, start_index, "objective");

  ExtremizeResult result;
  double step = cfg.initial_step;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const CVector g = sign * obj.gradient(u);
    if (!g.allFinite()) non_finite(start_index, "gradient");
    const CVector tangent = g - u.dot(g) * u;
    const double gnorm = tangent.norm();
    if (gnorm <= cfg.grad_tol) {
      result.converged = true;
      break;
    }
    bool accepted = false;
    CVector candidate;
    double f_candidate = f;
    while (step * gnorm > 1e-15) {
      candidate = u + step * tangent;
      candidate /= candidate.norm();
      f_candidate = obj.evaluate(candidate);
      require_finite(f_candidate, start_index, "objective");
      if (sign * f_candidate > sign * f) {
        accepted = true;
        break;
      }
      step *= cfg.step_shrink;
    }
    if (!accepted) {
      // No ascent direction survives at machine precision: stationary.
      result.converged = true;
      break;
    }
    const double improvement = std::abs(f_candidate - f);
    u = std::move(candidate);
    f = f_candidate;
    step = std::min(step / cfg.step_shrink, kMaxStep);
    if (improvement <= cfg.rel_tol * std::max(1.0, std::abs(f))) {
      result.converged = true;
      ++it;
      break;
    }
  }
  result.value = f;
  result.argpoint = std::move(u);
  result.iterations = it;
  result.start_index = start_index;
  return result;
}

ExtremizeResult riemannian_extremize(const SphereObjective& obj, Eigen::Index m,
                                     Direction direction, const OptimizerConfig& cfg) {
  cfg.validate();
  if (m < 1) throw DomainError("riemannian_extremize: m must be >= 1");
  std::optional<ExtremizeResult> best;
  for (int s = 0; s < cfg.starts; ++s) {
    RngStream stream(cfg.seed, static_cast<std::uint64_t>(s));
    const CVector start = haar_unit_vector(m, stream);
    ExtremizeResult run = local_extremize(obj, start, direction, cfg, s);
    const bool better = !best || (direction == Direction::kMaximize
                                      ? run.value > best->value
                                      : run.value < best->value);
    if (better) best = std::move(run);
  }
  if (!best) throw OptimizerError("riemannian_extremize: no iterate produced");
  return *best;
}

SphereObjective g_objective(const SubspaceBasis& w, Eigen::Index k, Eigen::Index d) {
  const Section section(w.columns(), k, d);
  SphereObjective obj;
  obj.evaluate = [section](const CVector& u) {
    const RowMajor m = section.avatar(u);
    const CMatrix a = m * m.adjoint();
    return a.squaredNorm();
  };
  obj.gradient = [section](const CVector& u) {
    const RowMajor m = section.avatar(u);
    const CMatrix a = m * m.adjoint();
    const RowMajor g = 4.0 * (a * m);
    return section.pullback(g);
  };
  // |4 M M^dagger M|_HS <= 4 on the unit sphere.
  obj.lipschitz_hint = 4.0;
  return obj;
}

SphereObjective schatten4_objective(const SubspaceBasis& w, Eigen::Index k,
                                    Eigen::Index d) {
  const Section section(w.columns(), k, d);
  SphereObjective obj;
  obj.evaluate = [section](const CVector& u) {
    const RowMajor m = section.avatar(u);
    const CMatrix a = m * m.adjoint();
    return std::pow(a.squaredNorm(), 0.25);
  };
  obj.gradient = [section](const CVector& u) {
    const RowMajor m = section.avatar(u);
    const CMatrix a = m * m.adjoint();
    const double quartic = a.squaredNorm();
    const RowMajor g = std::pow(quartic, -0.75) * (a * m);
    return section.pullback(g);
  };
  obj.lipschitz_hint = 1.0;
  return obj;
}

namespace {

struct TopSingular {
  double value;
  double gap;
  RowMajor direction;  // u1 v1^dagger
};

// Top singular triple through the k x k Gram matrix M M^dagger.
TopSingular top_singular(const RowMajor& m) {
  const CMatrix a = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  const auto& evals = solver.eigenvalues();
  const Eigen::Index k = a.rows();
  const double s1 = std::sqrt(std::max(evals(k - 1), 0.0));
  const double s2 = k > 1 ? std::sqrt(std::max(evals(k - 2), 0.0)) : 0.0;
  TopSingular top{s1, k > 1 ? s1 - s2 : kInfinity, RowMajor::Zero(m.rows(), m.cols())};
  if (s1 > 0.0) {
    const CVector left = solver.eigenvectors().col(k - 1);
    const CVector right = m.adjoint() * left / s1;
    top.direction = left * right.adjoint();
  }
  return top;
}

}  // namespace

SphereObjective opnorm_objective(const SubspaceBasis& w, Eigen::Index k, Eigen::Index d,
                                 bool validate) {
  const Section section(w.columns(), k, d);
  SphereObjective obj;
  obj.evaluate = [section](const CVector& u) {
    return top_singular(section.avatar(u)).value;
  };
  obj.gradient = [section](const CVector& u) {
    return section.pullback(top_singular(section.avatar(u)).direction);
  };
  obj.is_regular = [section](const CVector& u) {
    return top_singular(section.avatar(u)).gap >= 1e-6;
  };
  obj.lipschitz_hint = 1.0;
  if (validate) validate_gradient(obj, w.subspace_dim(), "opnorm_objective");
  return obj;
}

SphereObjective entropy_objective(const RandomChannel& phi, bool validate) {
  const Section section(phi.isometry().columns(), phi.k(), phi.d());
  SphereObjective obj;
  obj.evaluate = [section](const CVector& u) {
    const RowMajor m = section.avatar(u);
    const CMatrix a = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, Eigen::EigenvaluesOnly);
    const RVector spectrum = clip_spectrum(solver.eigenvalues());
    double s = 0.0;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
      if (spectrum(i) > 0.0) s -= spectrum(i) * std::log(spectrum(i));
    }
    return s;
  };
  obj.gradient = [section](const CVector& u) {
    const RowMajor m = section.avatar(u);
    const CMatrix a = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
    const RVector log_eval = solver.eigenvalues().unaryExpr(
        [](double x) { return std::log(std::max(x, tol::kEigenClip)) + 1.0; });
    const CMatrix& q = solver.eigenvectors();
    const CMatrix log_plus_id = q * log_eval.asDiagonal() * q.adjoint();
    const RowMajor g = -2.0 * (log_plus_id * m);
    return section.pullback(g);
  };
  obj.is_regular = [section](const CVector& u) {
    const RowMajor m = section.avatar(u);
    const CMatrix a = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= 1e-8;
  };
  if (validate) validate_gradient(obj, phi.m(), "entropy_objective");
  return obj;
}

FiniteDifferenceReport finite_difference_report(const SphereObjective& obj,
                                                Eigen::Index m, int points, double h,
                                                std::uint64_t seed) {
  if (!(h > 1e-8 && h < 1e-3)) {
    throw DomainError("finite_difference_check: h must lie in (1e-8, 1e-3)");
  }
  if (m < 1 || points < 0) throw DomainError("finite_difference_check: bad sizes");
  constexpr int kDirections = 10;
  constexpr int kMaxAttemptsPerPoint = 200;
  FiniteDifferenceReport report;
  RngStream stream(seed, 0);
  for (int p = 0; p < points; ++p) {
    std::optional<CVector> point;
    for (int attempt = 0; attempt < kMaxAttemptsPerPoint; ++attempt) {
      CVector u = haar_unit_vector(m, stream);
      if (!obj.is_regular || obj.is_regular(u)) {
        point = std::move(u);
        break;
      }
      ++report.points_skipped;
    }
    if (!point) continue;
    const CVector& u = *point;
    const CVector grad = obj.gradient(u);
    bool checked = false;
    for (int dir = 0; dir < kDirections; ++dir) {
      const std::optional<CVector> delta = random_tangent(u, stream);
      if (!delta) break;
      const double analytic = grad.dot(*delta).real();
      CVector plus = u + h * *delta;
      CVector minus = u - h * *delta;
      plus /= plus.norm();
      minus /= minus.norm();
      const double numeric = (obj.evaluate(plus) - obj.evaluate(minus)) / (2.0 * h);
      const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      report.max_rel_error =
          std::max(report.max_rel_error, std::abs(analytic - numeric) / scale);
      checked = true;
    }
    if (checked) ++report.points_checked;
  }
  return report;
}

double finite_difference_check(const SphereObjective& obj, Eigen::Index m, int points,
                               double h, std::uint64_t seed) {
  return finite_difference_report(obj, m, points, h, seed).max_rel_error;
}

}  // namespace chanlab
