#include "chanlab/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "chanlab/errors.hpp"

namespace chanlab {

namespace {

void require_unit_hs(const CMatrix& m, const char* what) {
  const double norm = m.norm();
  if (std::abs(norm - 1.0) > tol::kConstruction) {
    std::ostringstream os;
    os << what << ": expected unit Hilbert-Schmidt norm, got " << norm;
    throw DomainError(os.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(const CMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw DomainError("DensityMatrix: matrix must be square and non-empty");
  }
  const double defect = hermitian_defect(rho);
  if (defect > tol::kHermitian) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (max |A - A^dagger| = " << defect << ")";
    throw DomainError(os.str());
  }
  CMatrix herm = 0.5 * (rho + rho.adjoint());
  const double trace = herm.trace().real();
  if (std::abs(trace - 1.0) > tol::kConstruction) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << trace << " differs from 1";
    throw DomainError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol::kConstruction) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << min_eig;
    throw DomainError(os.str());
  }
  rho_ = std::move(herm);
}

DensityMatrix DensityMatrix::pure(const CVector& u) {
  if (std::abs(u.norm() - 1.0) > tol::kConstruction) {
    throw DomainError("DensityMatrix::pure: vector must have unit norm");
  }
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw DomainError("DensityMatrix::maximally_mixed: dim must be >= 1");
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

SubspaceBasis::SubspaceBasis(CMatrix columns) : v_(std::move(columns)) {
  const auto n = v_.rows();
  const auto m = v_.cols();
  if (m < 1 || n < 1 || m > n) {
    std::ostringstream os;
    os << "SubspaceBasis: need 1 <= m <= n, got n=" << n << " m=" << m;
    throw DomainError(os.str());
  }
  // The full-space identity basis is exact; skip the O(n^3) Gram check.
  if (m == n && v_.isIdentity(0.0)) return;
  const double defect =
      (v_.adjoint() * v_ - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
  if (defect > tol::kConstruction) {
    std::ostringstream os;
    os << "SubspaceBasis: columns not orthonormal (defect " << defect << ")";
    throw DomainError(os.str());
  }
}

RVector singular_values(const CMatrix& a) {
  if (a.size() == 0) return RVector();
  // JacobiSVD returns singular values sorted in decreasing order.
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double frobenius_norm(const CMatrix& a) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::norm(a(i, j));
  }
  return std::sqrt(acc);
}

double schatten_norm(const CMatrix& a, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw DomainError("schatten_norm: p must lie in [1, inf]");
  }
  const RVector s = singular_values(a);
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s(0);
  if (p == 2.0) return std::sqrt(s.squaredNorm());
  // Scale by the largest value to keep s^p in range.
  const double top = s(0);
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

CMatrix vector_to_matrix(const CVector& x, Eigen::Index k, Eigen::Index d) {
  if (k < 1 || d < 1 || x.size() != k * d) {
    std::ostringstream os;
    os << "vector_to_matrix: length " << x.size() << " does not equal k*d = "
       << k << "*" << d;
    throw DomainError(os.str());
  }
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(x.data(), k, d);
}

CVector matrix_to_vector(const CMatrix& m) {
  CVector x(m.size());
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<RowMajor>(x.data(), m.rows(), m.cols()) = m;
  return x;
}

DensityMatrix output_state(const CMatrix& m) {
  require_unit_hs(m, "output_state");
  return DensityMatrix(m * m.adjoint());
}

double trace_fourth_power(const CMatrix& m) {
  const CMatrix a = m * m.adjoint();
  return a.squaredNorm();
}

double g_tilde_from_fourth_moment(double trace_m4, Eigen::Index k) {
  return std::sqrt(std::max(trace_m4 - 1.0 / static_cast<double>(k), 0.0));
}

double g_tilde(const CMatrix& m) {
  require_unit_hs(m, "g_tilde");
  const auto k = m.rows();
  const CMatrix a = m * m.adjoint();
  const double direct_sq =
      (a - CMatrix::Identity(k, k) / static_cast<double>(k)).squaredNorm();
  const double moment_sq = a.squaredNorm() - 1.0 / static_cast<double>(k);
  if (std::abs(direct_sq - moment_sq) > tol::kIdentity) {
    std::ostringstream os;
    os << "g_tilde: fourth-moment identity violated (" << direct_sq << " vs "
       << moment_sq << ")";
    throw std::logic_error(os.str());
  }
  return std::sqrt(direct_sq);
}

double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return kInfinity;
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen hermitian_eigen(const CMatrix& a) {
  if (a.rows() != a.cols() || a.size() == 0) {
    throw DomainError("hermitian_eigen: matrix must be square and non-empty");
  }
  if (hermitian_defect(a) > tol::kConstruction) {
    throw DomainError("hermitian_eigen: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (a + a.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigen: eigensolver failed");
  }
  // Eigen sorts ascending; flip to descending.
  HermitianEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

RVector hermitian_spectrum(const CMatrix& a) {
  if (a.rows() != a.cols() || a.size() == 0) {
    throw DomainError("hermitian_spectrum: matrix must be square and non-empty");
  }
  if (hermitian_defect(a) > tol::kConstruction) {
    throw DomainError("hermitian_spectrum: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (a + a.adjoint()),
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

RVector clip_spectrum(const RVector& eigenvalues) {
  return eigenvalues.unaryExpr(
      [](double x) { return x < tol::kEigenClip ? 0.0 : x; });
}

CVector maximally_entangled(Eigen::Index k) {
  if (k < 1) throw DomainError("maximally_entangled: k must be >= 1");
  CVector chi = CVector::Zero(k * k);
  const double amp = 1.0 / std::sqrt(static_cast<double>(k));
  for (Eigen::Index i = 0; i < k; ++i) chi(i * k + i) = amp;
  return chi;
}

CMatrix kronecker(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace chanlab
