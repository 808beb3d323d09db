#pragma once

// Complex-matrix primitives shared by every other module.
//
// Vectors of C^k (x) C^d are identified with k x d matrices through the
// row-major ordering x[i*d + j] <-> M(i, j). Partial trace over the second
// factor then reads tr_d |x><x| = M M^dagger.

#include <complex>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

namespace chanlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;  // RectMatrix: any k x d complex matrix
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-12;      // DensityMatrix symmetry
inline constexpr double kConstruction = 1e-10;   // traces, norms, isometries
inline constexpr double kIdentity = 1e-9;        // algebraic identities
inline constexpr double kEigenClip = 1e-12;      // spectra fed to log
}  // namespace tol

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A Hermitian, positive semi-definite, unit-trace matrix. Construction
/// validates and stores the Hermitian part of its input.
class DensityMatrix {
 public:
  /// Throws DomainError unless `rho` is square, Hermitian to 1e-12 entrywise,
  /// has eigenvalues >= -1e-10 and trace within 1e-10 of one.
  explicit DensityMatrix(const CMatrix& rho);

  /// Pure state |u><u|; `u` must have unit norm (1e-10).
  static DensityMatrix pure(const CVector& u);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  Eigen::Index dim() const { return rho_.rows(); }
  const CMatrix& matrix() const { return rho_; }

 private:
  CMatrix rho_;
};

/// n x m matrix with orthonormal columns (an isometry V : C^m -> C^n) spanning
/// the subspace W.
class SubspaceBasis {
 public:
  /// Throws DomainError if m > n, m == 0 or max|V^dagger V - Id| > 1e-10.
  explicit SubspaceBasis(CMatrix columns);

  Eigen::Index ambient_dim() const { return v_.rows(); }
  Eigen::Index subspace_dim() const { return v_.cols(); }
  const CMatrix& columns() const { return v_; }

  /// V u for u in C^m.
  CVector embed(const CVector& u) const { return v_ * u; }

 private:
  CMatrix v_;
};

/// Schatten p-norm for p in [1, inf]; pass kInfinity for the operator norm.
double schatten_norm(const CMatrix& a, double p);

/// Descending singular values.
RVector singular_values(const CMatrix& a);

/// Largest singular value.
double operator_norm(const CMatrix& a);

/// Entrywise sqrt(sum |a_ij|^2).
double frobenius_norm(const CMatrix& a);

/// M(i, j) = x[i*d + j].
CMatrix vector_to_matrix(const CVector& x, Eigen::Index k, Eigen::Index d);

/// Inverse of vector_to_matrix.
CVector matrix_to_vector(const CMatrix& m);

/// M M^dagger for a unit Hilbert-Schmidt matrix M.
DensityMatrix output_state(const CMatrix& m);

/// tr |M|^4 = ||M M^dagger||_HS^2 (no normalization requirement).
double trace_fourth_power(const CMatrix& m);

/// ||M M^dagger - Id/k||_HS for unit-HS M. Evaluates both the direct norm and
/// the fourth-moment form tr|M|^4 - 1/k and throws std::logic_error if their
/// squares disagree by more than 1e-9.
double g_tilde(const CMatrix& m);

/// Fourth-moment route alone: sqrt(max(tr|M|^4 - 1/k, 0)).
double g_tilde_from_fourth_moment(double trace_m4, Eigen::Index k);

struct HermitianEigen {
  RVector values;  // descending
  CMatrix vectors; // columns match `values`
};

/// Eigen-decomposition of a Hermitian matrix (1e-10 entrywise symmetry check).
HermitianEigen hermitian_eigen(const CMatrix& a);

/// Eigenvalues only, descending; sum equals tr A.
RVector hermitian_spectrum(const CMatrix& a);

/// Largest entrywise |A - A^dagger|.
double hermitian_defect(const CMatrix& a);

/// Clip eigenvalues below kEigenClip to zero.
RVector clip_spectrum(const RVector& eigenvalues);

/// (1/sqrt k) sum_i e_i (x) e_i in C^{k^2}.
CVector maximally_entangled(Eigen::Index k);

/// Kronecker product A (x) B with row index a*rows(B) + b.
CMatrix kronecker(const CMatrix& a, const CMatrix& b);

}  // namespace chanlab
