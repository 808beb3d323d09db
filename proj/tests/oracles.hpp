#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library beyond the basic type aliases.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// tr_2 |x><x| for x in C^k (x) C^d with index i*d + j, by explicit summation.
inline CMatrix partial_trace_second(const CVector& x, int k, int d) {
  CMatrix out = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int ip = 0; ip < k; ++ip) {
      Complex s = 0.0;
      for (int j = 0; j < d; ++j) s += x(i * d + j) * std::conj(x(ip * d + j));
      out(i, ip) = s;
    }
  }
  return out;
}

/// tr_2 of a (kd) x (kd) operator, by explicit summation.
inline CMatrix partial_trace_second(const CMatrix& rho, int k, int d) {
  CMatrix out = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int ip = 0; ip < k; ++ip) {
      Complex s = 0.0;
      for (int j = 0; j < d; ++j) s += rho(i * d + j, ip * d + j);
      out(i, ip) = s;
    }
  }
  return out;
}

/// Kronecker product by loops.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index p = 0; p < b.rows(); ++p)
        for (Eigen::Index q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return out;
}

/// Eigenvalues of a Hermitian matrix through the real symmetric 2n x 2n
/// embedding [[Re, -Im], [Im, Re]]; each eigenvalue appears twice there.
inline std::vector<double> hermitian_eigenvalues(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd r(2 * n, 2 * n);
  r << a.real(), -a.imag(), a.imag(), a.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < 2 * n; i += 2) out.push_back(es.eigenvalues()(i));
  return out;  // ascending
}

/// Shannon entropy (nats) of a probability vector, 0 log 0 = 0.
inline double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) {
    if (x > 1e-12) s -= x * std::log(x);
  }
  return s;
}

/// Von Neumann entropy via the real embedding above.
inline double von_neumann(const CMatrix& rho) { return shannon(hermitian_eigenvalues(rho)); }

/// E tr|M|^4 for M uniform on the HS sphere of k x d matrices:
/// E tr (G G^+)^2 = kd(k + d) for Ginibre G, E ||G||^4 = kd(kd + 1).
inline double expected_fourth_moment(int k, int d) {
  return static_cast<double>(k + d) / static_cast<double>(k * d + 1);
}

/// P(|x_1| > t) for x uniform on the unit sphere of C^n: |x_1|^2 ~ Beta(1, n - 1).
inline double first_coordinate_tail(int n, double t) {
  if (t >= 1.0) return 0.0;
  if (t <= 0.0) return 1.0;
  return std::pow(1.0 - t * t, n - 1);
}

/// Central difference of f along t -> normalize(u + t v) at t = 0.
template <class F>
inline double sphere_directional_derivative(F&& f, const CVector& u, const CVector& v,
                                            double h) {
  const CVector plus = (u + h * v).normalized();
  const CVector minus = (u - h * v).normalized();
  return (f(plus) - f(minus)) / (2.0 * h);
}

/// Every pair (i, j): |f_i - f_j| <= L dist_ij + slack.
template <class Dist>
inline bool pairwise_lipschitz(const std::vector<double>& values, double lipschitz, Dist&& dist,
                               double slack) {
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (std::abs(values[i] - values[j]) > lipschitz * dist(i, j) + slack) return false;
  return true;
}

}  // namespace oracle
