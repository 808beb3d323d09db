#pragma once

#include <cstdint>

#include "chanlab/matrix_core.hpp"
#include "chanlab/sampling.hpp"

namespace chanlab {

/// Default scalar-operation budget for product-channel computations.
inline constexpr double kDefaultBudget = 2147483648.0;  // 2^31

/// The channel rho -> tr_{C^d}(V rho V^dagger) induced by an m-dimensional
/// subspace of C^k (x) C^d.
class RandomChannel {
 public:
  RandomChannel(Eigen::Index k, Eigen::Index d, SubspaceBasis v);

  Eigen::Index k() const { return k_; }
  Eigen::Index d() const { return d_; }
  Eigen::Index m() const { return v_.subspace_dim(); }
  const SubspaceBasis& isometry() const { return v_; }

  /// k x d matrix of V u, i.e. the matrix avatar of the image of u.
  CMatrix image_matrix(const CVector& u) const;

  /// Matrix avatar of the l-th basis vector of W.
  CMatrix column_matrix(Eigen::Index l) const;

 private:
  Eigen::Index k_;
  Eigen::Index d_;
  SubspaceBasis v_;
};

/// Channel from a Haar-random m-dimensional subspace of C^k (x) C^d.
RandomChannel sample_channel(Eigen::Index k, Eigen::Index d, Eigen::Index m,
                             RngStream& stream);

/// Phi(rho); throws DomainError on dimension mismatch.
DensityMatrix apply(const RandomChannel& phi, const DensityMatrix& rho);

/// Phi(|u><u|) computed as M M^dagger with M the matrix avatar of V u.
DensityMatrix apply_pure(const RandomChannel& phi, const CVector& u);

/// The channel built from the entrywise conjugate isometry.
RandomChannel conjugate_channel(const RandomChannel& phi);

/// Estimated scalar operations for product_output_on_entangled.
double product_output_cost(const RandomChannel& phi);

/// (Phi (x) conj Phi)(|chi_m><chi_m|), assembled from matrix units as
/// (1/m) sum_ij Phi(E_ij) (x) conj(Phi(E_ij)). Throws BudgetError when
/// product_output_cost exceeds `budget`.
DensityMatrix product_output_on_entangled(const RandomChannel& phi,
                                          double budget = kDefaultBudget);

/// <chi_k| rho |chi_k> for a state on C^k (x) C^k.
double entangled_overlap(const DensityMatrix& product_output);

/// <chi_k| (Phi (x) conj Phi)(chi_m) |chi_k>; at least m/(kd).
double entangled_overlap(const RandomChannel& phi,
                         double budget = kDefaultBudget);

/// Same overlap without forming the product output: ||tr_k(V V^dagger)||_HS^2
/// / (km), in O(k d^2 m) operations.
double entangled_overlap_from_isometry(const RandomChannel& phi);

}  // namespace chanlab
