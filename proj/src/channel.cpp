#include "chanlab/channel.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "chanlab/errors.hpp"

namespace chanlab {

namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Column l of an n x m column-major matrix viewed as the k x d avatar.
Eigen::Map<const RowMajor> column_avatar(const CMatrix& a, Eigen::Index l,
                                         Eigen::Index k, Eigen::Index d) {
  return Eigen::Map<const RowMajor>(a.col(l).data(), k, d);
}

}  // namespace

RandomChannel::RandomChannel(Eigen::Index k, Eigen::Index d, SubspaceBasis v)
    : k_(k), d_(d), v_(std::move(v)) {
  if (k < 1 || d < 1 || v_.ambient_dim() != k * d) {
    std::ostringstream os;
    os << "RandomChannel: isometry ambient dimension " << v_.ambient_dim()
       << " does not equal k*d = " << k << "*" << d;
    throw DomainError(os.str());
  }
}

CMatrix RandomChannel::image_matrix(const CVector& u) const {
  if (u.size() != m()) throw DomainError("image_matrix: input dimension mismatch");
  return vector_to_matrix(v_.embed(u), k_, d_);
}

CMatrix RandomChannel::column_matrix(Eigen::Index l) const {
  return column_avatar(v_.columns(), l, k_, d_);
}

RandomChannel sample_channel(Eigen::Index k, Eigen::Index d, Eigen::Index m,
                             RngStream& stream) {
  if (k < 1 || d < 1 || m < 1 || m > k * d) {
    std::ostringstream os;
    os << "sample_channel: need k, d >= 1 and 1 <= m <= k*d, got k=" << k
       << " d=" << d << " m=" << m;
    throw DomainError(os.str());
  }
  return RandomChannel(k, d, haar_isometry(k * d, m, stream));
}

DensityMatrix apply(const RandomChannel& phi, const DensityMatrix& rho) {
  if (rho.dim() != phi.m()) {
    std::ostringstream os;
    os << "apply: state dimension " << rho.dim() << " does not match channel input "
       << phi.m();
    throw DomainError(os.str());
  }
  // tr_d(V rho V^dagger) = sum_l A_l B_l^dagger with A_l, B_l the avatars of
  // the l-th columns of V rho and V.
  const CMatrix& v = phi.isometry().columns();
  const CMatrix vr = v * rho.matrix();
  CMatrix out = CMatrix::Zero(phi.k(), phi.k());
  for (Eigen::Index l = 0; l < phi.m(); ++l) {
    out.noalias() += column_avatar(vr, l, phi.k(), phi.d()) *
                     column_avatar(v, l, phi.k(), phi.d()).adjoint();
  }
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

DensityMatrix apply_pure(const RandomChannel& phi, const CVector& u) {
  if (u.size() != phi.m()) throw DomainError("apply_pure: input dimension mismatch");
  if (std::abs(u.norm() - 1.0) > tol::kConstruction) {
    throw DomainError("apply_pure: input vector must have unit norm");
  }
  return output_state(phi.image_matrix(u));
}

RandomChannel conjugate_channel(const RandomChannel& phi) {
  return RandomChannel(phi.k(), phi.d(),
                       SubspaceBasis(phi.isometry().columns().conjugate()));
}

double product_output_cost(const RandomChannel& phi) {
  const double k = static_cast<double>(phi.k());
  const double d = static_cast<double>(phi.d());
  const double m = static_cast<double>(phi.m());
  return m * m * (k * k * d + k * k * k * k);
}

DensityMatrix product_output_on_entangled(const RandomChannel& phi, double budget) {
  const double cost = product_output_cost(phi);
  if (cost > budget) {
    std::ostringstream os;
    os << "product_output_on_entangled: estimated " << cost
       << " scalar operations exceed the budget " << budget << " (k=" << phi.k()
       << " d=" << phi.d() << " m=" << phi.m() << ")";
    throw BudgetError(os.str());
  }
  const auto k = phi.k();
  const auto m = phi.m();
  std::vector<CMatrix> avatars;
  avatars.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index l = 0; l < m; ++l) avatars.push_back(phi.column_matrix(l));

  // Phi(E_ij) = M_i M_j^dagger.
  CMatrix out = CMatrix::Zero(k * k, k * k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const CMatrix block = avatars[i] * avatars[j].adjoint();
      out += kronecker(block, block.conjugate());
    }
  }
  out /= static_cast<double>(m);
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

double entangled_overlap(const DensityMatrix& product_output) {
  const auto kk = product_output.dim();
  const auto k = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(kk))));
  if (k * k != kk) throw DomainError("entangled_overlap: dimension is not a square");
  const CVector chi = maximally_entangled(k);
  return (chi.adjoint() * product_output.matrix() * chi)(0, 0).real();
}

double entangled_overlap(const RandomChannel& phi, double budget) {
  return entangled_overlap(product_output_on_entangled(phi, budget));
}

}  // namespace chanlab

namespace chanlab {

double entangled_overlap_from_isometry(const RandomChannel& phi) {
  const auto k = phi.k();
  const auto d = phi.d();
  const CMatrix& v = phi.isometry().columns();
  // sum_ij ||M_i M_j^+||^2 = ||sum_a Y_a Y_a^+||^2 with Y_a the a-th block of d rows
  CMatrix acc = CMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto block = v.middleRows(a * d, d);
    acc.noalias() += block * block.adjoint();
  }
  return acc.squaredNorm() / static_cast<double>(k * phi.m());
}

}  // namespace chanlab
