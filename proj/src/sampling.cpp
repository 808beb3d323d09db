#include "chanlab/sampling.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "chanlab/errors.hpp"

namespace chanlab {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  const std::array<std::uint32_t, 5> words{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream_id),
      static_cast<std::uint32_t>(stream_id >> 32), 0x6a09e667u};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

Complex RngStream::complex_normal() {
  static const double kScale = 1.0 / std::sqrt(2.0);
  const double re = normal();
  const double im = normal();
  return {kScale * re, kScale * im};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CMatrix ginibre(Eigen::Index k, Eigen::Index d, RngStream& stream) {
  if (k < 1 || d < 1) throw DomainError("ginibre: dimensions must be >= 1");
  CMatrix g(k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = stream.complex_normal();
  }
  return g;
}

CVector haar_unit_vector(Eigen::Index n, RngStream& stream) {
  if (n < 1) throw DomainError("haar_unit_vector: n must be >= 1");
  CVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = stream.complex_normal();
  // A zero Gaussian vector has probability zero; the loop only guards it.
  double norm = x.norm();
  while (norm == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) x(i) = stream.complex_normal();
    norm = x.norm();
  }
  return x / norm;
}

SubspaceBasis haar_isometry(Eigen::Index n, Eigen::Index m, RngStream& stream) {
  if (m < 1 || n < 1 || m > n) {
    std::ostringstream os;
    os << "haar_isometry: need 1 <= m <= n, got n=" << n << " m=" << m;
    throw DomainError(os.str());
  }
  const CMatrix g = ginibre(n, m, stream);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, m);
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex rjj = r(j, j);
    const double mod = std::abs(rjj);
    if (mod > 0.0) q.col(j) *= rjj / mod;
  }
  return SubspaceBasis(std::move(q));
}

CMatrix uniform_hs_sphere(Eigen::Index k, Eigen::Index d, RngStream& stream) {
  CMatrix g = ginibre(k, d, stream);
  return g / g.norm();
}

CVector uniform_sphere_in_subspace(const SubspaceBasis& w, RngStream& stream) {
  const CVector u = haar_unit_vector(w.subspace_dim(), stream);
  CVector x = w.embed(u);
  return x / x.norm();
}

}  // namespace chanlab
