#pragma once

// Seeded randomness. Every draw in the library goes through an RngStream
// identified by (seed, stream_id); equal identifiers give bit-identical
// sequences, so Monte Carlo loops key their streams on the trial index and
// results do not depend on how trials are scheduled.

#include <cstdint>
#include <random>

#include "chanlab/matrix_core.hpp"

namespace chanlab {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Standard real normal N(0, 1).
  double normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  /// Standard complex normal: independent real and imaginary parts of
  /// variance 1/2, so E|g|^2 = 1.
  Complex complex_normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Derive a child seed from a parent seed and a salt, for nested experiments
/// that need a fresh family of streams (e.g. the optimizer starts inside the
/// s-th subspace trial).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

/// k x d matrix of i.i.d. standard complex Gaussians (filled row by row).
CMatrix ginibre(Eigen::Index k, Eigen::Index d, RngStream& stream);

/// Uniform point on the unit sphere of C^n.
CVector haar_unit_vector(Eigen::Index n, RngStream& stream);

/// Haar-distributed isometry C^m -> C^n: Householder QR of an n x m Ginibre
/// matrix, columns rephased so that diag(R) is real positive.
SubspaceBasis haar_isometry(Eigen::Index n, Eigen::Index m, RngStream& stream);

/// Uniform point on the Hilbert-Schmidt sphere of k x d matrices.
CMatrix uniform_hs_sphere(Eigen::Index k, Eigen::Index d, RngStream& stream);

/// Uniform point on the unit sphere of range(W), as a vector of C^n.
CVector uniform_sphere_in_subspace(const SubspaceBasis& w, RngStream& stream);

}  // namespace chanlab
