#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tempattr/errors.hpp"

namespace tempattr {

/// Pearson correlation, population form, clamped to [-1, 1].
/// Requires len(x) == len(y) >= 2 and nonzero variance on both sides.
double pearson(Eigen::Ref<const Eigen::VectorXd> x,
               Eigen::Ref<const Eigen::VectorXd> y);

/// Symmetric matrix with the upper triangle stored once (row-major packing),
/// so entries(i,j) == entries(j,i) holds exactly by construction.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::Index order);

  /// Copies the upper triangle of `m` (entries below the diagonal are ignored).
  static SymMatrix from_dense_upper(const Eigen::MatrixXd& m);

  Eigen::Index order() const { return order_; }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    return tri_[pack_index(i, j)];
  }
  void set(Eigen::Index i, Eigen::Index j, double value);

  Eigen::MatrixXd dense() const;

  const std::vector<double>& packed() const { return tri_; }

 private:
  std::size_t pack_index(Eigen::Index i, Eigen::Index j) const;

  Eigen::Index order_;
  std::vector<double> tri_;
};

/// Solves A * X = B for symmetric positive definite A (Cholesky).
/// Throws NotPositiveDefinite when the factorization fails; for ridge systems
/// this signals that lambda is too small for rank-deficient features.
Eigen::MatrixXd spd_solve(const SymMatrix& a, const Eigen::MatrixXd& b);

/// splitmix64 PRNG with Box-Muller gaussians. The stream is a pure function
/// of the seed, so seeded datasets are byte-identical across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double next_unit();

  /// Standard normal variate.
  double next_gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tempattr
