#include "tempattr/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace tempattr {

namespace {

void require_finite(Eigen::Ref<const Eigen::VectorXd> v, const char* name) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(name) + " contains NaN/Inf");
  }
}

}  // namespace

double pearson(Eigen::Ref<const Eigen::VectorXd> x,
               Eigen::Ref<const Eigen::VectorXd> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "pearson: len(x)=" + std::to_string(x.size()) +
                    " len(y)=" + std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::LengthMismatch, "pearson: need at least 2 samples");
  }
  require_finite(x, "x");
  require_finite(y, "y");
  if (x.maxCoeff() == x.minCoeff()) {
    throw Error(ErrorCode::ZeroVariance, "pearson: x is constant");
  }
  if (y.maxCoeff() == y.minCoeff()) {
    throw Error(ErrorCode::ZeroVariance, "pearson: y is constant");
  }

  // scalar left-to-right accumulation keeps the result independent of the
  // operand's memory alignment (Eigen's reductions are not)
  double sx = 0.0, sy = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(x.size());
  const double my = sy / static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::ZeroVariance, "pearson: degenerate variance");
  }
  // One sqrt keeps r at exactly +-1 for perfectly correlated inputs; the
  // split form guards the product against overflow or underflow.
  double denom = std::sqrt(sxx * syy);
  if (!std::isfinite(denom) || denom == 0.0) {
    denom = std::sqrt(sxx) * std::sqrt(syy);
  }
  const double r = sxy / denom;
  return std::clamp(r, -1.0, 1.0);
}

SymMatrix::SymMatrix(Eigen::Index order) : order_(order) {
  if (order < 1) {
    throw Error(ErrorCode::InvalidSpec, "SymMatrix: order must be >= 1");
  }
  tri_.assign(static_cast<std::size_t>(order) * (order + 1) / 2, 0.0);
}

SymMatrix SymMatrix::from_dense_upper(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimMismatch, "SymMatrix: matrix not square");
  }
  SymMatrix s(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      s.set(i, j, m(i, j));
    }
  }
  return s;
}

std::size_t SymMatrix::pack_index(Eigen::Index i, Eigen::Index j) const {
  if (i < 0 || j < 0 || i >= order_ || j >= order_) {
    throw Error(ErrorCode::OutOfRange, "SymMatrix: index out of range");
  }
  if (i > j) std::swap(i, j);
  // row-major packed upper triangle
  return static_cast<std::size_t>(i) * order_ -
         static_cast<std::size_t>(i) * (i - 1) / 2 - i + j;
}

void SymMatrix::set(Eigen::Index i, Eigen::Index j, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFinite, "SymMatrix: non-finite entry");
  }
  tri_[pack_index(i, j)] = value;
}

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd m(order_, order_);
  for (Eigen::Index i = 0; i < order_; ++i) {
    for (Eigen::Index j = i; j < order_; ++j) {
      const double v = (*this)(i, j);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

Eigen::MatrixXd spd_solve(const SymMatrix& a, const Eigen::MatrixXd& b) {
  if (b.rows() != a.order()) {
    throw Error(ErrorCode::DimMismatch,
                "spd_solve: B has " + std::to_string(b.rows()) +
                    " rows, expected " + std::to_string(a.order()));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "spd_solve: Cholesky failed (matrix not positive definite; "
                "for ridge systems, raise lambda)");
  }
  return llt.solve(b);
}

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 in (0,1] keeps log() finite
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace tempattr
