#include "tempattr/ridge.hpp"

#include <cmath>

#include "tempattr/numeric.hpp"

namespace tempattr {

RidgeModel ridge_fit(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                     double lambda, const RidgeOptions& options) {
  if (x.n_rows() != y.n_rows()) {
    throw Error(ErrorCode::RowMismatch,
                "ridge_fit: X has " + std::to_string(x.n_rows()) +
                    " rows, Y has " + std::to_string(y.n_rows()));
  }
  for (Eigen::Index i = 0; i < x.n_rows(); ++i) {
    if (x.row_ids()[i] != y.row_ids()[i]) {
      throw Error(ErrorCode::RowMismatch,
                  "ridge_fit: row ids diverge at index " + std::to_string(i));
    }
  }
  const Eigen::Index n = x.n_rows();
  if (n < 2) {
    throw Error(ErrorCode::EmptyInput, "ridge_fit: need at least 2 rows");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidSpec, "ridge_fit: lambda must be >= 0");
  }

  const auto X = x.as_matrix();
  const auto Y = y.as_matrix();
  const Eigen::Index fe = x.dim();

  const Eigen::VectorXd x_mean = X.colwise().mean();
  const Eigen::VectorXd y_mean = Y.colwise().mean();
  Eigen::MatrixXd xc = X.rowwise() - x_mean.transpose();
  Eigen::MatrixXd yc = Y.rowwise() - y_mean.transpose();

  Eigen::VectorXd scale = Eigen::VectorXd::Ones(fe);
  if (options.zscore_features) {
    for (Eigen::Index j = 0; j < fe; ++j) {
      const double sd = std::sqrt(xc.col(j).squaredNorm() / n);
      if (sd > 0.0) {
        scale[j] = sd;
        xc.col(j) /= sd;
      }
    }
  }

  Eigen::MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += static_cast<double>(n) * lambda;
  const SymMatrix a = SymMatrix::from_dense_upper(gram);
  const Eigen::MatrixXd wt = spd_solve(a, xc.transpose() * yc);  // F_e x F_c

  RidgeModel model;
  model.weights = wt.transpose();
  if (options.zscore_features) {
    for (Eigen::Index j = 0; j < fe; ++j) model.weights.col(j) /= scale[j];
  }
  model.bias = y_mean - model.weights * x_mean;
  model.lambda = lambda;
  model.feature_means = x_mean;
  model.target_means = y_mean;
  return model;
}

Eigen::VectorXd ridge_predict(const RidgeModel& model,
                              Eigen::Ref<const Eigen::VectorXd> embedding) {
  if (embedding.size() != model.in_dim()) {
    throw Error(ErrorCode::DimMismatch,
                "ridge_predict: embedding has " +
                    std::to_string(embedding.size()) + " dims, model expects " +
                    std::to_string(model.in_dim()));
  }
  return model.weights * embedding + model.bias;
}

RowMajorMatrixXd ridge_predict_batch(const RidgeModel& model,
                                     const EmbeddingMatrix& x) {
  if (x.dim() != model.in_dim()) {
    throw Error(ErrorCode::DimMismatch, "ridge_predict_batch: dim mismatch");
  }
  RowMajorMatrixXd out(x.n_rows(), model.out_dim());
  for (Eigen::Index i = 0; i < x.n_rows(); ++i) {
    out.row(i) = (model.weights * x.row(i) + model.bias).transpose();
  }
  return out;
}

RidgeScore ridge_score(const RidgeModel& model, const EmbeddingMatrix& x,
                       const EmbeddingMatrix& y) {
  if (x.n_rows() != y.n_rows()) {
    throw Error(ErrorCode::RowMismatch, "ridge_score: row count mismatch");
  }
  for (Eigen::Index i = 0; i < x.n_rows(); ++i) {
    if (x.row_ids()[i] != y.row_ids()[i]) {
      throw Error(ErrorCode::RowMismatch,
                  "ridge_score: row ids diverge at index " + std::to_string(i));
    }
  }
  if (x.n_rows() < 3) {
    throw Error(ErrorCode::EmptyInput, "ridge_score: need at least 3 rows");
  }
  const RowMajorMatrixXd pred = ridge_predict_batch(model, x);
  const auto truth = y.as_matrix();

  RidgeScore score;
  score.per_dim.resize(y.dim());
  double sum = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index j = 0; j < y.dim(); ++j) {
    try {
      const double r = pearson(pred.col(j), truth.col(j));
      score.per_dim[j] = r;
      sum += r;
      ++used;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroVariance) throw;
      score.per_dim[j] = std::nullopt;
    }
  }
  if (used == 0) {
    throw Error(ErrorCode::ZeroVariance,
                "ridge_score: every dimension degenerate");
  }
  score.mean_pearson = sum / static_cast<double>(used);
  return score;
}

}  // namespace tempattr
