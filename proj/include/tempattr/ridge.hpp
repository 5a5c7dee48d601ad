#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "tempattr/data.hpp"

namespace tempattr {

/// Fitted affine map: prediction = weights * embedding + bias.
struct RidgeModel {
  Eigen::MatrixXd weights;        // F_c x F_e
  Eigen::VectorXd bias;           // F_c
  double lambda = 0.0;
  Eigen::VectorXd feature_means;  // F_e
  Eigen::VectorXd target_means;   // F_c

  Eigen::Index out_dim() const { return weights.rows(); }
  Eigen::Index in_dim() const { return weights.cols(); }
};

struct RidgeOptions {
  /// Standardize feature columns (unit variance) before fitting; the scaling
  /// is folded back into weights/bias so the stored model stays plain affine.
  bool zscore_features = false;
};

/// Minimizes (1/n) sum_i ||y_i - (W x_i + b)||^2 + lambda ||W||^2.
/// The bias is unpenalized (handled by centering), so the normal equations
/// carry n*lambda: (Xc' Xc + n lambda I) W' = Xc' Yc, b = ymean - W xmean.
RidgeModel ridge_fit(const EmbeddingMatrix& x, const EmbeddingMatrix& y,
                     double lambda, const RidgeOptions& options = {});

Eigen::VectorXd ridge_predict(const RidgeModel& model,
                              Eigen::Ref<const Eigen::VectorXd> embedding);

/// One prediction row per input row.
RowMajorMatrixXd ridge_predict_batch(const RidgeModel& model,
                                     const EmbeddingMatrix& x);

struct RidgeScore {
  /// Pearson between predicted and true values per concept dimension across
  /// trials; nullopt marks dimensions skipped for zero variance.
  std::vector<std::optional<double>> per_dim;
  double mean_pearson = 0.0;
};

RidgeScore ridge_score(const RidgeModel& model, const EmbeddingMatrix& x,
                       const EmbeddingMatrix& y);

}  // namespace tempattr
