#include "tempattr/encoders.hpp"

#include <cmath>

#include "tempattr/numeric.hpp"

namespace tempattr {

std::string mask_key(Eigen::Index start, Eigen::Index len) {
  return std::to_string(start) + "_" + std::to_string(len);
}

EncoderSpec EncoderSpec::flatten_projection(Eigen::Index out_dim,
                                            std::uint64_t seed,
                                            Eigen::Index n_channels,
                                            Eigen::Index n_timepoints) {
  if (out_dim < 1 || n_channels < 1 || n_timepoints < 1) {
    throw Error(ErrorCode::InvalidSpec,
                "flatten_projection: dims must be >= 1");
  }
  EncoderSpec spec;
  spec.kind_ = EncoderKind::FlattenProjection;
  spec.out_dim_ = out_dim;
  spec.n_channels_ = n_channels;
  spec.n_timepoints_ = n_timepoints;
  spec.seed_ = seed;

  const Eigen::Index flat = n_channels * n_timepoints;
  const double scale = 1.0 / std::sqrt(static_cast<double>(flat));
  auto proj = std::make_shared<RowMajorMatrixXd>(out_dim, flat);
  Rng rng(seed);
  for (Eigen::Index r = 0; r < out_dim; ++r) {
    for (Eigen::Index c = 0; c < flat; ++c) {
      (*proj)(r, c) = rng.next_gaussian() * scale;
    }
  }
  spec.projection_ = std::move(proj);
  return spec;
}

EncoderSpec EncoderSpec::window_mean(Eigen::Index window_len,
                                     Eigen::Index n_channels,
                                     Eigen::Index n_timepoints) {
  if (window_len < 1 || n_channels < 1 || n_timepoints < 1) {
    throw Error(ErrorCode::InvalidSpec, "window_mean: dims must be >= 1");
  }
  EncoderSpec spec;
  spec.kind_ = EncoderKind::WindowMean;
  spec.n_channels_ = n_channels;
  spec.n_timepoints_ = n_timepoints;
  spec.window_len_ = window_len;
  const Eigen::Index n_windows = (n_timepoints + window_len - 1) / window_len;
  spec.out_dim_ = n_channels * n_windows;
  return spec;
}

EncoderSpec EncoderSpec::precomputed(
    std::map<std::string, EmbeddingMatrix> table) {
  if (table.empty()) {
    throw Error(ErrorCode::EmptyInput, "precomputed: empty table");
  }
  EncoderSpec spec;
  spec.kind_ = EncoderKind::Precomputed;
  const Eigen::Index dim = table.begin()->second.dim();
  auto index = std::make_shared<std::unordered_map<std::string, Eigen::Index>>();
  for (const auto& [key, matrix] : table) {
    if (matrix.dim() != dim) {
      throw Error(ErrorCode::DimMismatch,
                  "precomputed: inconsistent embedding dims across mask keys");
    }
    for (Eigen::Index i = 0; i < matrix.n_rows(); ++i) {
      index->emplace(key + "\x1f" + matrix.row_ids()[i], i);
    }
  }
  spec.out_dim_ = dim;
  spec.table_ = std::make_shared<const std::map<std::string, EmbeddingMatrix>>(
      std::move(table));
  spec.row_index_ = std::move(index);
  return spec;
}

const RowMajorMatrixXd& EncoderSpec::projection() const {
  if (!projection_) {
    throw Error(ErrorCode::InvalidSpec, "encoder has no projection matrix");
  }
  return *projection_;
}

const std::map<std::string, EmbeddingMatrix>& EncoderSpec::table() const {
  if (!table_) {
    throw Error(ErrorCode::InvalidSpec, "encoder has no precomputed table");
  }
  return *table_;
}

Eigen::Index EncoderSpec::table_row(const std::string& mask_key,
                                    const std::string& trial_id) const {
  auto it = row_index_->find(mask_key + "\x1f" + trial_id);
  if (it == row_index_->end()) {
    throw Error(ErrorCode::MissingPrecomputedRow,
                "precomputed: no row for trial '" + trial_id +
                    "' under mask '" + mask_key + "'");
  }
  return it->second;
}

Eigen::VectorXd encode(const EncoderSpec& spec, EpochView epoch,
                       const EncodeKey& key) {
  switch (spec.kind()) {
    case EncoderKind::FlattenProjection: {
      if (epoch.rows() != spec.n_channels() ||
          epoch.cols() != spec.n_timepoints()) {
        throw Error(ErrorCode::DimMismatch, "encode: epoch dims do not match encoder");
      }
      Eigen::Map<const Eigen::VectorXd> flat(epoch.data(),
                                             epoch.rows() * epoch.cols());
      return spec.projection() * flat;
    }
    case EncoderKind::WindowMean: {
      if (epoch.rows() != spec.n_channels() ||
          epoch.cols() != spec.n_timepoints()) {
        throw Error(ErrorCode::DimMismatch, "encode: epoch dims do not match encoder");
      }
      const Eigen::Index wl = spec.window_len();
      const Eigen::Index T = spec.n_timepoints();
      const Eigen::Index n_windows = (T + wl - 1) / wl;
      Eigen::VectorXd out(spec.out_dim());
      Eigen::Index k = 0;
      for (Eigen::Index c = 0; c < epoch.rows(); ++c) {
        for (Eigen::Index w = 0; w < n_windows; ++w) {
          const Eigen::Index begin = w * wl;
          const Eigen::Index len = std::min(wl, T - begin);
          double sum = 0.0;
          for (Eigen::Index t = begin; t < begin + len; ++t) sum += epoch(c, t);
          out[k++] = sum / static_cast<double>(len);
        }
      }
      return out;
    }
    case EncoderKind::Precomputed: {
      const Eigen::Index row = spec.table_row(key.mask_key, key.trial_id);
      const EmbeddingMatrix& m = spec.table().at(key.mask_key);
      return m.row(row);
    }
  }
  throw Error(ErrorCode::InvalidSpec, "encode: unknown encoder kind");
}

EmbeddingMatrix encode_batch(const EncoderSpec& spec, const EpochSet& epochs) {
  std::vector<double> data;
  data.reserve(epochs.n_trials() * spec.out_dim());
  std::vector<std::string> ids;
  ids.reserve(epochs.n_trials());
  for (Eigen::Index t = 0; t < epochs.n_trials(); ++t) {
    const std::string uid = trial_uid(epochs.meta()[t]);
    const Eigen::VectorXd e = encode(spec, epochs.epoch(t), EncodeKey{uid});
    data.insert(data.end(), e.data(), e.data() + e.size());
    ids.push_back(uid);
  }
  return EmbeddingMatrix(EmbeddingKind::Signal, spec.out_dim(), std::move(data),
                         std::move(ids));
}

}  // namespace tempattr
