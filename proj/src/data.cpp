#include "tempattr/data.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace tempattr {

namespace {

void require_all_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite sample");
    }
  }
}

}  // namespace

std::string trial_uid(const TrialMeta& meta) {
  return meta.stimulus_id + "|" + meta.subject_id + "|" +
         std::to_string(meta.repetition);
}

EpochSet::EpochSet(Eigen::Index n_channels, Eigen::Index n_timepoints,
                   double sample_rate_hz, std::vector<double> data,
                   std::vector<TrialMeta> meta)
    : n_channels_(n_channels),
      n_timepoints_(n_timepoints),
      sample_rate_hz_(sample_rate_hz),
      data_(std::move(data)),
      meta_(std::move(meta)) {
  if (n_channels_ < 1 || n_timepoints_ < 1) {
    throw Error(ErrorCode::InvalidSpec, "EpochSet: dims must be >= 1");
  }
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw Error(ErrorCode::InvalidSpec, "EpochSet: sample_rate_hz must be > 0");
  }
  const std::size_t expected =
      meta_.size() * static_cast<std::size_t>(n_channels_) *
      static_cast<std::size_t>(n_timepoints_);
  if (data_.size() != expected) {
    throw Error(ErrorCode::DimMismatch,
                "EpochSet: data has " + std::to_string(data_.size()) +
                    " samples, expected " + std::to_string(expected));
  }
  require_all_finite(data_, "EpochSet");
}

EpochView EpochSet::epoch(Eigen::Index trial) const {
  if (trial < 0 || trial >= n_trials()) {
    throw Error(ErrorCode::OutOfRange,
                "EpochSet: trial " + std::to_string(trial) + " out of range");
  }
  const std::size_t stride =
      static_cast<std::size_t>(n_channels_) * n_timepoints_;
  return EpochView(data_.data() + stride * trial, n_channels_, n_timepoints_);
}

EpochSet EpochSet::subset(const std::vector<Eigen::Index>& trials) const {
  const std::size_t stride =
      static_cast<std::size_t>(n_channels_) * n_timepoints_;
  std::vector<double> data;
  data.reserve(trials.size() * stride);
  std::vector<TrialMeta> meta;
  meta.reserve(trials.size());
  for (Eigen::Index t : trials) {
    if (t < 0 || t >= n_trials()) {
      throw Error(ErrorCode::OutOfRange, "EpochSet::subset: trial out of range");
    }
    data.insert(data.end(), data_.begin() + stride * t,
                data_.begin() + stride * (t + 1));
    meta.push_back(meta_[t]);
  }
  return EpochSet(n_channels_, n_timepoints_, sample_rate_hz_, std::move(data),
                  std::move(meta));
}

EpochSet EpochSet::select_channels(
    const std::vector<Eigen::Index>& channels) const {
  if (channels.empty()) {
    throw Error(ErrorCode::EmptyInput, "select_channels: no channels given");
  }
  std::vector<double> data;
  data.reserve(meta_.size() * channels.size() * n_timepoints_);
  for (Eigen::Index t = 0; t < n_trials(); ++t) {
    const EpochView e = epoch(t);
    for (Eigen::Index c : channels) {
      if (c < 0 || c >= n_channels_) {
        throw Error(ErrorCode::OutOfRange, "select_channels: channel out of range");
      }
      for (Eigen::Index k = 0; k < n_timepoints_; ++k) data.push_back(e(c, k));
    }
  }
  return EpochSet(static_cast<Eigen::Index>(channels.size()), n_timepoints_,
                  sample_rate_hz_, std::move(data), meta_);
}

EpochSet EpochSet::crop_time(Eigen::Index t_begin, Eigen::Index t_end) const {
  if (t_begin < 0 || t_end > n_timepoints_ || t_begin >= t_end) {
    throw Error(ErrorCode::OutOfRange, "crop_time: bad interval");
  }
  const Eigen::Index len = t_end - t_begin;
  std::vector<double> data;
  data.reserve(meta_.size() * n_channels_ * len);
  for (Eigen::Index t = 0; t < n_trials(); ++t) {
    const EpochView e = epoch(t);
    for (Eigen::Index c = 0; c < n_channels_; ++c) {
      for (Eigen::Index k = t_begin; k < t_end; ++k) data.push_back(e(c, k));
    }
  }
  return EpochSet(n_channels_, len, sample_rate_hz_, std::move(data), meta_);
}

EpochSet average_repetitions(const EpochSet& epochs) {
  if (epochs.n_trials() == 0) {
    throw Error(ErrorCode::EmptyInput, "average_repetitions: empty epoch set");
  }
  const std::size_t stride = static_cast<std::size_t>(epochs.n_channels()) *
                             epochs.n_timepoints();

  // group key -> output slot, groups in first-appearance order
  std::unordered_map<std::string, std::size_t> slot_of;
  std::vector<std::vector<double>> sums;
  std::vector<std::size_t> counts;
  std::vector<TrialMeta> out_meta;

  for (Eigen::Index t = 0; t < epochs.n_trials(); ++t) {
    const TrialMeta& m = epochs.meta()[t];
    const std::string key = m.stimulus_id + "\x1f" + m.subject_id;
    auto it = slot_of.find(key);
    std::size_t slot;
    if (it == slot_of.end()) {
      slot = sums.size();
      slot_of.emplace(key, slot);
      sums.emplace_back(stride, 0.0);
      counts.push_back(0);
      out_meta.push_back(TrialMeta{m.stimulus_id, m.subject_id, 0});
    } else {
      slot = it->second;
    }
    const double* src = epochs.data().data() + stride * t;
    double* dst = sums[slot].data();
    for (std::size_t i = 0; i < stride; ++i) dst[i] += src[i];
    counts[slot]++;
  }

  std::vector<double> data;
  data.reserve(sums.size() * stride);
  for (std::size_t g = 0; g < sums.size(); ++g) {
    const double inv = 1.0 / static_cast<double>(counts[g]);
    for (std::size_t i = 0; i < stride; ++i) data.push_back(sums[g][i] * inv);
  }
  return EpochSet(epochs.n_channels(), epochs.n_timepoints(),
                  epochs.sample_rate_hz(), std::move(data), std::move(out_meta));
}

EmbeddingMatrix::EmbeddingMatrix(EmbeddingKind kind, Eigen::Index dim,
                                 std::vector<double> data,
                                 std::vector<std::string> row_ids)
    : kind_(kind), dim_(dim), data_(std::move(data)), row_ids_(std::move(row_ids)) {
  if (dim_ < 1) {
    throw Error(ErrorCode::InvalidSpec, "EmbeddingMatrix: dim must be >= 1");
  }
  if (data_.size() != row_ids_.size() * static_cast<std::size_t>(dim_)) {
    throw Error(ErrorCode::DimMismatch,
                "EmbeddingMatrix: data size does not match rows x dim");
  }
  require_all_finite(data_, "EmbeddingMatrix");
  std::unordered_set<std::string> seen;
  for (const auto& id : row_ids_) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::MetaMismatch,
                  "EmbeddingMatrix: duplicate row id '" + id + "'");
    }
  }
}

Eigen::Map<const Eigen::VectorXd> EmbeddingMatrix::row(Eigen::Index i) const {
  if (i < 0 || i >= n_rows()) {
    throw Error(ErrorCode::OutOfRange, "EmbeddingMatrix: row out of range");
  }
  return Eigen::Map<const Eigen::VectorXd>(data_.data() + i * dim_, dim_);
}

Eigen::Map<const RowMajorMatrixXd> EmbeddingMatrix::as_matrix() const {
  return Eigen::Map<const RowMajorMatrixXd>(data_.data(), n_rows(), dim_);
}

std::optional<Eigen::Index> EmbeddingMatrix::find_row(
    const std::string& row_id) const {
  for (std::size_t i = 0; i < row_ids_.size(); ++i) {
    if (row_ids_[i] == row_id) return static_cast<Eigen::Index>(i);
  }
  return std::nullopt;
}

ConceptNames::ConceptNames(std::vector<std::string> n) : names(std::move(n)) {
  if (names.empty()) {
    throw Error(ErrorCode::EmptyInput, "ConceptNames: empty");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) {
      throw Error(ErrorCode::InvalidSpec, "ConceptNames: empty label");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::InvalidSpec,
                  "ConceptNames: duplicate label '" + name + "'");
    }
  }
}

EmbeddingMatrix expand_to_trials(const EmbeddingMatrix& per_stimulus,
                                 const EpochSet& epochs) {
  std::unordered_map<std::string, Eigen::Index> row_of;
  for (Eigen::Index i = 0; i < per_stimulus.n_rows(); ++i) {
    row_of.emplace(per_stimulus.row_ids()[i], i);
  }
  const Eigen::Index dim = per_stimulus.dim();
  std::vector<double> data;
  data.reserve(epochs.n_trials() * dim);
  std::vector<std::string> ids;
  ids.reserve(epochs.n_trials());
  for (const TrialMeta& m : epochs.meta()) {
    auto it = row_of.find(m.stimulus_id);
    if (it == row_of.end()) {
      throw Error(ErrorCode::RowMismatch,
                  "expand_to_trials: no concept row for stimulus '" +
                      m.stimulus_id + "'");
    }
    const double* src = per_stimulus.data().data() + it->second * dim;
    data.insert(data.end(), src, src + dim);
    ids.push_back(trial_uid(m));
  }
  return EmbeddingMatrix(per_stimulus.kind(), dim, std::move(data),
                         std::move(ids));
}

}  // namespace tempattr
