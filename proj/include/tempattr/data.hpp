#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tempattr/errors.hpp"

namespace tempattr {

using RowMajorMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EpochView = Eigen::Map<const RowMajorMatrixXd>;

struct TrialMeta {
  std::string stimulus_id;
  std::string subject_id;
  std::uint32_t repetition = 0;

  bool operator==(const TrialMeta&) const = default;
};

/// Unique per-trial identifier: "<stimulus>|<subject>|<repetition>".
std::string trial_uid(const TrialMeta& meta);

/// n trials x C channels x T timepoints, trial-major then channel-major then
/// time. Immutable after construction; all samples validated finite.
class EpochSet {
 public:
  EpochSet(Eigen::Index n_channels, Eigen::Index n_timepoints,
           double sample_rate_hz, std::vector<double> data,
           std::vector<TrialMeta> meta);

  Eigen::Index n_trials() const { return static_cast<Eigen::Index>(meta_.size()); }
  Eigen::Index n_channels() const { return n_channels_; }
  Eigen::Index n_timepoints() const { return n_timepoints_; }
  double sample_rate_hz() const { return sample_rate_hz_; }

  const std::vector<double>& data() const { return data_; }
  const std::vector<TrialMeta>& meta() const { return meta_; }

  EpochView epoch(Eigen::Index trial) const;

  /// New set keeping only the listed trials, in the listed order.
  EpochSet subset(const std::vector<Eigen::Index>& trials) const;

  EpochSet select_channels(const std::vector<Eigen::Index>& channels) const;
  EpochSet crop_time(Eigen::Index t_begin, Eigen::Index t_end) const;

 private:
  Eigen::Index n_channels_;
  Eigen::Index n_timepoints_;
  double sample_rate_hz_;
  std::vector<double> data_;
  std::vector<TrialMeta> meta_;
};

/// Arithmetic mean over each (stimulus_id, subject_id) group; one output
/// trial per group in first-appearance order, repetition reset to 0.
EpochSet average_repetitions(const EpochSet& epochs);

enum class EmbeddingKind : std::uint8_t { Signal = 0, Concept = 1 };

/// n_rows x dim real matrix with unique row ids. Houses both signal
/// embeddings and concept embeddings.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(EmbeddingKind kind, Eigen::Index dim, std::vector<double> data,
                  std::vector<std::string> row_ids);

  EmbeddingKind kind() const { return kind_; }
  Eigen::Index n_rows() const { return static_cast<Eigen::Index>(row_ids_.size()); }
  Eigen::Index dim() const { return dim_; }

  const std::vector<double>& data() const { return data_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }

  Eigen::Map<const Eigen::VectorXd> row(Eigen::Index i) const;
  Eigen::Map<const RowMajorMatrixXd> as_matrix() const;

  /// Row index for an id, or nullopt.
  std::optional<Eigen::Index> find_row(const std::string& row_id) const;

 private:
  EmbeddingKind kind_;
  Eigen::Index dim_;
  std::vector<double> data_;
  std::vector<std::string> row_ids_;
};

/// Ordered, unique, non-empty human-readable labels for concept dimensions.
struct ConceptNames {
  std::vector<std::string> names;

  explicit ConceptNames(std::vector<std::string> n);
  Eigen::Index size() const { return static_cast<Eigen::Index>(names.size()); }
};

/// Expands a per-stimulus concept matrix to one row per trial, aligned with
/// `epochs` and labeled by trial uid. Throws RowMismatch when a trial's
/// stimulus id has no concept row.
EmbeddingMatrix expand_to_trials(const EmbeddingMatrix& per_stimulus,
                                 const EpochSet& epochs);

}  // namespace tempattr
