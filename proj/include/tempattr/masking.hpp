#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempattr/data.hpp"
#include "tempattr/encoders.hpp"
#include "tempattr/ridge.hpp"

namespace tempattr {

enum class MaskValue { Zero, ChannelMean };

/// Contiguous temporal mask configuration: every start t satisfies
/// 0 <= t and t + length <= T; starts strictly increasing.
struct MaskSpec {
  Eigen::Index length = 50;
  std::vector<Eigen::Index> starts;

  MaskSpec(Eigen::Index len, std::vector<Eigen::Index> start_list);

  /// length 50, starts 0..200 inclusive (201 positions).
  static MaskSpec default_sweep();

  void validate_for(Eigen::Index n_timepoints) const;
};

/// Copy of `epoch` with samples in [start, start+len) replaced in all
/// channels: by 0 (default) or by the channel's mean over the full epoch.
RowMajorMatrixXd mask_epoch(EpochView epoch, Eigen::Index start,
                            Eigen::Index len,
                            MaskValue mask_value = MaskValue::Zero);

enum class MetricKind : std::uint8_t {
  M1MaskedVsTruePearson = 0,
  M2DeltaPredTruePearson = 1,
  M3DeltaActivation = 2,
};

const char* metric_name(MetricKind metric);

/// Metric values indexed by (trial or concept) row x mask start. Cells can be
/// explicitly missing (degenerate correlations); missing cells carry value 0
/// and present == 0.
class AttributionGrid {
 public:
  AttributionGrid(MetricKind metric, std::vector<std::string> row_ids,
                  std::vector<Eigen::Index> starts, Eigen::Index mask_length,
                  RowMajorMatrixXd values, std::vector<std::uint8_t> present,
                  int concept_index = -1);

  MetricKind metric() const { return metric_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }
  const std::vector<Eigen::Index>& starts() const { return starts_; }
  Eigen::Index mask_length() const { return mask_length_; }
  int concept_index() const { return concept_index_; }

  Eigen::Index n_rows() const { return values_.rows(); }
  Eigen::Index n_cols() const { return values_.cols(); }

  const RowMajorMatrixXd& values() const { return values_; }
  const std::vector<std::uint8_t>& present() const { return present_; }

  bool is_present(Eigen::Index row, Eigen::Index col) const {
    return present_[static_cast<std::size_t>(row) * values_.cols() + col] != 0;
  }
  bool all_present() const;

 private:
  MetricKind metric_;
  std::vector<std::string> row_ids_;
  std::vector<Eigen::Index> starts_;
  Eigen::Index mask_length_;
  int concept_index_;
  RowMajorMatrixXd values_;
  std::vector<std::uint8_t> present_;
};

/// Which embedding anchors the correlation: the true concept row (default)
/// or the unmasked prediction.
enum class Reference { TrueConcepts, Predicted };

struct SweepOptions {
  MaskValue mask_value = MaskValue::Zero;
  Reference reference = Reference::TrueConcepts;
  int workers = 1;
};

struct SweepResult {
  AttributionGrid m1;
  AttributionGrid m2;
  std::vector<AttributionGrid> m3;  // one grid per concept dimension
};

/// For each trial i and start t, with p = predict(encode(epoch_i)) and
/// pm = predict(encode(mask_epoch(epoch_i, t, L))) and c the trial's
/// reference row:
///   M1[i][t] = pearson(c, pm)
///   M2[i][t] = pearson(c, p) - pearson(c, pm)
///   M3[j][i][t] = p[j] - pm[j]
/// Cells are independent pure computations written to preallocated grids,
/// so output is byte-identical for any worker count or start order.
SweepResult mask_sweep(const EpochSet& epochs, const EncoderSpec& encoder,
                       const RidgeModel& model, const MaskSpec& mask,
                       const EmbeddingMatrix& true_concepts,
                       const SweepOptions& options = {});

enum class AggregateKind { MeanOverTrials, PerConceptTopQ };

struct AggregateResult {
  AttributionGrid grid;
  /// Concept indices whose top-q group was empty (rows emitted as missing).
  std::vector<int> empty_groups;
};

/// MeanOverTrials: single-row grid of column means over present cells.
/// PerConceptTopQ: one row per concept j, the column means over trials whose
/// true activation for j is in the top q fraction (ties by trial index).
AggregateResult aggregate_curves(const AttributionGrid& grid,
                                 AggregateKind kind,
                                 const EmbeddingMatrix& true_concepts,
                                 double q = 0.1,
                                 const std::optional<ConceptNames>& names = {});

/// The k largest predicted activations, ties broken by lower concept index.
std::vector<std::pair<std::string, double>> top_k_concepts(
    const RidgeModel& model, const EncoderSpec& encoder, EpochView epoch,
    const ConceptNames& names, Eigen::Index k);

}  // namespace tempattr
