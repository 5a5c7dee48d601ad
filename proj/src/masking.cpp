#include "tempattr/masking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "tempattr/numeric.hpp"

namespace tempattr {

MaskSpec::MaskSpec(Eigen::Index len, std::vector<Eigen::Index> start_list)
    : length(len), starts(std::move(start_list)) {
  if (length < 0) {
    throw Error(ErrorCode::InvalidSpec, "MaskSpec: negative length");
  }
  if (starts.empty()) {
    throw Error(ErrorCode::EmptyInput, "MaskSpec: no starts");
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (starts[i] < 0) {
      throw Error(ErrorCode::OutOfRange, "MaskSpec: negative start");
    }
    if (i > 0 && starts[i] <= starts[i - 1]) {
      throw Error(ErrorCode::InvalidSpec,
                  "MaskSpec: starts must be strictly increasing");
    }
  }
}

MaskSpec MaskSpec::default_sweep() {
  std::vector<Eigen::Index> starts(201);
  std::iota(starts.begin(), starts.end(), 0);
  return MaskSpec(50, std::move(starts));
}

void MaskSpec::validate_for(Eigen::Index n_timepoints) const {
  if (starts.back() + length > n_timepoints) {
    throw Error(ErrorCode::OutOfRange,
                "MaskSpec: start " + std::to_string(starts.back()) +
                    " + length " + std::to_string(length) + " exceeds T=" +
                    std::to_string(n_timepoints));
  }
}

namespace {

void apply_mask(double* data, Eigen::Index n_channels, Eigen::Index n_timepoints,
                Eigen::Index start, Eigen::Index len, MaskValue mask_value,
                const double* channel_means) {
  for (Eigen::Index c = 0; c < n_channels; ++c) {
    double* row = data + c * n_timepoints;
    const double fill =
        mask_value == MaskValue::Zero ? 0.0 : channel_means[c];
    std::fill(row + start, row + start + len, fill);
  }
}

std::vector<double> compute_channel_means(EpochView epoch) {
  std::vector<double> means(epoch.rows());
  for (Eigen::Index c = 0; c < epoch.rows(); ++c) {
    means[c] = epoch.row(c).mean();
  }
  return means;
}

}  // namespace

RowMajorMatrixXd mask_epoch(EpochView epoch, Eigen::Index start,
                            Eigen::Index len, MaskValue mask_value) {
  if (start < 0 || len < 0 || start + len > epoch.cols()) {
    throw Error(ErrorCode::OutOfRange,
                "mask_epoch: window [" + std::to_string(start) + ", " +
                    std::to_string(start + len) + ") exceeds T=" +
                    std::to_string(epoch.cols()));
  }
  RowMajorMatrixXd out = epoch;
  std::vector<double> means;
  if (mask_value == MaskValue::ChannelMean) means = compute_channel_means(epoch);
  apply_mask(out.data(), out.rows(), out.cols(), start, len, mask_value,
             means.data());
  return out;
}

const char* metric_name(MetricKind metric) {
  switch (metric) {
    case MetricKind::M1MaskedVsTruePearson: return "m1";
    case MetricKind::M2DeltaPredTruePearson: return "m2";
    case MetricKind::M3DeltaActivation: return "m3";
  }
  return "unknown";
}

AttributionGrid::AttributionGrid(MetricKind metric,
                                 std::vector<std::string> row_ids,
                                 std::vector<Eigen::Index> starts,
                                 Eigen::Index mask_length,
                                 RowMajorMatrixXd values,
                                 std::vector<std::uint8_t> present,
                                 int concept_index)
    : metric_(metric),
      row_ids_(std::move(row_ids)),
      starts_(std::move(starts)),
      mask_length_(mask_length),
      concept_index_(concept_index),
      values_(std::move(values)),
      present_(std::move(present)) {
  if (values_.rows() != static_cast<Eigen::Index>(row_ids_.size()) ||
      values_.cols() != static_cast<Eigen::Index>(starts_.size())) {
    throw Error(ErrorCode::DimMismatch, "AttributionGrid: dims inconsistent");
  }
  if (present_.size() != static_cast<std::size_t>(values_.size())) {
    throw Error(ErrorCode::DimMismatch, "AttributionGrid: present mask size");
  }
  if (mask_length_ < 0) {
    throw Error(ErrorCode::InvalidSpec, "AttributionGrid: negative mask length");
  }
  const double bound = metric_ == MetricKind::M1MaskedVsTruePearson ? 1.0
                       : metric_ == MetricKind::M2DeltaPredTruePearson
                           ? 2.0
                           : std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < values_.rows(); ++r) {
    for (Eigen::Index c = 0; c < values_.cols(); ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * values_.cols() + c;
      if (present_[idx] == 0) {
        values_(r, c) = 0.0;  // canonical missing value
        continue;
      }
      if (!std::isfinite(values_(r, c))) {
        throw Error(ErrorCode::NonFinite, "AttributionGrid: non-finite cell");
      }
      if (std::abs(values_(r, c)) > bound) {
        throw Error(ErrorCode::OutOfRange,
                    "AttributionGrid: " + std::string(metric_name(metric_)) +
                        " cell outside [-" + std::to_string(bound) + ", " +
                        std::to_string(bound) + "]");
      }
    }
  }
}

bool AttributionGrid::all_present() const {
  return std::all_of(present_.begin(), present_.end(),
                     [](std::uint8_t p) { return p != 0; });
}

namespace {

struct CellGrids {
  RowMajorMatrixXd m1_values, m2_values;
  std::vector<std::uint8_t> m1_present, m2_present;
  std::vector<RowMajorMatrixXd> m3_values;
};

void sweep_trial_range(const EpochSet& epochs, const EncoderSpec& encoder,
                       const RidgeModel& model, const MaskSpec& mask,
                       const EmbeddingMatrix& refs, const SweepOptions& options,
                       Eigen::Index t_begin, Eigen::Index t_end,
                       CellGrids& out) {
  const Eigen::Index n_channels = epochs.n_channels();
  const Eigen::Index n_timepoints = epochs.n_timepoints();
  const Eigen::Index n_cols = static_cast<Eigen::Index>(mask.starts.size());
  const std::size_t stride =
      static_cast<std::size_t>(n_channels) * n_timepoints;
  const Eigen::Index fc = model.out_dim();

  std::vector<double> buffer(stride);
  std::vector<double> saved(static_cast<std::size_t>(n_channels) * mask.length);

  for (Eigen::Index t = t_begin; t < t_end; ++t) {
    const std::string uid = trial_uid(epochs.meta()[t]);
    const double* src = epochs.data().data() + stride * t;
    std::copy(src, src + stride, buffer.begin());
    EpochView view(buffer.data(), n_channels, n_timepoints);

    const Eigen::VectorXd p =
        ridge_predict(model, encode(encoder, view, EncodeKey{uid, "none"}));

    // reference vector: true concept row, or the unmasked prediction
    Eigen::VectorXd ref_vec;
    if (options.reference == Reference::TrueConcepts) {
      ref_vec = refs.row(t);
    } else {
      ref_vec = p;
    }

    std::optional<double> base;
    try {
      base = pearson(ref_vec, p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroVariance) throw;
    }

    std::vector<double> channel_means;
    if (options.mask_value == MaskValue::ChannelMean) {
      channel_means = compute_channel_means(view);
    }

    for (Eigen::Index k = 0; k < n_cols; ++k) {
      const Eigen::Index start = mask.starts[k];
      // mask in place, encode, then restore the window
      for (Eigen::Index c = 0; c < n_channels; ++c) {
        double* row = buffer.data() + c * n_timepoints;
        std::copy(row + start, row + start + mask.length,
                  saved.begin() + c * mask.length);
      }
      apply_mask(buffer.data(), n_channels, n_timepoints, start, mask.length,
                 options.mask_value, channel_means.data());
      const Eigen::VectorXd pm = ridge_predict(
          model,
          encode(encoder, view, EncodeKey{uid, mask_key(start, mask.length)}));
      for (Eigen::Index c = 0; c < n_channels; ++c) {
        double* row = buffer.data() + c * n_timepoints;
        std::copy(saved.begin() + c * mask.length,
                  saved.begin() + (c + 1) * mask.length, row + start);
      }

      const std::size_t cell = static_cast<std::size_t>(t) * n_cols + k;
      std::optional<double> masked_r;
      try {
        masked_r = pearson(ref_vec, pm);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroVariance) throw;
      }
      if (masked_r) {
        out.m1_values(t, k) = *masked_r;
        out.m1_present[cell] = 1;
      }
      if (masked_r && base) {
        out.m2_values(t, k) = *base - *masked_r;
        out.m2_present[cell] = 1;
      }
      for (Eigen::Index j = 0; j < fc; ++j) {
        out.m3_values[j](t, k) = p[j] - pm[j];
      }
    }
  }
}

}  // namespace

SweepResult mask_sweep(const EpochSet& epochs, const EncoderSpec& encoder,
                       const RidgeModel& model, const MaskSpec& mask,
                       const EmbeddingMatrix& true_concepts,
                       const SweepOptions& options) {
  const Eigen::Index n = epochs.n_trials();
  if (n == 0) {
    throw Error(ErrorCode::EmptyInput, "mask_sweep: empty epoch set");
  }
  mask.validate_for(epochs.n_timepoints());
  if (true_concepts.n_rows() != n) {
    throw Error(ErrorCode::RowMismatch,
                "mask_sweep: concept rows != trials");
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    if (true_concepts.row_ids()[t] != trial_uid(epochs.meta()[t])) {
      throw Error(ErrorCode::RowMismatch,
                  "mask_sweep: concept row id mismatch at trial " +
                      std::to_string(t));
    }
  }
  if (true_concepts.dim() != model.out_dim()) {
    throw Error(ErrorCode::DimMismatch,
                "mask_sweep: concept dim != model output dim");
  }

  const Eigen::Index n_cols = static_cast<Eigen::Index>(mask.starts.size());
  const Eigen::Index fc = model.out_dim();

  CellGrids grids;
  grids.m1_values = RowMajorMatrixXd::Zero(n, n_cols);
  grids.m2_values = RowMajorMatrixXd::Zero(n, n_cols);
  grids.m1_present.assign(static_cast<std::size_t>(n) * n_cols, 0);
  grids.m2_present.assign(static_cast<std::size_t>(n) * n_cols, 0);
  grids.m3_values.assign(fc, RowMajorMatrixXd::Zero(n, n_cols));

  const int workers = std::max(1, options.workers);
  if (workers == 1 || n == 1) {
    sweep_trial_range(epochs, encoder, model, mask, true_concepts, options, 0,
                      n, grids);
  } else {
    const int used = static_cast<int>(std::min<Eigen::Index>(workers, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(used);
    for (int w = 0; w < used; ++w) {
      const Eigen::Index begin = n * w / used;
      const Eigen::Index end = n * (w + 1) / used;
      pool.emplace_back([&, w, begin, end] {
        try {
          sweep_trial_range(epochs, encoder, model, mask, true_concepts,
                            options, begin, end, grids);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  std::vector<std::string> row_ids;
  row_ids.reserve(n);
  for (const auto& m : epochs.meta()) row_ids.push_back(trial_uid(m));

  SweepResult result{
      AttributionGrid(MetricKind::M1MaskedVsTruePearson, row_ids, mask.starts,
                      mask.length, std::move(grids.m1_values),
                      std::move(grids.m1_present)),
      AttributionGrid(MetricKind::M2DeltaPredTruePearson, row_ids, mask.starts,
                      mask.length, std::move(grids.m2_values),
                      std::move(grids.m2_present)),
      {}};
  result.m3.reserve(fc);
  std::vector<std::uint8_t> all_present(static_cast<std::size_t>(n) * n_cols, 1);
  for (Eigen::Index j = 0; j < fc; ++j) {
    result.m3.emplace_back(MetricKind::M3DeltaActivation, row_ids, mask.starts,
                           mask.length, std::move(grids.m3_values[j]),
                           all_present, static_cast<int>(j));
  }
  return result;
}

AggregateResult aggregate_curves(const AttributionGrid& grid,
                                 AggregateKind kind,
                                 const EmbeddingMatrix& true_concepts,
                                 double q,
                                 const std::optional<ConceptNames>& names) {
  if (grid.n_rows() == 0) {
    throw Error(ErrorCode::EmptyInput, "aggregate_curves: empty grid");
  }
  const Eigen::Index n = grid.n_rows();
  const Eigen::Index n_cols = grid.n_cols();

  // resolve each grid row in the concept matrix
  std::vector<Eigen::Index> concept_row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto found = true_concepts.find_row(grid.row_ids()[i]);
    if (!found) {
      throw Error(ErrorCode::RowMismatch,
                  "aggregate_curves: row id '" + grid.row_ids()[i] +
                      "' not found in concept matrix");
    }
    concept_row[i] = *found;
  }

  auto mean_rows = [&](const std::vector<Eigen::Index>& rows,
                       Eigen::Ref<Eigen::RowVectorXd> out_values,
                       std::uint8_t* out_present) {
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      double sum = 0.0;
      Eigen::Index count = 0;
      for (Eigen::Index r : rows) {
        if (grid.is_present(r, c)) {
          sum += grid.values()(r, c);
          ++count;
        }
      }
      if (count > 0) {
        out_values[c] = sum / static_cast<double>(count);
        out_present[c] = 1;
      } else {
        out_values[c] = 0.0;
        out_present[c] = 0;
      }
    }
  };

  if (kind == AggregateKind::MeanOverTrials) {
    RowMajorMatrixXd values(1, n_cols);
    std::vector<std::uint8_t> present(n_cols, 0);
    std::vector<Eigen::Index> all(n);
    std::iota(all.begin(), all.end(), 0);
    mean_rows(all, values.row(0), present.data());
    return AggregateResult{
        AttributionGrid(grid.metric(), {"mean"}, grid.starts(),
                        grid.mask_length(), std::move(values),
                        std::move(present), grid.concept_index()),
        {}};
  }

  // PerConceptTopQ
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "aggregate_curves: q must be in [0, 1]");
  }
  const Eigen::Index fc = true_concepts.dim();
  if (names && names->size() != fc) {
    throw Error(ErrorCode::DimMismatch,
                "aggregate_curves: names length != concept dim");
  }
  const Eigen::Index top_k = static_cast<Eigen::Index>(
      std::ceil(q * static_cast<double>(n)));

  RowMajorMatrixXd values = RowMajorMatrixXd::Zero(fc, n_cols);
  std::vector<std::uint8_t> present(static_cast<std::size_t>(fc) * n_cols, 0);
  std::vector<int> empty_groups;
  std::vector<std::string> row_labels;
  row_labels.reserve(fc);

  for (Eigen::Index j = 0; j < fc; ++j) {
    row_labels.push_back(names ? names->names[j]
                               : "concept_" + std::to_string(j));
    if (top_k == 0) {
      empty_groups.push_back(static_cast<int>(j));
      continue;
    }
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return true_concepts.row(concept_row[a])[j] >
                              true_concepts.row(concept_row[b])[j];
                     });
    order.resize(top_k);
    mean_rows(order, values.row(j),
              present.data() + static_cast<std::size_t>(j) * n_cols);
  }

  return AggregateResult{
      AttributionGrid(grid.metric(), std::move(row_labels), grid.starts(),
                      grid.mask_length(), std::move(values), std::move(present)),
      std::move(empty_groups)};
}

std::vector<std::pair<std::string, double>> top_k_concepts(
    const RidgeModel& model, const EncoderSpec& encoder, EpochView epoch,
    const ConceptNames& names, Eigen::Index k) {
  if (k < 1 || k > model.out_dim()) {
    throw Error(ErrorCode::KOutOfRange,
                "top_k_concepts: k=" + std::to_string(k) + " out of range");
  }
  if (names.size() != model.out_dim()) {
    throw Error(ErrorCode::DimMismatch,
                "top_k_concepts: names length != model output dim");
  }
  const Eigen::VectorXd p = ridge_predict(model, encode(encoder, epoch));
  std::vector<Eigen::Index> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return p[a] > p[b]; });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.emplace_back(names.names[order[i]], p[order[i]]);
  }
  return out;
}

}  // namespace tempattr
