#include "tempattr/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "tempattr/numeric.hpp"

namespace tempattr {

void PlantSpec::validate() const {
  if (n_concepts < 1 || n_channels < 1 || n_timepoints < 1 ||
      trials_per_stimulus < 1 || n_stimuli < 1) {
    throw Error(ErrorCode::InvalidSpec, "PlantSpec: counts must be >= 1");
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw Error(ErrorCode::InvalidSpec, "PlantSpec: sample_rate_hz must be > 0");
  }
  if (!(snr > 0.0) || !std::isfinite(snr)) {
    throw Error(ErrorCode::InvalidSpec, "PlantSpec: snr must be > 0");
  }
  if (static_cast<Eigen::Index>(windows.size()) != n_concepts) {
    throw Error(ErrorCode::InvalidSpec,
                "PlantSpec: need one window per concept");
  }
  for (const PlantWindow& w : windows) {
    if (w.start < 0 || w.length < 1 || w.start + w.length > n_timepoints) {
      throw Error(ErrorCode::InvalidSpec,
                  "PlantSpec: window [" + std::to_string(w.start) + ", " +
                      std::to_string(w.start + w.length) + ") outside [0, " +
                      std::to_string(n_timepoints) + ")");
    }
  }
}

SynthData generate(const PlantSpec& spec) {
  spec.validate();
  const Eigen::Index fc = spec.n_concepts;
  const Eigen::Index c = spec.n_channels;
  const Eigen::Index t = spec.n_timepoints;
  const std::size_t epoch_len = static_cast<std::size_t>(c) * t;

  Rng rng(spec.seed);

  // templates: zero outside the window, unit-std gaussian inside
  std::vector<std::vector<double>> templates(fc,
                                             std::vector<double>(epoch_len, 0.0));
  for (Eigen::Index j = 0; j < fc; ++j) {
    const PlantWindow& w = spec.windows[j];
    for (Eigen::Index ch = 0; ch < c; ++ch) {
      double* row = templates[j].data() + ch * t;
      for (Eigen::Index k = w.start; k < w.start + w.length; ++k) {
        row[k] = rng.next_gaussian();
      }
    }
  }

  std::vector<double> activations(static_cast<std::size_t>(spec.n_stimuli) * fc);
  for (double& a : activations) a = rng.next_gaussian();

  const double noise_std = 1.0 / spec.snr;
  const Eigen::Index n_trials = spec.n_stimuli * spec.trials_per_stimulus;
  std::vector<double> data(static_cast<std::size_t>(n_trials) * epoch_len);
  std::vector<TrialMeta> meta;
  meta.reserve(n_trials);
  std::vector<std::string> stim_ids;
  stim_ids.reserve(spec.n_stimuli);
  for (Eigen::Index s = 0; s < spec.n_stimuli; ++s) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "stim_%04d", static_cast<int>(s));
    stim_ids.emplace_back(buf);
  }

  std::size_t offset = 0;
  for (Eigen::Index s = 0; s < spec.n_stimuli; ++s) {
    const double* act = activations.data() + static_cast<std::size_t>(s) * fc;
    for (Eigen::Index rep = 0; rep < spec.trials_per_stimulus; ++rep) {
      double* trial = data.data() + offset;
      for (std::size_t i = 0; i < epoch_len; ++i) {
        double v = noise_std * rng.next_gaussian();
        for (Eigen::Index j = 0; j < fc; ++j) {
          v += act[j] * templates[j][i];
        }
        trial[i] = v;
      }
      meta.push_back({stim_ids[s], "sub-01", static_cast<std::uint32_t>(rep)});
      offset += epoch_len;
    }
  }

  std::vector<std::string> concept_labels;
  concept_labels.reserve(fc);
  for (Eigen::Index j = 0; j < fc; ++j) {
    concept_labels.push_back("concept_" + std::to_string(j));
  }

  return SynthData{
      EpochSet(c, t, spec.sample_rate_hz, std::move(data), std::move(meta)),
      EmbeddingMatrix(EmbeddingKind::Concept, fc, std::move(activations),
                      std::move(stim_ids)),
      ConceptNames(std::move(concept_labels))};
}

RecoveryScore score_recovery(const AttributionGrid& grid, const PlantSpec& spec,
                             Eigen::Index tolerance) {
  spec.validate();
  if (grid.n_rows() != spec.n_concepts) {
    throw Error(ErrorCode::SpecGridMismatch,
                "score_recovery: grid rows " + std::to_string(grid.n_rows()) +
                    " != concepts " + std::to_string(spec.n_concepts));
  }
  if (tolerance < 0) {
    throw Error(ErrorCode::SpecGridMismatch,
                "score_recovery: negative tolerance");
  }

  const auto& starts = grid.starts();
  const Eigen::Index mask_len = grid.mask_length();

  RecoveryScore score;
  score.per_concept_hit.resize(spec.n_concepts, false);
  Eigen::Index hits = 0;
  for (Eigen::Index j = 0; j < spec.n_concepts; ++j) {
    // argmax over present cells, earliest start on ties
    bool any = false;
    double best = 0.0;
    Eigen::Index best_start = 0;
    for (Eigen::Index k = 0; k < grid.n_cols(); ++k) {
      if (!grid.is_present(j, k)) continue;
      const double v = grid.values()(j, k);
      if (!any || v > best) {
        any = true;
        best = v;
        best_start = starts[k];
      }
    }
    if (!any) continue;

    const PlantWindow& w = spec.windows[j];
    bool hit = false;
    for (Eigen::Index s : starts) {
      const bool overlaps = s < w.start + w.length && s + mask_len > w.start;
      if (overlaps && std::abs(best_start - s) <= tolerance) {
        hit = true;
        break;
      }
    }
    score.per_concept_hit[j] = hit;
    if (hit) ++hits;
  }
  score.hit_rate =
      static_cast<double>(hits) / static_cast<double>(spec.n_concepts);
  return score;
}

}  // namespace tempattr
