#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tempattr/data.hpp"
#include "tempattr/masking.hpp"

namespace tempattr {

struct PlantWindow {
  Eigen::Index start = 0;
  Eigen::Index length = 0;
};

/// Generative recipe for a dataset with one planted temporal window per
/// concept. snr = in-window signal std / noise std.
struct PlantSpec {
  Eigen::Index n_concepts = 0;
  Eigen::Index n_channels = 0;
  Eigen::Index n_timepoints = 0;
  double sample_rate_hz = 250.0;
  std::vector<PlantWindow> windows;  // one per concept, each within [0, T)
  double snr = 5.0;
  Eigen::Index trials_per_stimulus = 1;
  Eigen::Index n_stimuli = 1;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidSpec
};

struct SynthData {
  EpochSet epochs;                 // n_stimuli * trials_per_stimulus trials
  EmbeddingMatrix true_concepts;   // per-stimulus, kind Concept
  ConceptNames names;              // "concept_0", "concept_1", ...
};

/// Deterministic in spec.seed. Draw order from one PRNG stream: concept
/// templates (i.i.d. N(0,1) inside each window, zero outside), then one
/// activation vector per stimulus (i.i.d. N(0,1)), then per-trial noise
/// (i.i.d. N(0, 1/snr), repetitions share activations). Each trial's signal
/// is sum_j activation[j] * template_j + noise.
SynthData generate(const PlantSpec& spec);

struct RecoveryScore {
  std::vector<bool> per_concept_hit;
  double hit_rate = 0.0;
};

/// Grid rows are per-concept curves over the mask-start axis. Concept j is a
/// hit iff the argmax of its curve (ties to the earliest start, missing cells
/// skipped) lies within +-tolerance of some start whose mask window overlaps
/// the planted window.
RecoveryScore score_recovery(const AttributionGrid& grid, const PlantSpec& spec,
                             Eigen::Index tolerance);

}  // namespace tempattr
