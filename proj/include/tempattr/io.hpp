#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempattr/clustering.hpp"
#include "tempattr/data.hpp"
#include "tempattr/masking.hpp"
#include "tempattr/ridge.hpp"
#include "tempattr/synthetic.hpp"

namespace tempattr {

/// Shortest round-trip decimal representation, locale-independent.
std::string format_double(double value);
/// Inverse of format_double; rejects partial parses.
double parse_double(std::string_view text);

/// "<stem>.meta.json" next to the data file.
std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// Epoch binary format: magic EPC1 | u32 n_trials | u32 n_channels |
/// u32 n_timepoints | f32 sample_rate | payload f32, trial-major then
/// channel-major then time. Trial metadata lives in the JSON sidecar
/// {"trials": [{"stimulus_id", "subject_id", "repetition"}, ...]}.
/// All multi-byte values little-endian; read(write(x)) == x bit-exactly
/// for f32-representable samples.
void write_epochs(const EpochSet& epochs, const std::filesystem::path& path);
EpochSet read_epochs(const std::filesystem::path& path);

struct EmbeddingsFile {
  EmbeddingMatrix matrix;
  std::optional<ConceptNames> concept_names;
};

/// Embedding binary format: magic EMB1 | u32 n_rows | u32 dim | u8 kind |
/// payload row-major f32. Sidecar {"row_ids": [...], "concept_names": [...]?}.
void write_embeddings(const EmbeddingMatrix& matrix,
                      const std::filesystem::path& path,
                      const std::optional<ConceptNames>& concept_names = {});
EmbeddingsFile read_embeddings(const std::filesystem::path& path);

/// Header row = concept names when given, else dimension indices; one data
/// line per matrix row, no row-id column.
void write_embeddings_csv(const EmbeddingMatrix& matrix,
                          const std::filesystem::path& path,
                          const std::optional<ConceptNames>& concept_names = {});

/// Model binary format: magic RDG1 | u32 F_c | u32 F_e | f64 lambda |
/// W row-major f64 | b f64 | feature_means f64 | target_means f64.
void write_model(const RidgeModel& model, const std::filesystem::path& path);
RidgeModel read_model(const std::filesystem::path& path);

/// Grid binary format: magic ATG1 | u32 n_rows | u32 n_cols | u8 metric |
/// u32 mask_length | i32 concept_index (-1 = none) | n_cols x i32 starts |
/// payload row-major f32, missing cells as quiet NaN (bits 0x7FC00000).
/// Sidecar {"row_ids": [...]}.
void write_grid(const AttributionGrid& grid, const std::filesystem::path& path);
AttributionGrid read_grid(const std::filesystem::path& path);

/// CSV with header `row_id,start_<t0>,start_<t1>,...`; one row per grid row,
/// missing cells as empty fields.
void write_grid_csv(const AttributionGrid& grid,
                    const std::filesystem::path& path);
/// The CSV carries no metric/mask-length metadata, so the caller supplies it.
AttributionGrid read_grid_csv(
    const std::filesystem::path& path,
    MetricKind metric = MetricKind::M2DeltaPredTruePearson,
    Eigen::Index mask_length = 0);

/// CSV with a label header row and a leading label column.
void write_distance_csv(const SymMatrix& d,
                        const std::vector<std::string>& labels,
                        const std::filesystem::path& path);

/// JSON {"leaves": [...], "merges": [[node_a, node_b, height, new_id], ...]}.
void write_dendrogram_json(const Dendrogram& dend,
                           const std::filesystem::path& path);
Dendrogram read_dendrogram_json(const std::filesystem::path& path);

/// CSV `label,cluster`, one row per leaf.
void write_assignments_csv(const std::vector<std::string>& labels,
                           const std::vector<int>& assignment,
                           const std::filesystem::path& path);

/// JSON object mirroring PlantSpec fields; windows as
/// [{"start": ..., "length": ...}, ...].
PlantSpec read_plant_spec(const std::filesystem::path& path);
void write_plant_spec(const PlantSpec& spec, const std::filesystem::path& path);

}  // namespace tempattr
