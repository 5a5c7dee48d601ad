#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>

#include "tempattr/data.hpp"

namespace tempattr {

enum class EncoderKind { FlattenProjection, WindowMean, Precomputed };

/// Identifies which stored row a precomputed encoder should return.
/// Surrogate encoders ignore it. mask_key is "none" for the unmasked epoch
/// and "<start>_<len>" for a masked one.
struct EncodeKey {
  std::string trial_id;
  std::string mask_key = "none";
};

std::string mask_key(Eigen::Index start, Eigen::Index len);

/// Deterministic map from a C x T epoch to a signal embedding. The two
/// surrogate kinds are linear; the precomputed kind serves externally
/// produced embeddings (e.g. from a deep encoder) looked up per mask key.
class EncoderSpec {
 public:
  /// embedding = P * vec(epoch); P is out_dim x (C*T) with i.i.d.
  /// N(0, 1/(C*T)) entries drawn from Rng(seed) in row-major order.
  static EncoderSpec flatten_projection(Eigen::Index out_dim, std::uint64_t seed,
                                        Eigen::Index n_channels,
                                        Eigen::Index n_timepoints);

  /// Per-channel means over consecutive windows of window_len timepoints;
  /// a final partial window is averaged over its actual length.
  /// out_dim = C * ceil(T / window_len).
  static EncoderSpec window_mean(Eigen::Index window_len,
                                 Eigen::Index n_channels,
                                 Eigen::Index n_timepoints);

  static EncoderSpec precomputed(std::map<std::string, EmbeddingMatrix> table);

  EncoderKind kind() const { return kind_; }
  Eigen::Index out_dim() const { return out_dim_; }
  Eigen::Index n_channels() const { return n_channels_; }
  Eigen::Index n_timepoints() const { return n_timepoints_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Index window_len() const { return window_len_; }

  const RowMajorMatrixXd& projection() const;
  const std::map<std::string, EmbeddingMatrix>& table() const;

  Eigen::Index table_row(const std::string& mask_key,
                         const std::string& trial_id) const;

 private:
  EncoderSpec() = default;

  EncoderKind kind_ = EncoderKind::WindowMean;
  Eigen::Index out_dim_ = 0;
  Eigen::Index n_channels_ = 0;
  Eigen::Index n_timepoints_ = 0;
  std::uint64_t seed_ = 0;
  Eigen::Index window_len_ = 0;
  std::shared_ptr<const RowMajorMatrixXd> projection_;
  std::shared_ptr<const std::map<std::string, EmbeddingMatrix>> table_;
  std::shared_ptr<const std::unordered_map<std::string, Eigen::Index>> row_index_;
};

Eigen::VectorXd encode(const EncoderSpec& spec, EpochView epoch,
                       const EncodeKey& key = {});

/// Row i is encode(spec, trial i); row ids are the trial uids.
EmbeddingMatrix encode_batch(const EncoderSpec& spec, const EpochSet& epochs);

}  // namespace tempattr
