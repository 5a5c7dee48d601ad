#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "tempattr/masking.hpp"
#include "tempattr/numeric.hpp"

namespace tempattr {

enum class DtwCost { Abs, Squared };

struct DtwOptions {
  DtwCost cost = DtwCost::Abs;
  /// Sakoe-Chiba radius: path cells restricted to |i - j| <= band.
  /// Must be >= |len(a) - len(b)| for a path to exist.
  std::optional<Eigen::Index> band;
};

/// Classic dynamic time warping alignment cost. Local cost |a_i - b_j|
/// (or squared), steps {(i-1,j), (i,j-1), (i-1,j-1)}, D[0][0] = d(0,0);
/// returns D[n-1][m-1] with no path-length normalization.
double dtw(Eigen::Ref<const Eigen::VectorXd> a,
           Eigen::Ref<const Eigen::VectorXd> b, const DtwOptions& options = {});

/// Pairwise DTW over grid rows: D[i][j] = dtw(row_i, row_j), diagonal
/// exactly 0, each pair computed once. Rows must have no missing cells
/// (impute or drop rows first). Pairs are independent computations with
/// deterministic placement, so any worker count gives identical output.
SymMatrix distance_matrix(const AttributionGrid& rows,
                          const DtwOptions& options = {}, int workers = 1);

enum class Linkage { Single, Complete, Average };

const char* linkage_name(Linkage linkage);

struct Merge {
  int node_a = 0;  // node_a < node_b
  int node_b = 0;
  double height = 0.0;
  int new_node_id = 0;
};

/// Full agglomerative merge history: leaves 0..n_leaves-1, merge step s
/// creates node n_leaves+s. Heights are non-decreasing for single, complete
/// and average linkage.
struct Dendrogram {
  Eigen::Index n_leaves = 0;
  std::vector<Merge> merges;
  std::vector<std::string> leaf_labels;
};

/// Iteratively merges the pair of active clusters with minimal linkage
/// distance (single: min pairwise; complete: max; average: unweighted mean
/// over all cross-pairs). Ties broken by the smallest (node_a, node_b) pair.
/// Labels default to "0", "1", ... when not given.
Dendrogram agglomerate(const SymMatrix& d, Linkage linkage,
                       std::vector<std::string> leaf_labels = {});

/// Undoes the last K-1 merges; cluster ids in [0, K) assigned by order of
/// each cluster's smallest leaf index.
std::vector<int> cluster_cut(const Dendrogram& dend, Eigen::Index k);

}  // namespace tempattr
