#include "tempattr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace tempattr {

double dtw(Eigen::Ref<const Eigen::VectorXd> a,
           Eigen::Ref<const Eigen::VectorXd> b, const DtwOptions& options) {
  const Eigen::Index n = a.size();
  const Eigen::Index m = b.size();
  if (n == 0 || m == 0) {
    throw Error(ErrorCode::EmptySequence, "dtw: empty sequence");
  }
  Eigen::Index radius = n + m;  // admits every cell
  if (options.band) {
    if (*options.band < std::abs(n - m)) {
      throw Error(ErrorCode::BandTooNarrow,
                  "dtw: band " + std::to_string(*options.band) +
                      " < length difference " + std::to_string(std::abs(n - m)));
    }
    radius = *options.band;
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m, inf), curr(m, inf);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(curr.begin(), curr.end(), inf);
    const Eigen::Index j_lo = std::max<Eigen::Index>(0, i - radius);
    const Eigen::Index j_hi = std::min<Eigen::Index>(m - 1, i + radius);
    for (Eigen::Index j = j_lo; j <= j_hi; ++j) {
      const double diff = a[i] - b[j];
      const double d =
          options.cost == DtwCost::Abs ? std::abs(diff) : diff * diff;
      if (i == 0 && j == 0) {
        curr[j] = d;
        continue;
      }
      double best = inf;
      if (i > 0) best = std::min(best, prev[j]);
      if (j > 0) best = std::min(best, curr[j - 1]);
      if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
      curr[j] = best + d;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

SymMatrix distance_matrix(const AttributionGrid& rows,
                          const DtwOptions& options, int workers) {
  const Eigen::Index n = rows.n_rows();
  if (n < 2) {
    throw Error(ErrorCode::EmptyInput, "distance_matrix: need >= 2 rows");
  }
  if (!rows.all_present()) {
    throw Error(ErrorCode::MissingCells,
                "distance_matrix: grid has missing cells");
  }

  SymMatrix d(n);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto [i, j] = pairs[p];
      d.set(i, j, dtw(rows.values().row(i).transpose(),
                      rows.values().row(j).transpose(), options));
    }
  };

  const std::size_t n_pairs = pairs.size();
  const std::size_t used = std::min<std::size_t>(
      std::max(1, workers), std::max<std::size_t>(1, n_pairs));
  if (used <= 1) {
    run(0, n_pairs);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(used);
    for (std::size_t w = 0; w < used; ++w) {
      const std::size_t begin = n_pairs * w / used;
      const std::size_t end = n_pairs * (w + 1) / used;
      pool.emplace_back([&, w, begin, end] {
        try {
          run(begin, end);
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
  return d;
}

const char* linkage_name(Linkage linkage) {
  switch (linkage) {
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
  }
  return "unknown";
}

Dendrogram agglomerate(const SymMatrix& d, Linkage linkage,
                       std::vector<std::string> leaf_labels) {
  const Eigen::Index n = d.order();
  if (n < 2) {
    throw Error(ErrorCode::EmptyInput, "agglomerate: need order >= 2");
  }
  if (leaf_labels.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      leaf_labels.push_back(std::to_string(i));
    }
  } else if (static_cast<Eigen::Index>(leaf_labels.size()) != n) {
    throw Error(ErrorCode::DimMismatch,
                "agglomerate: label count != matrix order");
  }

  struct Cluster {
    int id;
    Eigen::Index size;
  };
  std::vector<Cluster> active;
  active.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    active.push_back({static_cast<int>(i), 1});
  }
  // dist[a][b] between active positions; Lance-Williams updated on merge
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dist[i][j] = dist[j][i] = d(i, j);
    }
  }

  Dendrogram dend;
  dend.n_leaves = n;
  dend.leaf_labels = std::move(leaf_labels);
  dend.merges.reserve(n - 1);

  for (Eigen::Index step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0, best_b = 1;
    double best_dist = std::numeric_limits<double>::infinity();
    auto id_pair = [&](std::size_t a, std::size_t b) {
      return std::pair<int, int>(std::min(active[a].id, active[b].id),
                                 std::max(active[a].id, active[b].id));
    };
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = dist[a][b];
        if (v < best_dist ||
            (v == best_dist && id_pair(a, b) < id_pair(best_a, best_b))) {
          best_dist = v;
          best_a = a;
          best_b = b;
        }
      }
    }

    const auto [lo, hi] = id_pair(best_a, best_b);
    const int new_id = static_cast<int>(n + step);
    dend.merges.push_back({lo, hi, best_dist, new_id});

    const Eigen::Index size_a = active[best_a].size;
    const Eigen::Index size_b = active[best_b].size;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == best_a || k == best_b) continue;
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Single:
          merged = std::min(dist[k][best_a], dist[k][best_b]);
          break;
        case Linkage::Complete:
          merged = std::max(dist[k][best_a], dist[k][best_b]);
          break;
        case Linkage::Average:
          merged = (static_cast<double>(size_a) * dist[k][best_a] +
                    static_cast<double>(size_b) * dist[k][best_b]) /
                   static_cast<double>(size_a + size_b);
          break;
      }
      dist[k][best_a] = dist[best_a][k] = merged;
    }
    active[best_a] = {new_id, size_a + size_b};

    // swap-remove position best_b, keeping dist rows/cols in sync
    const std::size_t last = active.size() - 1;
    if (best_b != last) {
      active[best_b] = active[last];
      for (std::size_t k = 0; k < active.size(); ++k) {
        dist[k][best_b] = dist[k][last];
      }
      for (std::size_t k = 0; k < active.size(); ++k) {
        dist[best_b][k] = dist[last][k];
      }
      dist[best_b][best_b] = 0.0;
    }
    active.pop_back();
  }
  return dend;
}

std::vector<int> cluster_cut(const Dendrogram& dend, Eigen::Index k) {
  const Eigen::Index n = dend.n_leaves;
  if (k < 1 || k > n) {
    throw Error(ErrorCode::KOutOfRange,
                "cluster_cut: K=" + std::to_string(k) + " not in [1, " +
                    std::to_string(n) + "]");
  }
  // apply all but the last K-1 merges
  std::map<int, std::vector<int>> members;
  for (Eigen::Index i = 0; i < n; ++i) {
    members[static_cast<int>(i)] = {static_cast<int>(i)};
  }
  const Eigen::Index applied = n - k;
  for (Eigen::Index s = 0; s < applied; ++s) {
    const Merge& m = dend.merges[s];
    auto a = members.find(m.node_a);
    auto b = members.find(m.node_b);
    std::vector<int> joined = std::move(a->second);
    joined.insert(joined.end(), b->second.begin(), b->second.end());
    members.erase(a);
    members.erase(b);
    members[m.new_node_id] = std::move(joined);
  }

  std::vector<std::pair<int, const std::vector<int>*>> groups;
  groups.reserve(members.size());
  for (const auto& [id, leaves] : members) {
    groups.emplace_back(*std::min_element(leaves.begin(), leaves.end()),
                        &leaves);
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<int> assignment(n, -1);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    for (int leaf : *groups[c].second) {
      assignment[leaf] = static_cast<int>(c);
    }
  }
  return assignment;
}

}  // namespace tempattr
