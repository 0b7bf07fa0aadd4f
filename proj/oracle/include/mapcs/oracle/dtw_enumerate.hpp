#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <vector>

#include "mapcs/grid.hpp"

namespace mapcs::oracle {

/// Cost of one explicit warping path given as (i, j) index pairs.
inline std::int64_t warping_path_cost(std::span<const Cell> a, std::span<const Cell> b,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& path) {
  std::int64_t cost = 0;
  for (auto [i, j] : path) cost += std::abs(a[i].x - b[j].x) + std::abs(a[i].y - b[j].y);
  return cost;
}

/// Enumerates every warping path from (0,0) to (n-1,m-1) whose steps are
/// (1,0), (0,1) or (1,1), scores each one independently and keeps the
/// minimum. Exponential; intended for sequences of a handful of cells.
/// `paths_seen`, when given, receives the number of warping paths visited.
inline std::int64_t dtw_by_enumeration(std::span<const Cell> a, std::span<const Cell> b,
                                       std::uint64_t* paths_seen = nullptr) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::uint64_t count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> path{{0, 0}};
  auto visit = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i + 1 == a.size() && j + 1 == b.size()) {
      ++count;
      std::int64_t c = warping_path_cost(a, b, path);
      if (c < best) best = c;
      return;
    }
    const std::pair<std::size_t, std::size_t> moves[] = {{i + 1, j}, {i, j + 1}, {i + 1, j + 1}};
    for (auto [ni, nj] : moves) {
      if (ni >= a.size() || nj >= b.size()) continue;
      path.emplace_back(ni, nj);
      self(self, ni, nj);
      path.pop_back();
    }
  };
  visit(visit, 0, 0);
  if (paths_seen) *paths_seen = count;
  return best;
}

/// All warping paths of an n x m alignment, laid out as a prefix tree in
/// depth-first order so that each path's cost is one addition per node.
/// Every leaf is one complete path; nothing is pruned.
class WarpingPathTree {
 public:
  WarpingPathTree(std::size_t n, std::size_t m) : n_(n), m_(m) {
    nodes_.push_back({0, 0, -1, false});
    grow(0);
  }

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return m_; }
  std::uint64_t path_count() const { return leaves_; }

  /// Minimum over all paths of the summed cost(i, j) along the path.
  template <class Cost>
  std::int64_t min_cost(Cost&& cost) const {
    thread_local std::vector<std::int64_t> acc;
    acc.resize(nodes_.size());
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const Node& nd = nodes_[k];
      std::int64_t here = cost(nd.i, nd.j) + (nd.parent < 0 ? 0 : acc[static_cast<std::size_t>(nd.parent)]);
      acc[k] = here;
      if (nd.leaf && here < best) best = here;
    }
    return best;
  }

 private:
  struct Node {
    std::uint8_t i, j;
    std::int32_t parent;
    bool leaf;
  };

  void grow(std::size_t k) {
    std::size_t i = nodes_[k].i, j = nodes_[k].j;
    if (i + 1 == n_ && j + 1 == m_) {
      nodes_[k].leaf = true;
      ++leaves_;
      return;
    }
    const std::pair<std::size_t, std::size_t> moves[] = {{i + 1, j}, {i, j + 1}, {i + 1, j + 1}};
    for (auto [ni, nj] : moves) {
      if (ni >= n_ || nj >= m_) continue;
      nodes_.push_back({static_cast<std::uint8_t>(ni), static_cast<std::uint8_t>(nj), static_cast<std::int32_t>(k), false});
      grow(nodes_.size() - 1);
    }
  }

  std::size_t n_, m_;
  std::vector<Node> nodes_;
  std::uint64_t leaves_ = 0;
};

/// Every self-avoiding 4-connected path of 1..max_cells cells on a w x h grid.
inline std::vector<std::vector<Cell>> simple_grid_paths(int w, int h, std::size_t max_cells) {
  std::vector<std::vector<Cell>> out;
  std::vector<Cell> cur;
  auto extend = [&](auto&& self) -> void {
    out.push_back(cur);
    if (cur.size() == max_cells) return;
    Cell last = cur.back();
    for (auto s : kAllSteps) {
      Cell n = neighbor(last, s);
      if (n.x < 0 || n.y < 0 || n.x >= w || n.y >= h) continue;
      bool used = false;
      for (auto c : cur) used = used || c == n;
      if (used) continue;
      cur.push_back(n);
      self(self);
      cur.pop_back();
    }
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      cur = {Cell{x, y}};
      extend(extend);
    }
  }
  return out;
}

struct SweepResult {
  std::size_t paths = 0;
  std::uint64_t pairs = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t identical_nonzero = 0;  // identical pairs with a nonzero score
  std::vector<Cell> first_a, first_b;   // first mismatching pair, if any
};

/// Compares `fast(a, b)` with full warping-path enumeration for every ordered
/// pair of self-avoiding paths of 1..max_cells cells on a w x h grid.
template <class Fast>
SweepResult sweep_grid_paths(int w, int h, std::size_t max_cells, Fast&& fast) {
  SweepResult r;
  auto paths = simple_grid_paths(w, h, max_cells);
  r.paths = paths.size();
  std::vector<std::vector<WarpingPathTree>> trees;
  for (std::size_t n = 1; n <= max_cells; ++n) {
    trees.emplace_back();
    for (std::size_t m = 1; m <= max_cells; ++m) trees.back().emplace_back(n, m);
  }
  std::vector<std::int64_t> cost(max_cells * max_cells);
  for (const auto& a : paths) {
    for (const auto& b : paths) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) cost[i * max_cells + j] = manhattan(a[i], b[j]);
      }
      const auto& tree = trees[a.size() - 1][b.size() - 1];
      std::int64_t expected = tree.min_cost([&](std::size_t i, std::size_t j) { return cost[i * max_cells + j]; });
      std::int64_t got = fast(a, b);
      ++r.pairs;
      if (got != expected) {
        if (r.mismatches++ == 0) {
          r.first_a = a;
          r.first_b = b;
        }
      }
      if (&a == &b && got != 0) ++r.identical_nonzero;
    }
  }
  return r;
}

}  // namespace mapcs::oracle
