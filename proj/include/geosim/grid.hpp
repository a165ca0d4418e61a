#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace geosim {

/// Regular 2-D grid. Point index i maps to cell (i % nx, i / nx), row-major;
/// this flattening order is shared project-wide.
struct Grid2D {
  int nx = 2;
  int ny = 2;
  double spacing = 1.0;

  Grid2D(int nx_, int ny_, double spacing_ = 1.0) : nx(nx_), ny(ny_), spacing(spacing_) {
    if (nx < 1 || ny < 1 || static_cast<long long>(nx) * ny < 2)
      throw std::invalid_argument("Grid2D: grid must contain at least two points");
    if (!(spacing > 0.0)) throw std::invalid_argument("Grid2D: spacing must be positive");
  }

  [[nodiscard]] int size() const { return nx * ny; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Grid point coordinates in the fixed row-major order.
inline std::vector<Point2> coordinates(const Grid2D& grid) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      pts.push_back({i * grid.spacing, j * grid.spacing});
  return pts;
}

/// Symmetric binary graph; neighbor lists are sorted, unique, self-loop free.
class AdjacencyGraph {
public:
  AdjacencyGraph(int n, std::vector<std::vector<int>> neighbors)
      : n_(n), neighbors_(std::move(neighbors)) {
    if (n_ < 1 || neighbors_.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("AdjacencyGraph: neighbor list count must equal node count");
  }

  [[nodiscard]] int node_count() const { return n_; }

  [[nodiscard]] const std::vector<int>& neighbors(int i) const {
    return neighbors_[static_cast<std::size_t>(i)];
  }

  [[nodiscard]] int degree(int i) const {
    return static_cast<int>(neighbors_[static_cast<std::size_t>(i)].size());
  }

  [[nodiscard]] bool has_edge(int i, int j) const {
    const auto& nb = neighbors_[static_cast<std::size_t>(i)];
    return std::binary_search(nb.begin(), nb.end(), j);
  }

  /// Number of undirected edges.
  [[nodiscard]] std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : neighbors_) total += nb.size();
    return total / 2;
  }

private:
  int n_ = 0;
  std::vector<std::vector<int>> neighbors_;
};

/// Symmetric k-nearest-neighbor graph over a point set.
///
/// Each point is linked to its k nearest neighbors by Euclidean distance and
/// the directed relation is symmetrized by union, so every degree is >= k.
/// Ties at the k-th distance admit the lower node index. Squared distances are
/// compared, which keeps ties on integer-coordinate grids exact.
inline AdjacencyGraph knn_adjacency(const std::vector<Point2>& points, int k) {
  const int n = static_cast<int>(points.size());
  if (k < 1) throw std::invalid_argument("knn_adjacency: k must be positive");
  if (k >= n) throw std::invalid_argument("knn_adjacency: k must be smaller than the point count");

  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> cand;
  cand.reserve(static_cast<std::size_t>(n) - 1);
  for (int i = 0; i < n; ++i) {
    cand.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = points[static_cast<std::size_t>(i)].x - points[static_cast<std::size_t>(j)].x;
      const double dy = points[static_cast<std::size_t>(i)].y - points[static_cast<std::size_t>(j)].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 == 0.0) throw std::invalid_argument("knn_adjacency: points must be distinct");
      cand.emplace_back(d2, j);
    }
    std::sort(cand.begin(), cand.end());
    for (int m = 0; m < k; ++m) {
      const int j = cand[static_cast<std::size_t>(m)].second;
      nbrs[static_cast<std::size_t>(i)].push_back(j);
      nbrs[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  for (auto& nb : nbrs) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return AdjacencyGraph(n, std::move(nbrs));
}

} // namespace geosim
