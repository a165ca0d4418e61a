#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geosim/errors.hpp"
#include "geosim/field.hpp"
#include "geosim/grid.hpp"
#include "geosim/linalg.hpp"
#include "geosim/rng.hpp"

namespace geosim {

struct SinkhornParams {
  double beta = 35.0;       // inverse entropic regularization
  double lambda = 2.2;      // relational weight
  int k = 8;                // adjacency neighbors
  int max_outer = 30;       // relational update cap
  int max_sinkhorn = 200;   // row/column sweep cap per solve
  double tol_marginal = 1e-6;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("SinkhornParams: beta must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("SinkhornParams: lambda must be nonnegative");
    if (k < 1) throw std::invalid_argument("SinkhornParams: k must be positive");
    if (max_outer < 1 || max_sinkhorn < 1)
      throw std::invalid_argument("SinkhornParams: iteration caps must be positive");
    if (!(tol_marginal > 0.0))
      throw std::invalid_argument("SinkhornParams: tol_marginal must be positive");
  }
};

/// Soft assignment with uniform 1/n marginals (up to marginal_error).
struct CouplingMatrix {
  Matrix m;
  bool converged = true;
  double marginal_error = 0.0;

  [[nodiscard]] int n() const { return m.rows(); }
};

using Permutation = std::vector<int>;

inline bool is_permutation_vector(const Permutation& pi, int n) {
  if (pi.size() != static_cast<std::size_t>(n)) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : pi) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

/// Per-variable mean and standard deviation used to normalize and restore.
struct NormStats {
  std::array<double, 2> mean{};
  std::array<double, 2> stddev{};
};

namespace detail {

/// Row/column scaling vectors carried across solves as a warm start.
struct SinkhornState {
  std::vector<double> u, v;
};

constexpr double kKernelFloor = 1e-300;

inline CouplingMatrix sinkhorn_scaled(const Matrix& kernel, int max_iter, double tol,
                                      SinkhornState& state) {
  if (kernel.rows() != kernel.cols())
    throw std::invalid_argument("sinkhorn_normalize: kernel must be square");
  const int n = kernel.rows();
  if (n < 1) throw std::invalid_argument("sinkhorn_normalize: kernel must be nonempty");
  if (max_iter < 1) throw std::invalid_argument("sinkhorn_normalize: max_iter must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("sinkhorn_normalize: tol must be positive");

  Matrix k = kernel;
  for (double& e : k.data()) {
    if (!std::isfinite(e)) throw numeric_error("sinkhorn_normalize: non-finite kernel entry");
    if (e < 0.0) throw std::invalid_argument("sinkhorn_normalize: negative kernel entry");
    if (e < kKernelFloor) e = kKernelFloor;
  }

  const double target = 1.0 / static_cast<double>(n);
  const std::size_t un = static_cast<std::size_t>(n);
  if (state.u.size() != un) state.u.assign(un, 1.0);
  if (state.v.size() != un) state.v.assign(un, 1.0);
  std::vector<double>& u = state.u;
  std::vector<double>& v = state.v;

  std::vector<double> ktu(un), kv(un);
  std::vector<double> best_u, best_v;
  double best_err = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (int it = 0; it < max_iter; ++it) {
    // column pass: v <- target / (K^T u), making column sums exact
    std::fill(ktu.begin(), ktu.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double ui = u[static_cast<std::size_t>(i)];
      const double* row = k.row(i);
      for (int j = 0; j < n; ++j) ktu[static_cast<std::size_t>(j)] += row[j] * ui;
    }
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = target / ktu[static_cast<std::size_t>(j)];

    // residual row error of the current (u, v) iterate
    double row_err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* row = k.row(i);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += row[j] * v[static_cast<std::size_t>(j)];
      kv[static_cast<std::size_t>(i)] = s;
      row_err = std::max(row_err, std::abs(u[static_cast<std::size_t>(i)] * s - target));
    }
    if (row_err < best_err) {
      best_err = row_err;
      best_u = u;
      best_v = v;
    }
    if (row_err < tol) {
      converged = true;
      break;
    }
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = target / kv[static_cast<std::size_t>(i)];
  }

  if (!converged && !best_u.empty()) {
    u = best_u;
    v = best_v;
  }

  CouplingMatrix out;
  out.m = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    const double ui = u[static_cast<std::size_t>(i)];
    const double* src = k.row(i);
    double* dst = out.m.row(i);
    for (int j = 0; j < n; ++j) dst[j] = ui * src[j] * v[static_cast<std::size_t>(j)];
  }

  double err = 0.0;
  std::vector<double> col_sums(un, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = out.m.row(i);
    double rs = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(row[j])) throw numeric_error("sinkhorn_normalize: non-finite coupling");
      rs += row[j];
      col_sums[static_cast<std::size_t>(j)] += row[j];
    }
    err = std::max(err, std::abs(rs - target));
  }
  for (int j = 0; j < n; ++j) err = std::max(err, std::abs(col_sums[static_cast<std::size_t>(j)] - target));

  out.converged = converged;
  out.marginal_error = err;
  return out;
}

} // namespace detail

/// Scales a positive kernel to uniform 1/n row and column marginals by
/// alternating normalization. Entries below 1e-300 are floored to keep the
/// scaling well defined. On iteration exhaustion the best iterate seen is
/// returned with converged = false.
inline CouplingMatrix sinkhorn_normalize(const Matrix& kernel, int max_iter, double tol) {
  detail::SinkhornState state;
  return detail::sinkhorn_scaled(kernel, max_iter, tol, state);
}

/// Sinkhorn matching with a relational reward: the log-kernel combines cosine
/// similarity beta * v_i . u_j with lambda * n * (A M A^T)_ij, where M is the
/// current coupling. The n factor keeps the relational term comparable across
/// problem sizes, since coupling entries scale like 1/n. Alternates relational
/// updates with full Sinkhorn solves (warm-started), stopping early once the
/// coupling stabilizes. Rows of the log-kernel are shifted by their maximum
/// before exponentiation; the shift is absorbed by the row scaling.
inline CouplingMatrix relational_match(const Matrix& v_unit, const Matrix& u_unit,
                                       const AdjacencyGraph& adj, const SinkhornParams& params) {
  params.validate();
  const int n = v_unit.rows();
  if (u_unit.rows() != n || v_unit.cols() != u_unit.cols())
    throw std::invalid_argument("relational_match: feature matrices must have matching shapes");
  if (adj.node_count() != n)
    throw std::invalid_argument("relational_match: adjacency node count mismatch");
  const int d = v_unit.cols();

  Matrix sim(n, n);
  for (int i = 0; i < n; ++i) {
    const double* vi = v_unit.row(i);
    double* out = sim.row(i);
    for (int j = 0; j < n; ++j) {
      const double* uj = u_unit.row(j);
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += vi[c] * uj[c];
      out[j] = s;
    }
  }

  const double uniform = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  Matrix coupling(n, n, uniform);
  Matrix am(n, n), kern(n, n);
  detail::SinkhornState state;
  const double outer_tol = params.tol_marginal / static_cast<double>(n);
  const double rel_scale = params.lambda * static_cast<double>(n);

  CouplingMatrix result;
  for (int t = 0; t < params.max_outer; ++t) {
    if (params.lambda > 0.0) {
      for (int i = 0; i < n; ++i) {
        double* dst = am.row(i);
        std::fill(dst, dst + n, 0.0);
        for (int nb : adj.neighbors(i)) {
          const double* src = coupling.row(nb);
          for (int j = 0; j < n; ++j) dst[j] += src[j];
        }
      }
      for (int i = 0; i < n; ++i) {
        const double* amr = am.row(i);
        double* dst = kern.row(i);
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int nb : adj.neighbors(j)) s += amr[nb];
          dst[j] = params.beta * sim(i, j) + rel_scale * s;
        }
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const double* s = sim.row(i);
        double* dst = kern.row(i);
        for (int j = 0; j < n; ++j) dst[j] = params.beta * s[j];
      }
    }

    for (int i = 0; i < n; ++i) {
      double* row = kern.row(i);
      double mx = row[0];
      for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
      for (int j = 0; j < n; ++j) row[j] = std::exp(row[j] - mx);
    }

    CouplingMatrix solved =
        detail::sinkhorn_scaled(kern, params.max_sinkhorn, params.tol_marginal, state);

    double delta = 0.0;
    const std::vector<double>& a = solved.m.data();
    const std::vector<double>& b = coupling.data();
    for (std::size_t idx = 0; idx < a.size(); ++idx)
      delta = std::max(delta, std::abs(a[idx] - b[idx]));

    coupling = std::move(solved.m);
    result.converged = solved.converged;
    result.marginal_error = solved.marginal_error;
    if (delta < outer_tol) break;
  }

  result.m = std::move(coupling);
  return result;
}

/// Hard permutation from a soft coupling: points are processed in decreasing
/// order of their row maximum and take the best still-unused anchor. All ties
/// resolve to the lower index.
inline Permutation greedy_round(const CouplingMatrix& coupling) {
  const int n = coupling.n();
  std::vector<double> confidence(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = coupling.m.row(i);
    double mx = row[0];
    for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
    confidence[static_cast<std::size_t>(i)] = mx;
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (confidence[static_cast<std::size_t>(a)] != confidence[static_cast<std::size_t>(b)])
      return confidence[static_cast<std::size_t>(a)] > confidence[static_cast<std::size_t>(b)];
    return a < b;
  });

  Permutation pi(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int i : order) {
    const double* row = coupling.m.row(i);
    int best = -1;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (row[j] > best_val) {
        best_val = row[j];
        best = j;
      }
    }
    pi[static_cast<std::size_t>(i)] = best;
    used[static_cast<std::size_t>(best)] = 1;
  }
  return pi;
}

/// Output of the transport simulation: the permuted pair plus solver
/// diagnostics from the final coupling.
struct MstResult {
  Field x;
  Field y;
  bool sinkhorn_converged = true;
  double marginal_error = 0.0;
  Permutation assignment;   // point i -> anchor assignment[i]
  Permutation anchor_perm;  // anchor j -> source row anchor_perm[j]
};

/// Deterministic core with the anchor permutation supplied by the caller.
inline MstResult mst_direct_anchored(const Field& x, const Field& y, const Grid2D& grid,
                                     const SinkhornParams& params, const Permutation& anchor_perm) {
  params.validate();
  if (!(x.grid == grid) || !(y.grid == grid))
    throw std::invalid_argument("mst_direct: fields must live on the given grid");
  const int n = grid.size();
  if (!is_permutation_vector(anchor_perm, n))
    throw std::invalid_argument("mst_direct: anchor_perm is not a permutation");

  NormStats stats;
  const std::array<const std::vector<double>*, 2> cols = {&x.values, &y.values};
  for (int c = 0; c < 2; ++c) {
    double m = 0.0;
    for (double v : *cols[static_cast<std::size_t>(c)]) m += v;
    m /= static_cast<double>(n);
    double var = 0.0;
    for (double v : *cols[static_cast<std::size_t>(c)]) var += (v - m) * (v - m);
    var /= static_cast<double>(n);
    if (!(var > 0.0))
      throw std::invalid_argument("mst_direct: variable has zero variance");
    stats.mean[static_cast<std::size_t>(c)] = m;
    stats.stddev[static_cast<std::size_t>(c)] = std::sqrt(var);
  }

  Matrix v_unit(n, 2);
  for (int i = 0; i < n; ++i) {
    const double a =
        (x.values[static_cast<std::size_t>(i)] - stats.mean[0]) / stats.stddev[0];
    const double b =
        (y.values[static_cast<std::size_t>(i)] - stats.mean[1]) / stats.stddev[1];
    const double norm = std::hypot(a, b);
    if (norm > 0.0) {
      v_unit(i, 0) = a / norm;
      v_unit(i, 1) = b / norm;
    } else {
      v_unit(i, 0) = 0.0;
      v_unit(i, 1) = 0.0;
    }
  }

  Matrix u_unit(n, 2);
  for (int j = 0; j < n; ++j) {
    const int src = anchor_perm[static_cast<std::size_t>(j)];
    u_unit(j, 0) = v_unit(src, 0);
    u_unit(j, 1) = v_unit(src, 1);
  }

  const AdjacencyGraph adj = knn_adjacency(coordinates(grid), params.k);
  CouplingMatrix coupling = relational_match(v_unit, u_unit, adj, params);
  Permutation pi = greedy_round(coupling);

  // Denormalizing U[pi]*sigma + mu composes to a row lookup into the original
  // pair, which keeps the output an exact permutation of the input rows.
  std::vector<double> out_x(static_cast<std::size_t>(n)), out_y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int src = anchor_perm[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)])];
    out_x[static_cast<std::size_t>(i)] = x.values[static_cast<std::size_t>(src)];
    out_y[static_cast<std::size_t>(i)] = y.values[static_cast<std::size_t>(src)];
  }

  return MstResult{Field(std::move(out_x), grid), Field(std::move(out_y), grid),
                   coupling.converged, coupling.marginal_error, std::move(pi), anchor_perm};
}

/// Full transport simulation: draw the anchor permutation, match, round.
inline MstResult mst_direct(const Field& x, const Field& y, const Grid2D& grid,
                            const SinkhornParams& params, Rng rng) {
  return mst_direct_anchored(x, y, grid, params, rng.permutation(grid.size()));
}

} // namespace geosim
