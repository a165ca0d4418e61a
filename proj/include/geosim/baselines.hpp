#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geosim/errors.hpp"
#include "geosim/field.hpp"
#include "geosim/fieldgen.hpp"
#include "geosim/grid.hpp"
#include "geosim/linalg.hpp"
#include "geosim/rng.hpp"
#include "geosim/stats.hpp"
#include "geosim/variogram.hpp"

namespace geosim {

/// Where the inter-variable correlation is estimated. NormalScores is the
/// default, consistent with the Gaussian-space simulation model.
enum class CorrelationSpace { NormalScores, Raw };

inline double estimate_rho(std::span<const double> x, std::span<const double> y,
                           CorrelationSpace space = CorrelationSpace::NormalScores) {
  double rho = 0.0;
  if (space == CorrelationSpace::NormalScores) {
    const auto nsx = normal_scores(x);
    const auto nsy = normal_scores(y);
    rho = pearson(nsx, nsy);
  } else {
    rho = pearson(x, y);
  }
  return std::clamp(rho, -1.0, 1.0);
}

namespace detail {

inline void require_simulable(const Field& x, const Field& y, const Grid2D& grid) {
  if (!(x.grid == grid) || !(y.grid == grid))
    throw std::invalid_argument("baseline: fields must live on the given grid");
  for (const auto* f : {&x, &y}) {
    const auto [lo, hi] = std::minmax_element(f->values.begin(), f->values.end());
    if (*lo == *hi)
      throw std::invalid_argument("baseline: variable must have at least two distinct values");
  }
}

} // namespace detail

/// Gaussian copula simulation: correlate two independent unit-variance
/// spectral fields with the 2x2 Cholesky [1 0; rho sqrt(1-rho^2)], then map
/// each back to the original marginal by rank. Per-variable marginals are
/// exact permutations of the inputs.
inline std::pair<Field, Field> gaussian_copula_sim(const Field& x, const Field& y,
                                                   const Grid2D& grid,
                                                   const VariogramModel& model_x,
                                                   const VariogramModel& model_y, const Rng& rng,
                                                   CorrelationSpace space = CorrelationSpace::NormalScores) {
  detail::require_simulable(x, y, grid);
  const double rho = estimate_rho(x.values, y.values, space);

  Field g1 = fftma_field(grid, model_x, rng.derive("g1"));
  Field g2 = fftma_field(grid, model_y, rng.derive("g2"));
  const double s1 = std::sqrt(model_x.sill);
  const double s2 = std::sqrt(model_y.sill);

  const std::size_t n = g1.values.size();
  std::vector<double> z2(n);
  const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (std::size_t i = 0; i < n; ++i) {
    g1.values[i] /= s1;
    z2[i] = rho * g1.values[i] + mix * g2.values[i] / s2;
  }

  return {Field(rank_back_transform(x.values, g1.values), grid),
          Field(rank_back_transform(y.values, z2), grid)};
}

/// 2n x 2n joint covariance R (x) S, with R = [[1, rho], [rho, 1]] and
/// S_ij the average of the two model covariances at the inter-point distance.
/// Variable-major layout: block row 0 is variable X, block row 1 variable Y.
inline Matrix joint_covariance(const Grid2D& grid, const VariogramModel& model_x,
                               const VariogramModel& model_y, double rho) {
  const int n = grid.size();
  const auto pts = coordinates(grid);
  Matrix sigma(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double dx = pts[static_cast<std::size_t>(i)].x - pts[static_cast<std::size_t>(j)].x;
      const double dy = pts[static_cast<std::size_t>(i)].y - pts[static_cast<std::size_t>(j)].y;
      const double h = std::hypot(dx, dy);
      const double c = 0.5 * (covariance(model_x, h) + covariance(model_y, h));
      sigma(i, j) = sigma(j, i) = c;
      sigma(n + i, n + j) = sigma(n + j, n + i) = c;
      sigma(i, n + j) = sigma(n + j, i) = rho * c;
      sigma(n + i, j) = sigma(j, n + i) = rho * c;
    }
  }
  return sigma;
}

/// Correlated Gaussian stage of the joint-covariance method: factor the 2n x 2n
/// covariance and color a standard normal vector. Returns the two halves.
/// A diagonal jitter of 1e-8 * trace / (2n) is applied on factorization
/// failure, escalating x10 up to three times.
inline std::pair<std::vector<double>, std::vector<double>> lu_gaussian_stage(
    const Grid2D& grid, const VariogramModel& model_x, const VariogramModel& model_y, double rho,
    Rng rng) {
  const int n = grid.size();
  const int n2 = 2 * n;
  const Matrix sigma = joint_covariance(grid, model_x, model_y, rho);

  double trace = 0.0;
  for (int i = 0; i < n2; ++i) trace += sigma(i, i);
  const double jitter0 = 1e-8 * trace / static_cast<double>(n2);

  Matrix chol = sigma;
  bool ok = cholesky_in_place(chol);
  double jitter = jitter0;
  for (int attempt = 0; !ok && attempt < 3; ++attempt, jitter *= 10.0) {
    chol = sigma;
    for (int i = 0; i < n2; ++i) chol(i, i) += jitter;
    ok = cholesky_in_place(chol);
  }
  if (!ok) throw numeric_error("lu_joint_sim: covariance factorization failed after jitter escalation");

  const std::vector<double> w = rng.normals(static_cast<std::size_t>(n2));
  std::vector<double> gx(static_cast<std::size_t>(n)), gy(static_cast<std::size_t>(n));
  for (int i = 0; i < n2; ++i) {
    const double* row = chol.row(i);
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += row[j] * w[static_cast<std::size_t>(j)];
    if (i < n)
      gx[static_cast<std::size_t>(i)] = s;
    else
      gy[static_cast<std::size_t>(i - n)] = s;
  }
  return {std::move(gx), std::move(gy)};
}

/// Joint-covariance simulation ("LU" method): color 2n standard normals with
/// the Cholesky factor of the Kronecker joint covariance, then rank-map each
/// half back to its original marginal.
inline std::pair<Field, Field> lu_joint_sim(const Field& x, const Field& y, const Grid2D& grid,
                                            const VariogramModel& model_x,
                                            const VariogramModel& model_y, const Rng& rng,
                                            CorrelationSpace space = CorrelationSpace::NormalScores) {
  detail::require_simulable(x, y, grid);
  if (grid.size() > 2000)
    throw std::invalid_argument("lu_joint_sim: dense factorization supports at most 2000 points");
  const double rho = estimate_rho(x.values, y.values, space);

  auto [gx, gy] = lu_gaussian_stage(grid, model_x, model_y, rho, rng.derive("noise"));

  return {Field(rank_back_transform(x.values, gx), grid),
          Field(rank_back_transform(y.values, gy), grid)};
}

} // namespace geosim
