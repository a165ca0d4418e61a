#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "geosim/field.hpp"
#include "geosim/grid.hpp"

namespace geosim {

enum class VariogramKind { Spherical, Exponential };

/// Bounded two-parameter variogram model: sill C0 and range a.
struct VariogramModel {
  VariogramKind kind = VariogramKind::Spherical;
  double sill = 1.0;
  double range = 1.0;

  VariogramModel(VariogramKind kind_, double sill_, double range_)
      : kind(kind_), sill(sill_), range(range_) {
    if (!(sill > 0.0)) throw std::invalid_argument("VariogramModel: sill must be positive");
    if (!(range > 0.0)) throw std::invalid_argument("VariogramModel: range must be positive");
  }

  friend bool operator==(const VariogramModel&, const VariogramModel&) = default;
};

/// gamma(h). Spherical: C0*[3h/(2a) - (h/a)^3/2] for h <= a, else C0.
/// Exponential: C0*[1 - exp(-3h/a)], reaching ~95% of the sill at h = a.
inline double evaluate(const VariogramModel& model, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("variogram evaluate: lag must be nonnegative");
  switch (model.kind) {
    case VariogramKind::Spherical: {
      if (h >= model.range) return model.sill;
      const double t = h / model.range;
      return model.sill * (1.5 * t - 0.5 * t * t * t);
    }
    case VariogramKind::Exponential:
      return model.sill * (1.0 - std::exp(-3.0 * h / model.range));
  }
  throw std::invalid_argument("variogram evaluate: unknown model kind");
}

/// C(h) = sill - gamma(h).
inline double covariance(const VariogramModel& model, double h) {
  return model.sill - evaluate(model, h);
}

/// Empirical omnidirectional variogram on equal-width lag bins.
/// Bins that received no pairs are dropped, so the three lists stay aligned.
struct EmpiricalVariogram {
  std::vector<double> lag_centers;
  std::vector<double> semivariances;
  std::vector<long long> pair_counts;

  [[nodiscard]] std::size_t size() const { return lag_centers.size(); }
};

/// Accumulates 0.5*(z_i - z_j)^2 for every unordered point pair with distance
/// in (0, max_lag], binned into n_lags half-open intervals ((m-1)w, mw] of
/// width w = max_lag / n_lags. Empty bins are dropped.
inline EmpiricalVariogram empirical_variogram(std::span<const double> values, const Grid2D& grid,
                                              int n_lags, double max_lag) {
  if (values.size() != static_cast<std::size_t>(grid.size()))
    throw std::invalid_argument("empirical_variogram: field and grid sizes differ");
  if (n_lags < 2) throw std::invalid_argument("empirical_variogram: need at least two lag bins");
  if (!(max_lag > 0.0)) throw std::invalid_argument("empirical_variogram: max_lag must be positive");

  const auto pts = coordinates(grid);
  const int n = grid.size();
  const double width = max_lag / n_lags;

  std::vector<double> sums(static_cast<std::size_t>(n_lags), 0.0);
  std::vector<long long> counts(static_cast<std::size_t>(n_lags), 0);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = pts[static_cast<std::size_t>(i)].x - pts[static_cast<std::size_t>(j)].x;
      const double dy = pts[static_cast<std::size_t>(i)].y - pts[static_cast<std::size_t>(j)].y;
      const double d = std::hypot(dx, dy);
      if (d > max_lag) continue;
      int bin = static_cast<int>(std::ceil(d / width)) - 1;
      bin = std::max(0, std::min(bin, n_lags - 1));
      const double diff = values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)];
      sums[static_cast<std::size_t>(bin)] += 0.5 * diff * diff;
      counts[static_cast<std::size_t>(bin)] += 1;
    }
  }

  EmpiricalVariogram out;
  for (int b = 0; b < n_lags; ++b) {
    if (counts[static_cast<std::size_t>(b)] == 0) continue;
    out.lag_centers.push_back((b + 0.5) * width);
    out.semivariances.push_back(sums[static_cast<std::size_t>(b)] /
                                static_cast<double>(counts[static_cast<std::size_t>(b)]));
    out.pair_counts.push_back(counts[static_cast<std::size_t>(b)]);
  }
  return out;
}

inline EmpiricalVariogram empirical_variogram(const Field& field, const Grid2D& grid, int n_lags,
                                              double max_lag) {
  return empirical_variogram(std::span<const double>(field.values), grid, n_lags, max_lag);
}

inline EmpiricalVariogram empirical_variogram(const Field& field, int n_lags, double max_lag) {
  return empirical_variogram(std::span<const double>(field.values), field.grid, n_lags, max_lag);
}

} // namespace geosim
