#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geosim/errors.hpp"
#include "geosim/stats.hpp"
#include "geosim/variogram.hpp"

namespace geosim {

/// Normalized 2-D histogram; total mass 1. Raw counts are kept so that
/// histograms with equal sample totals can be compared in exact integer
/// arithmetic.
struct Histogram2D {
  int bins_x = 0;
  int bins_y = 0;
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
  std::vector<double> mass;       // row-major, bins_x fast
  std::vector<long long> counts;  // same layout
  long long total = 0;

  [[nodiscard]] double at(int bx, int by) const {
    return mass[static_cast<std::size_t>(by) * static_cast<std::size_t>(bins_x) +
                static_cast<std::size_t>(bx)];
  }

  [[nodiscard]] bool same_geometry(const Histogram2D& other) const {
    return bins_x == other.bins_x && bins_y == other.bins_y && x_lo == other.x_lo &&
           x_hi == other.x_hi && y_lo == other.y_lo && y_hi == other.y_hi;
  }
};

/// Equal-width 2-D histogram with mass normalized to 1. Points on the upper
/// edge of either axis are counted in the last bin.
inline Histogram2D histogram2d(std::span<const double> xs, std::span<const double> ys, int bins,
                               std::pair<double, double> range_x,
                               std::pair<double, double> range_y) {
  if (xs.size() != ys.size()) throw std::invalid_argument("histogram2d: length mismatch");
  if (xs.empty()) throw std::invalid_argument("histogram2d: empty input");
  if (bins < 1) throw std::invalid_argument("histogram2d: bins must be positive");
  if (!(range_x.second > range_x.first) || !(range_y.second > range_y.first))
    throw std::invalid_argument("histogram2d: ranges must have positive width");

  Histogram2D h;
  h.bins_x = h.bins_y = bins;
  h.x_lo = range_x.first;
  h.x_hi = range_x.second;
  h.y_lo = range_y.first;
  h.y_hi = range_y.second;
  h.counts.assign(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0);

  const double wx = (h.x_hi - h.x_lo) / bins;
  const double wy = (h.y_hi - h.y_lo) / bins;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < h.x_lo || xs[i] > h.x_hi || ys[i] < h.y_lo || ys[i] > h.y_hi)
      throw std::invalid_argument("histogram2d: point outside the given ranges");
    int bx = std::min(static_cast<int>((xs[i] - h.x_lo) / wx), bins - 1);
    int by = std::min(static_cast<int>((ys[i] - h.y_lo) / wy), bins - 1);
    bx = std::max(0, bx);
    by = std::max(0, by);
    h.counts[static_cast<std::size_t>(by) * static_cast<std::size_t>(bins) +
             static_cast<std::size_t>(bx)] += 1;
  }
  h.total = static_cast<long long>(xs.size());
  h.mass.resize(h.counts.size());
  const double inv = 1.0 / static_cast<double>(h.total);
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    h.mass[i] = static_cast<double>(h.counts[i]) * inv;
  return h;
}

/// Histogram intersection: sum of elementwise minima. 1 means the binned
/// joint distributions coincide. Histograms with equal sample totals are
/// compared in integer count space, so identical histograms score exactly 1.
inline double shape_similarity(const Histogram2D& orig, const Histogram2D& sim) {
  if (!orig.same_geometry(sim))
    throw std::invalid_argument("shape_similarity: histograms have different bin geometry");
  if (orig.total == sim.total && orig.total > 0) {
    long long s = 0;
    for (std::size_t i = 0; i < orig.counts.size(); ++i)
      s += std::min(orig.counts[i], sim.counts[i]);
    return static_cast<double>(s) / static_cast<double>(orig.total);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < orig.mass.size(); ++i) s += std::min(orig.mass[i], sim.mass[i]);
  return s;
}

/// Pearson correlation of two empirical variograms over their common lags.
/// Both must come from the same lag configuration; lags present in only one
/// (dropped empty bins) are skipped.
inline double variogram_correlation(const EmpiricalVariogram& orig, const EmpiricalVariogram& sim) {
  std::vector<double> a, b;
  std::size_t io = 0, is = 0;
  while (io < orig.size() && is < sim.size()) {
    if (orig.lag_centers[io] == sim.lag_centers[is]) {
      a.push_back(orig.semivariances[io]);
      b.push_back(sim.semivariances[is]);
      ++io;
      ++is;
    } else if (orig.lag_centers[io] < sim.lag_centers[is]) {
      ++io;
    } else {
      ++is;
    }
  }
  if (a.size() < 3)
    throw metric_undefined("variogram_correlation: fewer than 3 common lags");
  try {
    return pearson(a, b);
  } catch (const std::invalid_argument&) {
    throw metric_undefined("variogram_correlation: zero variance semivariance sequence");
  }
}

/// One experiment cell's metrics.
struct MetricReport {
  double shape_similarity = 0.0;
  double r_gamma_x = 0.0;
  double r_gamma_y = 0.0;
  bool sinkhorn_converged = true;
};

} // namespace geosim
