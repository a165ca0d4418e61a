#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace geosim {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Population variance (divides by n).
inline double variance(std::span<const double> xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("pearson: need at least two samples");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw std::invalid_argument("pearson: zero variance input");
  return sab / std::sqrt(saa * sbb);
}

/// Indices sorted by (value, index); the index tie-break keeps argsort stable
/// and deterministic for repeated values.
inline std::vector<int> argsort(std::span<const double> xs) {
  std::vector<int> idx(xs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (xs[static_cast<std::size_t>(a)] != xs[static_cast<std::size_t>(b)])
      return xs[static_cast<std::size_t>(a)] < xs[static_cast<std::size_t>(b)];
    return a < b;
  });
  return idx;
}

/// 1-based ranks with ties assigned the average rank of their run.
inline std::vector<double> average_ranks(std::span<const double> xs) {
  const auto idx = argsort(xs);
  const std::size_t n = xs.size();
  std::vector<double> ranks(n, 0.0);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos + 1;
    while (end < n && xs[static_cast<std::size_t>(idx[end])] ==
                          xs[static_cast<std::size_t>(idx[pos])])
      ++end;
    // ranks pos+1 .. end averaged over the tied run
    const double avg = 0.5 * (static_cast<double>(pos + 1) + static_cast<double>(end));
    for (std::size_t k = pos; k < end; ++k) ranks[static_cast<std::size_t>(idx[k])] = avg;
    pos = end;
  }
  return ranks;
}

/// Standard normal quantile, Wichura's PPND16 rational approximations.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        q * (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                   6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
               1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return num / den;
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

/// Rank-based normal scores: quantile at plotting position (rank - 0.5)/n,
/// with tied values sharing their averaged rank.
inline std::vector<double> normal_scores(std::span<const double> xs) {
  const auto ranks = average_ranks(xs);
  const double n = static_cast<double>(xs.size());
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = normal_quantile((ranks[i] - 0.5) / n);
  return out;
}

/// Maps a Gaussian sample back to the empirical marginal of `original`: the
/// r-th smallest gaussian value takes the r-th smallest original value, so the
/// output is an exact permutation of `original`.
inline std::vector<double> rank_back_transform(std::span<const double> original,
                                               std::span<const double> gaussian) {
  if (original.size() != gaussian.size())
    throw std::invalid_argument("rank_back_transform: length mismatch");
  std::vector<double> sorted(original.begin(), original.end());
  std::sort(sorted.begin(), sorted.end());
  const auto order = argsort(gaussian);
  std::vector<double> out(original.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    out[static_cast<std::size_t>(order[r])] = sorted[r];
  return out;
}

} // namespace geosim
