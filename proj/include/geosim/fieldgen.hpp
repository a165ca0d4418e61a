#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geosim/errors.hpp"
#include "geosim/fft.hpp"
#include "geosim/field.hpp"
#include "geosim/grid.hpp"
#include "geosim/rng.hpp"
#include "geosim/variogram.hpp"

namespace geosim {

/// Unconditional Gaussian field by spectral filtering of white noise.
///
/// The target covariance is laid out on a (2nx)x(2ny) wrap-around embedding
/// grid, its DFT gives the spectral density (negative values are clipped to
/// zero), and the field is the real part of F^-1{sqrt(S) * F{W}} cropped back
/// to nx x ny. The crop is finally standardized to sample mean 0 and sample
/// variance equal to the sill; "sample variance" divides by n throughout.
inline Field fftma_field(const Grid2D& grid, const VariogramModel& model, Rng rng) {
  const int mx = 2 * grid.nx;
  const int my = 2 * grid.ny;
  const std::size_t m = static_cast<std::size_t>(mx) * static_cast<std::size_t>(my);

  fft::cvec spectrum(m);
  for (int j = 0; j < my; ++j) {
    const int wj = std::min(j, my - j);
    for (int i = 0; i < mx; ++i) {
      const int wi = std::min(i, mx - i);
      const double h = grid.spacing * std::hypot(static_cast<double>(wi), static_cast<double>(wj));
      spectrum[static_cast<std::size_t>(j) * static_cast<std::size_t>(mx) +
               static_cast<std::size_t>(i)] = covariance(model, h);
    }
  }
  fft::transform_2d(spectrum, mx, my, false);

  std::vector<double> amplitude(m);
  for (std::size_t k = 0; k < m; ++k)
    amplitude[k] = std::sqrt(std::max(0.0, spectrum[k].real()));

  fft::cvec noise(m);
  for (std::size_t k = 0; k < m; ++k) noise[k] = rng.normal();
  fft::transform_2d(noise, mx, my, false);
  for (std::size_t k = 0; k < m; ++k) noise[k] *= amplitude[k];
  fft::transform_2d(noise, mx, my, true);

  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      out[static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.nx) +
          static_cast<std::size_t>(i)] =
          noise[static_cast<std::size_t>(j) * static_cast<std::size_t>(mx) +
                static_cast<std::size_t>(i)]
              .real();

  double mean = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(out.size());
  double var = 0.0;
  for (double& v : out) {
    v -= mean;
    var += v * v;
  }
  var /= static_cast<double>(out.size());
  if (!(var > 0.0)) throw numeric_error("fftma_field: simulated field has zero variance");
  const double scale = std::sqrt(model.sill / var);
  for (double& v : out) v *= scale;

  return Field(std::move(out), grid);
}

enum class RelationshipKind { Step, GaussianMix, Sinusoidal, StepRandom, Heteroscedastic };

inline constexpr RelationshipKind kAllRelationships[] = {
    RelationshipKind::Step, RelationshipKind::GaussianMix, RelationshipKind::Sinusoidal,
    RelationshipKind::StepRandom, RelationshipKind::Heteroscedastic};

inline std::string_view relationship_id(RelationshipKind kind) {
  switch (kind) {
    case RelationshipKind::Step: return "step";
    case RelationshipKind::GaussianMix: return "gaussian_mix";
    case RelationshipKind::Sinusoidal: return "sinusoidal";
    case RelationshipKind::StepRandom: return "step_random";
    case RelationshipKind::Heteroscedastic: return "heteroscedastic";
  }
  throw std::invalid_argument("relationship_id: unknown kind");
}

inline RelationshipKind parse_relationship(std::string_view id) {
  for (RelationshipKind kind : kAllRelationships)
    if (relationship_id(kind) == id) return kind;
  throw std::invalid_argument("unknown relationship '" + std::string(id) + "'");
}

/// A bivariate relationship form plus the amplitude of its structured noise.
struct Relationship {
  RelationshipKind kind = RelationshipKind::Step;
  double noise_scale = 0.1;

  Relationship(RelationshipKind kind_, double noise_scale_ = 0.1)
      : kind(kind_), noise_scale(noise_scale_) {
    if (!(noise_scale >= 0.0))
      throw std::invalid_argument("Relationship: noise_scale must be nonnegative");
  }
};

/// Builds Y pointwise from X. The noise term eps_i = noise_scale * y_raw_i is
/// sourced from the structured field y_raw, so Y inherits spatial continuity;
/// StepRandom instead flips signs i.i.d. from rng and carries no additive
/// noise. sign(0) counts as +1.
inline Field make_relationship(const Field& x, const Field& y_raw, const Relationship& rel,
                               Rng rng) {
  if (!(x.grid == y_raw.grid))
    throw std::invalid_argument("make_relationship: fields live on different grids");

  const std::size_t n = x.values.size();
  std::vector<double> out(n);
  const auto sign = [](double v) { return v >= 0.0 ? 1.0 : -1.0; };

  switch (rel.kind) {
    case RelationshipKind::Step:
      for (std::size_t i = 0; i < n; ++i)
        out[i] = 0.8 * sign(x.values[i]) + rel.noise_scale * y_raw.values[i];
      break;
    case RelationshipKind::GaussianMix:
      for (std::size_t i = 0; i < n; ++i)
        out[i] = sign(y_raw.values[i]) * x.values[i] + rel.noise_scale * y_raw.values[i];
      break;
    case RelationshipKind::Sinusoidal:
      for (std::size_t i = 0; i < n; ++i)
        out[i] = std::sin(2.0 * std::numbers::pi * x.values[i]) +
                 rel.noise_scale * y_raw.values[i];
      break;
    case RelationshipKind::StepRandom:
      for (std::size_t i = 0; i < n; ++i) out[i] = rng.random_sign() * x.values[i];
      break;
    case RelationshipKind::Heteroscedastic:
      for (std::size_t i = 0; i < n; ++i)
        out[i] = x.values[i] + std::abs(x.values[i]) * rel.noise_scale * y_raw.values[i];
      break;
  }
  return Field(std::move(out), x.grid);
}

/// X from model_x, the structured noise source from model_y, then Y per the
/// relationship form. Sub-streams are derived by fixed labels, so the result
/// depends only on (grid, models, relationship, seed).
inline std::pair<Field, Field> generate_pair(const Grid2D& grid, const VariogramModel& model_x,
                                             const VariogramModel& model_y, const Relationship& rel,
                                             const Rng& rng) {
  Field x = fftma_field(grid, model_x, rng.derive("fftma_x"));
  Field y_raw = fftma_field(grid, model_y, rng.derive("fftma_y"));
  Field y = make_relationship(x, y_raw, rel, rng.derive("relationship"));
  return {std::move(x), std::move(y)};
}

} // namespace geosim
