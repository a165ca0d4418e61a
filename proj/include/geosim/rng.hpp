#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace geosim {

/// Deterministic counter-based generator (splitmix64 stream).
///
/// Independent consumers get their own sub-stream via derive(label). A derived
/// stream depends only on the parent key and the label, never on how many
/// values the parent has already produced, so experiment cells can be seeded
/// by fixed labels and reproduce identically in any execution order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  /// Independent sub-stream identified by a fixed label.
  [[nodiscard]] Rng derive(std::string_view label) const {
    return Rng(mix(mix(key_) ^ fnv1a(label)));
  }

  std::uint64_t next_u64() { return mix(key_ + ++counter_ * kGamma); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  std::vector<double> normals(std::size_t count) {
    std::vector<double> out(count);
    for (double& x : out) x = normal();
    return out;
  }

  /// +1.0 or -1.0 with equal probability.
  double random_sign() { return (next_u64() >> 63) != 0 ? 1.0 : -1.0; }

  /// Uniform integer in [0, bound); rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniformly random permutation of [0, n), Fisher-Yates.
  std::vector<int> permutation(int n) {
    if (n < 0) throw std::invalid_argument("Rng::permutation: n must be nonnegative");
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
      std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
    return p;
  }

private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ull;
    }
    return h;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace geosim
