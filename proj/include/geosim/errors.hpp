#pragma once

#include <stdexcept>
#include <string>

namespace geosim {

/// Numerical failure: non-finite intermediates, factorization breakdown.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Preconditions hold but the metric value is mathematically undefined for the
/// given inputs (e.g. correlation of a constant sequence).
class metric_undefined : public std::runtime_error {
public:
  explicit metric_undefined(const std::string& what) : std::runtime_error(what) {}
};

} // namespace geosim
