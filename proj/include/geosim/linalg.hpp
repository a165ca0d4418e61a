#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace geosim {

/// Minimal dense row-major matrix; just enough for the transport and baseline
/// solvers at desk scale.
class Matrix {
public:
  Matrix() = default;

  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimensions");
  }

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(j)];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(j)];
  }

  double* row(int i) {
    return data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_);
  }
  const double* row(int i) const {
    return data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_);
  }

  [[nodiscard]] std::vector<double>& data() { return data_; }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// In-place lower Cholesky of a symmetric positive definite matrix; the upper
/// triangle is zeroed. Returns false if a pivot fails to stay positive.
inline bool cholesky_in_place(Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix must be square");
  const int n = a.rows();
  for (int j = 0; j < n; ++j) {
    const double* rj = a.row(j);
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= rj[k] * rj[k];
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      const double* ri = a.row(i);
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= ri[k] * rj[k];
      a(i, j) = s / ljj;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return true;
}

} // namespace geosim
