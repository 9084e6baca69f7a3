#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/errors.hpp"

namespace vc {

// Dense row-major matrix of doubles. Sized for the desk-scale shapes this
// project works with (hundreds of rows, hundreds of columns).
class Matrix {
public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  size_t size() const { return data_.size(); }

  void fill(double v) { data_.assign(data_.size(), v); }

private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// C = A * B
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::ShapeMismatch,
          "matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.data() + k * b.cols();
      double* crow = c.data() + i * c.cols();
      for (size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

// C = A^T * B
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), ErrorCode::ShapeMismatch,
          "matmul_tn: row counts differ");
  Matrix c(a.cols(), b.cols());
  for (size_t k = 0; k < a.rows(); ++k) {
    for (size_t i = 0; i < a.cols(); ++i) {
      double aki = a(k, i);
      if (aki == 0.0) continue;
      const double* brow = b.data() + k * b.cols();
      double* crow = c.data() + i * c.cols();
      for (size_t j = 0; j < b.cols(); ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

// C = A * B^T
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), ErrorCode::ShapeMismatch,
          "matmul_nt: column counts differ");
  Matrix c(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      const double* arow = a.data() + i * a.cols();
      const double* brow = b.data() + j * b.cols();
      for (size_t k = 0; k < a.cols(); ++k) s += arow[k] * brow[k];
      c(i, j) = s;
    }
  }
  return c;
}

inline void add_inplace(Matrix& dst, const Matrix& src) {
  require(dst.rows() == src.rows() && dst.cols() == src.cols(),
          ErrorCode::ShapeMismatch, "add_inplace: shape mismatch");
  for (size_t i = 0; i < dst.size(); ++i) dst.data()[i] += src.data()[i];
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::LengthMismatch,
          "dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace vc
