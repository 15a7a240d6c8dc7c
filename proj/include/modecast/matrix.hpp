#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modecast {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

/// Non-owning read view of row-major data; converts implicitly from Matrix.
struct MatrixView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  const double* data = nullptr;

  MatrixView() = default;
  MatrixView(const Matrix& m) : rows(m.rows), cols(m.cols), data(m.data.data()) {}
  MatrixView(std::size_t r, std::size_t c, const double* d)
      : rows(r), cols(c), data(d) {}

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data + r * cols, cols};
  }
};

}  // namespace modecast
