#pragma once
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace pigan {

// Dense row-major matrix of doubles. A column vector is n x 1, a scalar 1 x 1.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> d)
      : rows(r), cols(c), data(std::move(d)) {
    assert(data.size() == rows * cols);
  }

  static Matrix scalar(double v) { return Matrix(1, 1, {v}); }
  static Matrix column(std::vector<double> v) {
    const std::size_t n = v.size();
    return Matrix(n, 1, std::move(v));
  }
  static Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, c); }
  static Matrix filled(std::size_t r, std::size_t c, double v) {
    Matrix m(r, c);
    std::fill(m.data.begin(), m.data.end(), v);
    return m;
  }

  std::size_t size() const { return rows * cols; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

}  // namespace pigan
