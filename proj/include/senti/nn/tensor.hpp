#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "senti/error.hpp"

namespace senti::nn {

template <class T>
using Tensor1 = std::vector<T>;

// Row-major matrix with explicit shape.
template <class T>
struct Tensor2 {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Tensor2() = default;
  Tensor2(std::size_t r, std::size_t c, T fill = T(0)) : rows(r), cols(c), data(r * c, fill) {}

  T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<T> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const T> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor2& o) const { return rows == o.rows && cols == o.cols; }
};

inline void require_shape(bool ok, const std::string& what) {
  if (!ok) throw InputError("shape mismatch: " + what);
}

template <class T>
bool all_finite(std::span<const T> xs) {
  for (T x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

// y = W x (+ y when accumulate), double accumulation.
template <class T, class U>
void matvec(const Tensor2<T>& w, std::span<const U> x, std::span<double> y) {
  for (std::size_t r = 0; r < w.rows; ++r) {
    const T* wr = w.data.data() + r * w.cols;
    double s = 0.0;
    for (std::size_t c = 0; c < w.cols; ++c) s += static_cast<double>(wr[c]) * static_cast<double>(x[c]);
    y[r] += s;
  }
}

// y += W^T x
template <class T>
void matvec_t(const Tensor2<T>& w, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < w.rows; ++r) {
    const T* wr = w.data.data() + r * w.cols;
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t c = 0; c < w.cols; ++c) y[c] += static_cast<double>(wr[c]) * xr;
  }
}

// G += a b^T
template <class U>
void outer_add(Tensor2<double>& g, std::span<const double> a, std::span<const U> b) {
  for (std::size_t r = 0; r < g.rows; ++r) {
    const double ar = a[r];
    if (ar == 0.0) continue;
    double* gr = g.data.data() + r * g.cols;
    for (std::size_t c = 0; c < g.cols; ++c) gr[c] += ar * static_cast<double>(b[c]);
  }
}

}  // namespace senti::nn
