#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "wavesense/errors.hpp"

namespace wavesense {

/// Row-major dense matrix.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::vector<T> apply(std::span<const T> x) const {
    if (x.size() != cols_) throw std::invalid_argument("matrix apply: size mismatch");
    std::vector<T> y(rows_, T{});
    for (std::size_t i = 0; i < rows_; ++i) {
      T acc{};
      const T* r = data_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool all_finite() const {
    for (const T& v : data_) {
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) return false;
      } else {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      }
    }
    return true;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using DenseComplexMatrix = DenseMatrix<std::complex<double>>;
using DenseRealMatrix = DenseMatrix<double>;

/// LU factorization with partial pivoting, PA = LU stored in place.
template <class T>
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw std::invalid_argument("LU: matrix must be square");
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best == 0.0) throw SingularMatrixError(k);
      if (p != k) {
        std::swap(perm_[p], perm_[k]);
        auto rk = lu_.row(k);
        auto rp = lu_.row(p);
        std::swap_ranges(rk.begin(), rk.end(), rp.begin());
      }
      const T pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const T l = lu_(i, k) / pivot;
        lu_(i, k) = l;
        if (l == T{}) continue;
        T* ri = lu_.row(i).data();
        const T* rk = lu_.row(k).data();
        for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  std::vector<T> solve(std::span<const T> b) const {
    const std::size_t n = size();
    if (b.size() != n) throw std::invalid_argument("LU solve: right-hand side size mismatch");
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i) {
      T acc = x[i];
      const T* ri = lu_.row(i).data();
      for (std::size_t j = 0; j < i; ++j) acc -= ri[j] * x[j];
      x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
      T acc = x[i];
      const T* ri = lu_.row(i).data();
      for (std::size_t j = i + 1; j < n; ++j) acc -= ri[j] * x[j];
      x[i] = acc / ri[i];
    }
    return x;
  }

 private:
  DenseMatrix<T> lu_;
  std::vector<std::size_t> perm_;
};

template <class T>
std::vector<T> solve_dense(const DenseMatrix<T>& a, std::span<const T> rhs) {
  return LuFactorization<T>(a).solve(rhs);
}

}  // namespace wavesense
