#pragma once

// Singular value decomposition of the entrywise-modulus sensitivity matrix |J|.
// Left singular vectors live on the knots (shape modes), right singular vectors on
// the flattened incidence x observation grid (far-field modes).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesense/linalg.hpp"
#include "wavesense/shape_derivative.hpp"

namespace wavesense {

/// Thin SVD M = sum_i sigma_i u_i v_i^T with sigma non-increasing.
struct SvdModes {
  std::vector<double> singular_values;
  /// u_i, each of length rows(M)
  std::vector<std::vector<double>> shape_vectors;
  /// v_i, each of length cols(M)
  std::vector<std::vector<double>> farfield_vectors;
  /// sigma_i v_i
  std::vector<std::vector<double>> scaled_farfield;

  std::size_t size() const noexcept { return singular_values.size(); }
};

/// Entrywise |J_ij|.
inline DenseRealMatrix modulus_matrix(const DenseComplexMatrix& j) {
  DenseRealMatrix m(j.rows(), j.cols());
  for (std::size_t r = 0; r < j.rows(); ++r)
    for (std::size_t c = 0; c < j.cols(); ++c) m(r, c) = std::abs(j(r, c));
  return m;
}

inline DenseRealMatrix modulus_matrix(const JacobianMatrix& j) { return modulus_matrix(j.entries); }

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Gram-Schmidt (two passes) of v against the first `count` vectors of basis.
inline void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis,
                          std::size_t count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t b = 0; b < count; ++b) {
      const double p = dot(v, basis[b]);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * basis[b][i];
    }
  }
}

// Replace vectors flagged as undetermined by an orthonormal completion.
inline void complete_basis(std::vector<std::vector<double>>& vecs, const std::vector<bool>& missing) {
  const std::size_t len = vecs.empty() ? 0 : vecs.front().size();
  std::size_t next_axis = 0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    if (!missing[i]) continue;
    while (next_axis < len) {
      std::vector<double> e(len, 0.0);
      e[next_axis++] = 1.0;
      orthogonalize(e, vecs, i);
      for (std::size_t j = i + 1; j < vecs.size(); ++j) {
        if (missing[j]) continue;
        const double p = dot(e, vecs[j]);
        for (std::size_t t = 0; t < len; ++t) e[t] -= p * vecs[j][t];
      }
      const double n = std::sqrt(dot(e, e));
      if (n > 1e-8) {
        for (double& x : e) x /= n;
        vecs[i] = std::move(e);
        break;
      }
    }
  }
}

// One-sided Jacobi on the columns of a tall matrix given column-wise:
// rotates columns until mutually orthogonal, accumulating rotations in w.
inline void one_sided_jacobi(std::vector<std::vector<double>>& cols,
                             std::vector<std::vector<double>>& w) {
  const std::size_t p = cols.size();
  constexpr double tol = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double alpha = dot(cols[i], cols[i]);
        const double beta = dot(cols[j], cols[j]);
        const double gamma = dot(cols[i], cols[j]);
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        auto rotate = [c, s](std::vector<double>& a, std::vector<double>& b) {
          for (std::size_t k = 0; k < a.size(); ++k) {
            const double ak = a[k];
            const double bk = b[k];
            a[k] = c * ak - s * bk;
            b[k] = s * ak + c * bk;
          }
        };
        rotate(cols[i], cols[j]);
        rotate(w[i], w[j]);
      }
    }
    if (!rotated) return;
  }
}

}  // namespace detail

/// Thin SVD by one-sided Jacobi on the tall orientation of M. Each u_i is signed so
/// that its largest-magnitude entry is positive.
inline SvdModes svd(const DenseRealMatrix& m) {
  if (m.rows() > 64) {
    throw std::invalid_argument("svd: at most 64 rows supported, got " + std::to_string(m.rows()));
  }
  if (!m.all_finite()) throw std::invalid_argument("svd: matrix has non-finite entries");
  const bool wide = m.rows() <= m.cols();
  // tall matrix A (len x p) stored by columns
  const std::size_t p = wide ? m.rows() : m.cols();
  const std::size_t len = wide ? m.cols() : m.rows();
  std::vector<std::vector<double>> cols(p, std::vector<double>(len));
  std::vector<std::vector<double>> w(p, std::vector<double>(p, 0.0));
  for (std::size_t c = 0; c < p; ++c) {
    w[c][c] = 1.0;
    for (std::size_t r = 0; r < len; ++r) cols[c][r] = wide ? m(c, r) : m(r, c);
  }
  detail::one_sided_jacobi(cols, w);

  std::vector<double> sigma(p);
  for (std::size_t c = 0; c < p; ++c) sigma[c] = std::sqrt(detail::dot(cols[c], cols[c]));
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  const double top = p > 0 ? sigma[order[0]] : 0.0;
  std::vector<std::vector<double>> left_a(p), right_a(p);  // singular vectors of A
  std::vector<bool> missing(p, false);
  SvdModes out;
  for (std::size_t idx = 0; idx < p; ++idx) {
    const std::size_t c = order[idx];
    out.singular_values.push_back(sigma[c]);
    right_a[idx] = w[c];
    left_a[idx] = cols[c];
    if (sigma[c] > 0.0 && sigma[c] > 1e-300 * top) {
      for (double& x : left_a[idx]) x /= sigma[c];
    } else {
      missing[idx] = true;
    }
  }
  detail::complete_basis(left_a, missing);

  // M = A^T when wide: shape vectors are the right vectors of A
  out.shape_vectors = wide ? std::move(right_a) : std::move(left_a);
  out.farfield_vectors = wide ? std::move(left_a) : std::move(right_a);

  for (std::size_t i = 0; i < p; ++i) {
    auto& u = out.shape_vectors[i];
    const auto big = std::max_element(u.begin(), u.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    if (big != u.end() && *big < 0.0) {
      for (double& x : u) x = -x;
      for (double& x : out.farfield_vectors[i]) x = -x;
    }
    std::vector<double> scaled = out.farfield_vectors[i];
    for (double& x : scaled) x *= out.singular_values[i];
    out.scaled_farfield.push_back(std::move(scaled));
  }
  return out;
}

struct IncidenceBlocks {
  /// per-incidence segments of v_i (or sigma_i v_i)
  std::vector<std::vector<double>> blocks;
  /// squared segments, the plotted cross sections
  std::vector<std::vector<double>> squared;
};

/// Splits far-field mode `mode` into n_inc segments of length n_obs.
inline IncidenceBlocks incidence_blocks(const SvdModes& modes, std::size_t mode, std::size_t n_inc,
                                        std::size_t n_obs, bool scaled = true) {
  if (mode >= modes.size()) {
    throw std::out_of_range("incidence_blocks: mode index " + std::to_string(mode) +
                            " out of range");
  }
  const auto& v = scaled ? modes.scaled_farfield[mode] : modes.farfield_vectors[mode];
  if (v.size() != n_inc * n_obs) {
    throw std::invalid_argument("incidence_blocks: n_inc * n_obs does not match vector length");
  }
  IncidenceBlocks out;
  for (std::size_t l = 0; l < n_inc; ++l) {
    std::vector<double> block(v.begin() + static_cast<std::ptrdiff_t>(l * n_obs),
                              v.begin() + static_cast<std::ptrdiff_t>((l + 1) * n_obs));
    std::vector<double> sq(block.size());
    std::transform(block.begin(), block.end(), sq.begin(), [](double x) { return x * x; });
    out.blocks.push_back(std::move(block));
    out.squared.push_back(std::move(sq));
  }
  return out;
}

/// sigma_k / sigma_1 for k = 2..p.
inline std::vector<double> decay_metrics(const SvdModes& modes) {
  if (modes.size() < 2) throw std::invalid_argument("decay_metrics: need at least 2 modes");
  const double s1 = modes.singular_values.front();
  std::vector<double> ratios;
  for (std::size_t k = 1; k < modes.size(); ++k) {
    ratios.push_back(s1 > 0.0 ? modes.singular_values[k] / s1 : 0.0);
  }
  return ratios;
}

}  // namespace wavesense
