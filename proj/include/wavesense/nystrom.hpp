#pragma once

// Nystrom discretization of the Helmholtz layer operators on a star-shaped
// boundary, with product quadrature for the logarithmic kernel singularity.
//
// Operators are the plain boundary integrals (no embedded factor 2):
//   S[phi](x)  = int Phi(x,y) phi(y) ds(y)
//   K[phi](x)  = int dPhi(x,y)/dn(y) phi(y) ds(y)
//   K'[phi](x) = int dPhi(x,y)/dn(x) phi(y) ds(y)
// with Phi(x,y) = (i/4) H0(k|x-y|). Every kernel M(t,tau) is split as
//   M = M1 ln(4 sin^2((t-tau)/2)) + M2
// with M1, M2 smooth; M1 is integrated by log_weights, M2 by the trapezoidal rule.

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesense/geometry.hpp"
#include "wavesense/linalg.hpp"
#include "wavesense/parallel.hpp"
#include "wavesense/special_functions.hpp"

namespace wavesense {

/// 2n equispaced parameter nodes t_j = pi j / n and the boundary frames there.
class NystromGrid {
 public:
  NystromGrid(Scatterer scatterer, std::size_t n_half)
      : scatterer_(std::move(scatterer)), n_half_(n_half) {
    if (n_half < 2) throw std::invalid_argument("NystromGrid: n_half must be >= 2");
    const std::size_t count = 2 * n_half;
    nodes_.resize(count);
    frames_.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
      nodes_[j] = std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_half);
      frames_.push_back(scatterer_.frame(nodes_[j]));
    }
  }

  const Scatterer& scatterer() const noexcept { return scatterer_; }
  std::size_t n_half() const noexcept { return n_half_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return std::numbers::pi / static_cast<double>(n_half_); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const BoundaryFrame> frames() const noexcept { return frames_; }
  const BoundaryFrame& frame(std::size_t j) const { return frames_[j]; }

  double max_speed() const {
    double m = 0.0;
    for (const auto& f : frames_) m = std::max(m, f.speed);
    return m;
  }

 private:
  Scatterer scatterer_;
  std::size_t n_half_;
  std::vector<double> nodes_;
  std::vector<BoundaryFrame> frames_;
};

/// Complex samples of a boundary unknown at the grid nodes.
struct SurfaceDensity {
  std::shared_ptr<const NystromGrid> grid;
  std::vector<ComplexValue> values;

  SurfaceDensity(std::shared_ptr<const NystromGrid> g, std::vector<ComplexValue> v)
      : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw std::invalid_argument("SurfaceDensity: null grid");
    if (values.size() != grid->size()) {
      throw std::invalid_argument("SurfaceDensity: length does not match grid");
    }
  }
};

inline std::shared_ptr<const NystromGrid> make_grid(Scatterer scatterer, std::size_t n_half) {
  return std::make_shared<const NystromGrid>(std::move(scatterer), n_half);
}

/// Product-quadrature weights R_j(t) for int_0^{2pi} ln(4 sin^2((t-tau)/2)) f(tau) dtau.
inline std::vector<double> log_weights(std::size_t n_half, double t) {
  if (n_half < 2) throw std::invalid_argument("log_weights: n_half must be >= 2");
  const double n = static_cast<double>(n_half);
  std::vector<double> w(2 * n_half);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double diff = t - std::numbers::pi * static_cast<double>(j) / n;
    double acc = 0.0;
    for (std::size_t m = 1; m < n_half; ++m) {
      acc += std::cos(static_cast<double>(m) * diff) / static_cast<double>(m);
    }
    w[j] = -(2.0 * std::numbers::pi / n) * acc - (std::numbers::pi / (n * n)) * std::cos(n * diff);
  }
  return w;
}

inline double log_sine_factor(double t, double tau) {
  const double s = std::sin(0.5 * (t - tau));
  return std::log(4.0 * s * s);
}

/// Logarithmic and smooth parts of a kernel at one (t, tau) pair.
struct KernelParts {
  ComplexValue log_part;
  ComplexValue smooth;
};

enum class DoubleLayerKind { kDouble, kTranspose };

namespace kernels {

inline constexpr double kInvFourPi = 1.0 / (4.0 * std::numbers::pi);

/// Single-layer kernel (i/4) H0(k rho) |chi'(tau)| for t != tau.
inline KernelParts single_layer(const BoundaryFrame& src, const special::Bessel01& b,
                                double log_factor) {
  const ComplexValue full = ComplexValue(0.0, 0.25) * b.h0() * src.speed;
  const double m1 = -kInvFourPi * b.j0 * src.speed;
  return {m1, full - m1 * log_factor};
}

inline KernelParts single_layer_diagonal(const BoundaryFrame& at, double k) {
  const double m1 = -kInvFourPi * at.speed;
  const ComplexValue m2 =
      ComplexValue(-special::detail::kEuler / (2.0 * std::numbers::pi) -
                       std::log(0.5 * k * at.speed) / (2.0 * std::numbers::pi),
                   0.25) *
      at.speed;
  return {m1, m2};
}

/// K (kDouble) or K' (kTranspose) kernel for t != tau.
inline KernelParts double_layer(const BoundaryFrame& at, const BoundaryFrame& src, double k,
                                DoubleLayerKind kind, const special::Bessel01& b, double rho,
                                double log_factor) {
  const Vec2 diff = at.position - src.position;
  const double w =
      kind == DoubleLayerKind::kDouble ? dot(diff, src.normal) : -dot(diff, at.normal);
  const double geom = w / rho * src.speed;
  const ComplexValue full = ComplexValue(0.0, 0.25 * k) * b.h1() * geom;
  const double l1 = -k * kInvFourPi * b.j1 * geom;
  return {l1, full - l1 * log_factor};
}

/// Curvature limit of the smooth double-layer part; identical for K and K'.
inline KernelParts double_layer_diagonal(const BoundaryFrame& at) {
  return {0.0, -kInvFourPi * cross(at.d1, at.d2) / (at.speed * at.speed)};
}

}  // namespace kernels

/// Single-layer kernel split at arbitrary (t, tau); diagonal limit when the frames coincide.
inline KernelParts single_layer_parts(const BoundaryFrame& at, const BoundaryFrame& src, double k) {
  const double rho = norm(at.position - src.position);
  if (rho == 0.0) return kernels::single_layer_diagonal(at, k);
  return kernels::single_layer(src, special::bessel01(k * rho),
                               log_sine_factor(at.theta, src.theta));
}

/// K or K' kernel split at arbitrary (t, tau); diagonal limit when the frames coincide.
inline KernelParts double_layer_parts(const BoundaryFrame& at, const BoundaryFrame& src, double k,
                                      DoubleLayerKind kind) {
  const double rho = norm(at.position - src.position);
  if (rho == 0.0) return kernels::double_layer_diagonal(at);
  return kernels::double_layer(at, src, k, kind, special::bessel01(k * rho), rho,
                               log_sine_factor(at.theta, src.theta));
}

/// Coefficients of c_I I + c_S S + c_D D, D being K or K'.
struct OperatorCombination {
  ComplexValue identity{1.0, 0.0};
  ComplexValue single{0.0, 0.0};
  ComplexValue dbl{0.0, 0.0};
  DoubleLayerKind kind = DoubleLayerKind::kTranspose;
};

namespace detail {

inline void check_wavenumber(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("wavenumber must be positive and finite");
  }
}

// Weights and log factors depend only on (i - j) mod 2n.
struct DifferenceTables {
  std::vector<double> log_weight;
  std::vector<double> log_factor;
};

inline DifferenceTables difference_tables(const NystromGrid& grid) {
  DifferenceTables tables;
  tables.log_weight = log_weights(grid.n_half(), 0.0);
  // R_j(0) is a function of t_0 - t_j; index by (i - j) mod 2n instead
  const std::size_t m = grid.size();
  std::vector<double> by_diff(m);
  for (std::size_t d = 0; d < m; ++d) by_diff[d] = tables.log_weight[(m - d) % m];
  tables.log_weight = std::move(by_diff);
  tables.log_factor.resize(m, 0.0);
  for (std::size_t d = 1; d < m; ++d) {
    tables.log_factor[d] = log_sine_factor(grid.nodes()[d], 0.0);
  }
  return tables;
}

}  // namespace detail

/// Matrix of c_I I + c_S S + c_D D on the grid, assembled row-parallel.
inline DenseComplexMatrix assemble_combination(const NystromGrid& grid, double k,
                                               const OperatorCombination& combo) {
  detail::check_wavenumber(k);
  const std::size_t m = grid.size();
  const detail::DifferenceTables tables = detail::difference_tables(grid);
  const double trap = grid.spacing();
  const bool need_single = combo.single != ComplexValue{};
  const bool need_double = combo.dbl != ComplexValue{};

  DenseComplexMatrix a(m, m);
  parallel_for(m, [&](std::size_t i) {
    const BoundaryFrame& fi = grid.frame(i);
    auto row = a.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      const BoundaryFrame& fj = grid.frame(j);
      const std::size_t d = (i + m - j) % m;
      ComplexValue log_part{}, smooth{};
      if (i == j) {
        if (need_single) {
          const KernelParts s = kernels::single_layer_diagonal(fi, k);
          log_part += combo.single * s.log_part;
          smooth += combo.single * s.smooth;
        }
        if (need_double) smooth += combo.dbl * kernels::double_layer_diagonal(fi).smooth;
        row[j] = combo.identity + tables.log_weight[d] * log_part + trap * smooth;
        continue;
      }
      if (!need_single && !need_double) {
        row[j] = 0.0;
        continue;
      }
      const double rho = norm(fi.position - fj.position);
      const special::Bessel01 b = special::bessel01(k * rho);
      const double lf = tables.log_factor[d];
      if (need_single) {
        const KernelParts s = kernels::single_layer(fj, b, lf);
        log_part += combo.single * s.log_part;
        smooth += combo.single * s.smooth;
      }
      if (need_double) {
        const KernelParts dl = kernels::double_layer(fi, fj, k, combo.kind, b, rho, lf);
        log_part += combo.dbl * dl.log_part;
        smooth += combo.dbl * dl.smooth;
      }
      row[j] = tables.log_weight[d] * log_part + trap * smooth;
    }
  });
  return a;
}

inline DenseComplexMatrix assemble_single_layer(const NystromGrid& grid, double k) {
  return assemble_combination(grid, k, {.identity = 0.0, .single = 1.0});
}

inline DenseComplexMatrix assemble_double_layer(const NystromGrid& grid, double k, bool transpose) {
  return assemble_combination(
      grid, k,
      {.identity = 0.0,
       .dbl = 1.0,
       .kind = transpose ? DoubleLayerKind::kTranspose : DoubleLayerKind::kDouble});
}

/// A = I + 2K' - ik S (direct combined-field operator for the Neumann trace).
inline DenseComplexMatrix assemble_forward_system(const NystromGrid& grid, double k) {
  return assemble_combination(grid, k,
                              {.identity = 1.0,
                               .single = ComplexValue(0.0, -k),
                               .dbl = 2.0,
                               .kind = DoubleLayerKind::kTranspose});
}

/// A* = I + 2K + 2ik S (indirect combined-field operator, coupling parameter k).
inline DenseComplexMatrix assemble_indirect_system(const NystromGrid& grid, double k) {
  return assemble_combination(grid, k,
                              {.identity = 1.0,
                               .single = ComplexValue(0.0, 2.0 * k),
                               .dbl = 2.0,
                               .kind = DoubleLayerKind::kDouble});
}

/// Nystrom interpolation weights of S at an arbitrary boundary angle t:
/// S[phi](chi(t)) ~= sum_j w_j phi_j.
inline std::vector<ComplexValue> single_layer_row(const NystromGrid& grid, double k, double t) {
  detail::check_wavenumber(k);
  const BoundaryFrame at = grid.scatterer().frame(t);
  const std::vector<double> rw = log_weights(grid.n_half(), t);
  std::vector<ComplexValue> row(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const KernelParts s = single_layer_parts(at, grid.frame(j), k);
    row[j] = rw[j] * s.log_part + grid.spacing() * s.smooth;
  }
  return row;
}

}  // namespace wavesense
