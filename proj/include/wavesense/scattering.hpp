#pragma once

// Sound-soft forward scattering of a plane wave: the Neumann trace of the total
// field from the direct combined-field equation
//   (I + 2K' - ik S)[du/dn] = 2 du_inc/dn - ik u_inc,
// the scattered field u_sc = -S[du/dn], and far-field patterns normalised as
//   u_sc(x) = e^{ik|x|} / sqrt|x| (u_inf(x^) + O(1/|x|)).

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "wavesense/geometry.hpp"
#include "wavesense/linalg.hpp"
#include "wavesense/nystrom.hpp"
#include "wavesense/parallel.hpp"
#include "wavesense/special_functions.hpp"

namespace wavesense {

/// Wavenumber together with the dimensionless frequency ka it was derived from.
struct WaveContext {
  double k = 0.0;
  double ka = 0.0;
  double a = 0.0;

  /// k = ka / a with a the circumscribing diameter of sc.
  static WaveContext from_ka(const Scatterer& sc, double ka) {
    if (!(ka > 0.0) || !std::isfinite(ka)) throw std::invalid_argument("ka must be positive");
    const double a = circumscribing_diameter(sc);
    return {ka / a, ka, a};
  }

  /// Fixed wavenumber; ka is reported against the scatterer's diameter.
  static WaveContext from_k(const Scatterer& sc, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("k must be positive");
    const double a = circumscribing_diameter(sc);
    return {k, k * a, a};
  }
};

/// Plane wave exp(ik x.d) travelling along the unit vector d.
class IncidentWave {
 public:
  explicit IncidentWave(Vec2 direction) : direction_(direction) {
    if (std::abs(norm(direction) - 1.0) > 1e-12) {
      throw std::invalid_argument("incident direction must be a unit vector");
    }
  }

  static IncidentWave from_angle(double angle) { return IncidentWave(radial_unit(angle)); }

  Vec2 direction() const noexcept { return direction_; }
  double angle() const { return std::atan2(direction_.y, direction_.x); }

  ComplexValue value(Vec2 x, double k) const {
    return std::exp(ComplexValue(0.0, k * dot(x, direction_)));
  }

 private:
  Vec2 direction_;
};

struct FarFieldPattern {
  std::vector<double> obs_angles;
  std::vector<ComplexValue> values;
};

/// n equispaced angles 2*pi*j/n on [0, 2pi).
inline std::vector<double> equispaced_angles(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = kTwoPi * static_cast<double>(j) / n;
  return out;
}

struct IncidentTrace {
  std::vector<ComplexValue> value;
  std::vector<ComplexValue> normal_derivative;
};

/// u_inc and du_inc/dn = ik (d.n) u_inc at the grid nodes.
inline IncidentTrace incident_trace(const NystromGrid& grid, const WaveContext& ctx,
                                    const IncidentWave& wave) {
  IncidentTrace tr;
  tr.value.resize(grid.size());
  tr.normal_derivative.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const BoundaryFrame& f = grid.frame(j);
    tr.value[j] = wave.value(f.position, ctx.k);
    tr.normal_derivative[j] =
        ComplexValue(0.0, ctx.k * dot(wave.direction(), f.normal)) * tr.value[j];
  }
  return tr;
}

/// Factored forward operator for one scatterer and wavenumber; solves any number of
/// incident waves against the same LU factors.
class ForwardSolver {
 public:
  ForwardSolver(std::shared_ptr<const NystromGrid> grid, const WaveContext& ctx)
      : grid_(std::move(grid)), ctx_(ctx), lu_(assemble_forward_system(*grid_, ctx.k)) {}

  const NystromGrid& grid() const noexcept { return *grid_; }
  std::shared_ptr<const NystromGrid> grid_ptr() const noexcept { return grid_; }
  const WaveContext& context() const noexcept { return ctx_; }

  SurfaceDensity solve(const IncidentWave& wave) const {
    const IncidentTrace tr = incident_trace(*grid_, ctx_, wave);
    std::vector<ComplexValue> rhs(grid_->size());
    const ComplexValue ik(0.0, ctx_.k);
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      rhs[j] = 2.0 * tr.normal_derivative[j] - ik * tr.value[j];
    }
    return SurfaceDensity(grid_, lu_.solve(rhs));
  }

 private:
  std::shared_ptr<const NystromGrid> grid_;
  WaveContext ctx_;
  LuFactorization<ComplexValue> lu_;
};

/// Approximate du/dn at the 2n nodes for one incident plane wave.
inline SurfaceDensity solve_forward(const Scatterer& sc, const WaveContext& ctx,
                                    const IncidentWave& wave, std::size_t n_half) {
  return ForwardSolver(make_grid(sc, n_half), ctx).solve(wave);
}

/// e^{i pi/4} / sqrt(8 pi k): far-field constant of (i/4) H0(k|x - y|).
inline ComplexValue far_field_constant(double k) {
  return std::polar(1.0 / std::sqrt(8.0 * std::numbers::pi * k), std::numbers::pi / 4.0);
}

namespace detail {

template <class KernelFn>
FarFieldPattern far_field_quadrature(const SurfaceDensity& density, double k,
                                     std::span<const double> obs_angles, KernelFn&& kernel) {
  const NystromGrid& grid = *density.grid;
  FarFieldPattern out;
  out.obs_angles.assign(obs_angles.begin(), obs_angles.end());
  out.values.resize(obs_angles.size());
  const ComplexValue gamma = far_field_constant(k) * grid.spacing();
  parallel_for(obs_angles.size(), [&](std::size_t m) {
    const Vec2 xhat = radial_unit(obs_angles[m]);
    ComplexValue acc{};
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const BoundaryFrame& f = grid.frame(j);
      const ComplexValue phase = std::exp(ComplexValue(0.0, -k * dot(xhat, f.position)));
      acc += kernel(xhat, f) * phase * density.values[j] * f.speed;
    }
    out.values[m] = gamma * acc;
  });
  return out;
}

}  // namespace detail

/// Far field of u_sc = -S[density].
inline FarFieldPattern far_field_single_layer(const SurfaceDensity& density, double k,
                                              std::span<const double> obs_angles) {
  return detail::far_field_quadrature(density, k, obs_angles,
                                      [](Vec2, const BoundaryFrame&) { return ComplexValue(-1.0); });
}

/// Far field of v = (K + ik S)[density].
inline FarFieldPattern far_field_combined(const SurfaceDensity& density, double k,
                                          std::span<const double> obs_angles) {
  const ComplexValue ik(0.0, k);
  return detail::far_field_quadrature(density, k, obs_angles,
                                      [ik](Vec2 xhat, const BoundaryFrame& f) {
                                        return ik * (1.0 - dot(xhat, f.normal));
                                      });
}

enum class PotentialKind { kSingle, kCombined };

/// Scattered field at an exterior point: -S[density] (kSingle) or (K + ik S)[density]
/// (kCombined). Points within one node spacing of the boundary are refused.
inline ComplexValue scattered_field_at(const SurfaceDensity& density, double k, PotentialKind kind,
                                       Vec2 x) {
  const NystromGrid& grid = *density.grid;
  const double radius = norm(x);
  const double boundary = grid.scatterer().radius(std::atan2(x.y, x.x));
  if (!(radius > boundary + grid.spacing() * grid.max_speed())) {
    throw NearBoundaryError("scattered_field_at: point is too close to the boundary");
  }
  ComplexValue acc{};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const BoundaryFrame& f = grid.frame(j);
    const Vec2 diff = x - f.position;
    const double rho = norm(diff);
    const special::Bessel01 b = special::bessel01(k * rho);
    const ComplexValue phi = ComplexValue(0.0, 0.25) * b.h0();
    ComplexValue kernel;
    if (kind == PotentialKind::kSingle) {
      kernel = -phi;
    } else {
      const ComplexValue dphi = ComplexValue(0.0, 0.25 * k) * b.h1() * dot(diff, f.normal) / rho;
      kernel = dphi + ComplexValue(0.0, k) * phi;
    }
    acc += kernel * density.values[j] * f.speed;
  }
  return grid.spacing() * acc;
}

/// u_sc = -S[density] at the boundary point chi(t), by Nystrom interpolation.
inline ComplexValue boundary_scattered_field(const SurfaceDensity& density, double k, double t) {
  const std::vector<ComplexValue> row = single_layer_row(*density.grid, k, t);
  ComplexValue acc{};
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * density.values[j];
  return -acc;
}

}  // namespace wavesense
