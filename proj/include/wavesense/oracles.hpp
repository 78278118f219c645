#pragma once

// Independent reference solutions: the separation-of-variables (Mie) series for a
// sound-soft circle and central finite differences of the full forward map.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "wavesense/errors.hpp"
#include "wavesense/geometry.hpp"
#include "wavesense/scattering.hpp"
#include "wavesense/shape_derivative.hpp"
#include "wavesense/special_functions.hpp"

namespace wavesense {

struct MieConfig {
  double radius = 1.0;
  double k = 1.0;
  /// Series truncation M; 0 selects ceil(k * radius) + 40.
  int n_terms = 0;

  int terms() const {
    return n_terms > 0 ? n_terms : static_cast<int>(std::ceil(k * radius)) + 40;
  }
};

/// Mie coefficients J_m(ka0)/H_m(ka0) for m = 0..M.
inline std::vector<ComplexValue> mie_coefficients(const MieConfig& cfg) {
  if (!(cfg.radius > 0.0) || !(cfg.k > 0.0)) {
    throw std::invalid_argument("mie: radius and k must be positive");
  }
  const int m_max = cfg.terms();
  if (m_max < 10) throw std::invalid_argument("mie: n_terms must be >= 10");
  const special::BesselSequence seq = special::bessel_sequence(m_max, cfg.k * cfg.radius);
  std::vector<ComplexValue> c(static_cast<std::size_t>(m_max) + 1);
  for (std::size_t m = 0; m < c.size(); ++m) c[m] = seq.j[m] / ComplexValue(seq.j[m], seq.y[m]);
  return c;
}

/// Far field of the sound-soft circle of radius a0 centred at the origin:
///   u_inf(theta) = -sqrt(2/(pi k)) e^{-i pi/4} sum_{|m|<=M} (J_m/H_m)(k a0) e^{im(theta - theta_d)}.
/// The prefactor follows from H_m(kr) ~ sqrt(2/(pi k r)) e^{i(kr - m pi/2 - pi/4)} together with
/// the plane-wave expansion e^{ik x.d} = sum i^m J_m(kr) e^{im(theta - theta_d)}.
inline FarFieldPattern mie_far_field(const MieConfig& cfg, Vec2 direction,
                                     std::span<const double> obs_angles) {
  const std::vector<ComplexValue> c = mie_coefficients(cfg);
  double largest = 0.0;
  for (const auto& v : c) largest = std::max(largest, std::abs(v));
  if (std::abs(c.back()) > 1e-14 * largest) {
    throw TruncationError("mie_far_field: series not converged at M = " +
                          std::to_string(c.size() - 1));
  }
  const double theta_d = std::atan2(direction.y, direction.x);
  const ComplexValue prefactor =
      -std::sqrt(2.0 / (std::numbers::pi * cfg.k)) * std::polar(1.0, -std::numbers::pi / 4.0);
  FarFieldPattern out;
  out.obs_angles.assign(obs_angles.begin(), obs_angles.end());
  out.values.reserve(obs_angles.size());
  for (double theta : obs_angles) {
    const double delta = theta - theta_d;
    // sum tail first so the small terms are not lost
    ComplexValue sum{};
    for (std::size_t m = c.size() - 1; m >= 1; --m) {
      sum += 2.0 * c[m] * std::cos(static_cast<double>(m) * delta);
    }
    sum += c[0];
    out.values.push_back(prefactor * sum);
  }
  return out;
}

/// Central difference in the radius: (u(a0(1+h)) - u(a0(1-h))) / (2 a0 h).
inline FarFieldPattern mie_radius_derivative(const MieConfig& cfg, Vec2 direction,
                                             std::span<const double> obs_angles, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) {
    throw std::invalid_argument("mie_radius_derivative: h must lie in [1e-7, 1e-3]");
  }
  MieConfig plus = cfg, minus = cfg;
  plus.radius = cfg.radius * (1.0 + h);
  minus.radius = cfg.radius * (1.0 - h);
  // both evaluations share the truncation chosen for the larger radius
  plus.n_terms = minus.n_terms = cfg.n_terms > 0 ? cfg.n_terms : plus.terms();
  const FarFieldPattern up = mie_far_field(plus, direction, obs_angles);
  const FarFieldPattern down = mie_far_field(minus, direction, obs_angles);
  FarFieldPattern out;
  out.obs_angles = up.obs_angles;
  out.values.resize(up.values.size());
  const double denom = 2.0 * cfg.radius * h;
  for (std::size_t m = 0; m < out.values.size(); ++m) {
    out.values[m] = (up.values[m] - down.values[m]) / denom;
  }
  return out;
}

/// Jacobian of the forward map by central differences in each knot value:
/// 2 * N_spline * N_inc full forward solves at the fixed wavenumber ctx.k.
inline JacobianMatrix fd_jacobian(const Scatterer& sc, const WaveContext& ctx,
                                  std::span<const IncidentWave> waves,
                                  std::span<const double> obs_angles, std::size_t n_half,
                                  double h) {
  if (!(h >= 1e-6 && h <= 1e-2)) {
    throw std::invalid_argument("fd_jacobian: h must lie in [1e-6, 1e-2]");
  }
  if (waves.empty() || obs_angles.empty()) {
    throw std::invalid_argument("fd_jacobian: waves and observation angles must be nonempty");
  }
  const std::size_t n_spline = sc.n_spline();
  const std::size_t n_obs = obs_angles.size();
  JacobianMatrix jac = JacobianMatrix::empty(n_spline, waves, obs_angles, ctx);

  parallel_for(n_spline, [&](std::size_t i) {
    std::vector<double> omega(sc.omega().begin(), sc.omega().end());
    omega[i] = sc.omega()[i] + h;
    const ForwardSolver up(make_grid(Scatterer(omega), n_half), ctx);
    omega[i] = sc.omega()[i] - h;
    const ForwardSolver down(make_grid(Scatterer(omega), n_half), ctx);
    for (std::size_t l = 0; l < waves.size(); ++l) {
      const FarFieldPattern fp = far_field_single_layer(up.solve(waves[l]), ctx.k, obs_angles);
      const FarFieldPattern fm = far_field_single_layer(down.solve(waves[l]), ctx.k, obs_angles);
      for (std::size_t m = 0; m < n_obs; ++m) {
        jac.entries(i, l * n_obs + m) = (fp.values[m] - fm.values[m]) / (2.0 * h);
      }
    }
  });
  return jac;
}

}  // namespace wavesense
