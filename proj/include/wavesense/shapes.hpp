#pragma once

// Reference scatterers used by the tests, sample configurations and the CLI.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wavesense/geometry.hpp"

namespace wavesense::shapes {

/// Circle of radius e^{log_radius}.
inline Scatterer circle(std::size_t n_spline, double log_radius = 0.0) {
  return Scatterer(std::vector<double>(n_spline, log_radius));
}

/// Knot data ln(1 + eps cos 2 theta_j).
inline Scatterer ellipse_like(std::size_t n_spline, double eps = 0.3) {
  std::vector<double> omega(n_spline);
  for (std::size_t j = 0; j < n_spline; ++j) {
    omega[j] = std::log(1.0 + eps * std::cos(2.0 * kTwoPi * static_cast<double>(j) / n_spline));
  }
  return Scatterer(std::move(omega));
}

namespace detail {

inline double periodic_bump(double theta, double centre, double width) {
  const double d = std::remainder(theta - centre, kTwoPi);
  return std::exp(-(d / width) * (d / width));
}

}  // namespace detail

/// Irregular continent-like log-radius: a broad asymmetric body, a pronounced
/// south-western lobe, a north-eastern cape and a deep southern bay centred on
/// theta = 3pi/2 (knot 9 of 12, knot 36 of 48).
inline double standin_log_radius(double theta) {
  using detail::periodic_bump;
  return 0.10 * std::cos(theta - 0.3) + 0.07 * std::cos(2.0 * theta + 0.9) +
         0.04 * std::sin(3.0 * theta) + 0.22 * periodic_bump(theta, 3.75, 0.32) +
         0.12 * periodic_bump(theta, 1.45, 0.22) -
         0.45 * periodic_bump(theta, 1.5 * std::numbers::pi, 0.30);
}

/// Stand-in scatterer sampled from standin_log_radius at N equispaced knots.
inline Scatterer standin(std::size_t n_spline) {
  std::vector<double> omega(n_spline);
  for (std::size_t j = 0; j < n_spline; ++j) {
    omega[j] = standin_log_radius(kTwoPi * static_cast<double>(j) / n_spline);
  }
  return Scatterer(std::move(omega));
}

/// Knot index of the southern bay for a stand-in with n_spline knots.
inline std::size_t standin_bay_knot(std::size_t n_spline) {
  if (n_spline % 4 != 0) throw std::invalid_argument("standin_bay_knot: n_spline must be divisible by 4");
  return 3 * n_spline / 4;
}

}  // namespace wavesense::shapes
