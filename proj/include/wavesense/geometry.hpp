#pragma once

// Star-shaped scatterers whose log-radius is a periodic cubic spline on
// equispaced knots, their boundary frames, and the localized perturbation basis.
//
// Knot indices are zero-based throughout: knot j sits at theta_j = 2*pi*j/N.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavesense {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// Scalar 2D cross product a.x*b.y - a.y*b.x.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 radial_unit(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 angular_unit(double theta) { return {-std::sin(theta), std::cos(theta)}; }

/// Reduce an angle to [0, 2pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

namespace detail {

// Cyclic tridiagonal system with stencil [1 4 1], solved by the Thomas algorithm
// plus a Sherman-Morrison correction for the two corner entries. The matrix
// depends only on N, so one factorization serves every right-hand side.
class CyclicSplineSystem {
 public:
  explicit CyclicSplineSystem(std::size_t n) : n_(n), diag_(n), sup_(n), z_(n) {
    // B = A - u v^T with u = (gamma, 0, ..., 0, 1), v = (1, 0, ..., 0, 1/gamma)
    gamma_ = -4.0;
    std::vector<double> d(n, 4.0);
    d[0] = 4.0 - gamma_;
    d[n - 1] = 4.0 - 1.0 / gamma_;
    // LU of B: diag_ holds modified pivots, sup_ the forward multipliers
    diag_[0] = d[0];
    for (std::size_t i = 1; i < n; ++i) {
      sup_[i] = 1.0 / diag_[i - 1];
      diag_[i] = d[i] - sup_[i];
    }
    std::vector<double> u(n, 0.0);
    u[0] = gamma_;
    u[n - 1] = 1.0;
    z_ = solve_b(u);
    vz_ = z_[0] + z_[n - 1] / gamma_;
  }

  std::size_t size() const noexcept { return n_; }

  std::vector<double> solve(std::span<const double> rhs) const {
    std::vector<double> y = solve_b(rhs);
    const double factor = (y[0] + y[n_ - 1] / gamma_) / (1.0 + vz_);
    for (std::size_t i = 0; i < n_; ++i) y[i] -= factor * z_[i];
    return y;
  }

 private:
  std::vector<double> solve_b(std::span<const double> rhs) const {
    std::vector<double> y(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n_; ++i) y[i] -= sup_[i] * y[i - 1];
    y[n_ - 1] /= diag_[n_ - 1];
    for (std::size_t i = n_ - 1; i-- > 0;) y[i] = (y[i] - y[i + 1]) / diag_[i];
    return y;
  }

  std::size_t n_;
  double gamma_ = 0.0;
  double vz_ = 0.0;
  std::vector<double> diag_;
  std::vector<double> sup_;
  std::vector<double> z_;
};

inline std::shared_ptr<const CyclicSplineSystem> spline_system(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const CyclicSplineSystem>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const CyclicSplineSystem>(n);
  return slot;
}

}  // namespace detail

/// C2 periodic cubic interpolant on N equispaced knots over [0, 2pi).
///
/// On [theta_j, theta_{j+1}) the value is
///   a_j t^3 + b_j t^2 + c_j t + d_j,  t = theta - theta_j.
class PeriodicSpline {
 public:
  /// Interpolates knot_values at theta_j = 2*pi*j/N. Requires N >= 4 and finite values.
  explicit PeriodicSpline(std::span<const double> knot_values) {
    const std::size_t n = knot_values.size();
    if (n < 4) {
      throw std::invalid_argument("periodic spline needs at least 4 knots, got " +
                                  std::to_string(n));
    }
    for (double v : knot_values) {
      if (!std::isfinite(v)) throw std::invalid_argument("periodic spline: non-finite knot value");
    }
    h_ = kTwoPi / static_cast<double>(n);
    d_.assign(knot_values.begin(), knot_values.end());

    std::vector<double> rhs(n);
    const double scale = 6.0 / (h_ * h_);
    for (std::size_t j = 0; j < n; ++j) {
      rhs[j] = scale * (d_[(j + 1) % n] - 2.0 * d_[j] + d_[(j + n - 1) % n]);
    }
    const std::vector<double> m = detail::spline_system(n)->solve(rhs);

    a_.resize(n);
    b_.resize(n);
    c_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double m0 = m[j];
      const double m1 = m[(j + 1) % n];
      a_[j] = (m1 - m0) / (6.0 * h_);
      b_[j] = 0.5 * m0;
      c_[j] = (d_[(j + 1) % n] - d_[j]) / h_ - h_ * (2.0 * m0 + m1) / 6.0;
    }
  }

  std::size_t n_knots() const noexcept { return d_.size(); }
  double spacing() const noexcept { return h_; }
  double knot_angle(std::size_t j) const { return kTwoPi * static_cast<double>(j) / n_knots(); }

  std::span<const double> coeffs_a() const noexcept { return a_; }
  std::span<const double> coeffs_b() const noexcept { return b_; }
  std::span<const double> coeffs_c() const noexcept { return c_; }
  std::span<const double> coeffs_d() const noexcept { return d_; }

  /// Value (order 0) or derivative (order 1, 2) at any angle.
  double eval(double theta, int order = 0) const {
    if (order < 0 || order > 2) {
      throw std::invalid_argument("eval_spline: order must be 0, 1 or 2");
    }
    const auto [j, t] = locate(theta);
    switch (order) {
      case 0:
        return ((a_[j] * t + b_[j]) * t + c_[j]) * t + d_[j];
      case 1:
        return (3.0 * a_[j] * t + 2.0 * b_[j]) * t + c_[j];
      default:
        return 6.0 * a_[j] * t + 2.0 * b_[j];
    }
  }

  /// Value and first two derivatives in one interval lookup.
  void eval_all(double theta, double& s0, double& s1, double& s2) const {
    const auto [j, t] = locate(theta);
    s0 = ((a_[j] * t + b_[j]) * t + c_[j]) * t + d_[j];
    s1 = (3.0 * a_[j] * t + 2.0 * b_[j]) * t + c_[j];
    s2 = 6.0 * a_[j] * t + 2.0 * b_[j];
  }

 private:
  struct Location {
    std::size_t interval;
    double offset;
  };

  Location locate(double theta) const {
    const double u = wrap_angle(theta) / h_;
    double whole = std::floor(u);
    double t = (u - whole) * h_;
    // arguments that are a knot up to rounding land exactly on that knot
    const double nearest = std::round(u);
    if (std::abs(u - nearest) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, u)) {
      whole = nearest;
      t = 0.0;
    }
    auto j = static_cast<std::size_t>(whole);
    if (j >= n_knots()) {
      j = 0;
      t = 0.0;
    }
    if (t < 0.0) t = 0.0;
    return {j, t};
  }

  double h_ = 0.0;
  std::vector<double> a_, b_, c_, d_;
};

inline PeriodicSpline build_periodic_spline(std::span<const double> knot_values) {
  return PeriodicSpline(knot_values);
}

/// Position, derivatives and differential geometry of the boundary at one angle.
struct BoundaryFrame {
  double theta = 0.0;
  Vec2 position;
  Vec2 d1;
  Vec2 d2;
  double speed = 0.0;
  Vec2 normal;
  double curvature = 0.0;
};

/// Star-shaped domain with boundary r(theta) e_r(theta), r = exp(s), s a periodic spline.
class Scatterer {
 public:
  explicit Scatterer(std::vector<double> omega) : omega_(std::move(omega)), log_radius_(omega_) {
    for (std::size_t j = 0; j < omega_.size(); ++j) {
      const BoundaryFrame f = frame(log_radius_.knot_angle(j));
      if (!(dot(f.normal, radial_unit(f.theta)) > 0.0)) {
        throw std::invalid_argument("scatterer: boundary normal is not outward at knot " +
                                    std::to_string(j));
      }
    }
  }

  std::span<const double> omega() const noexcept { return omega_; }
  std::size_t n_spline() const noexcept { return omega_.size(); }
  const PeriodicSpline& log_radius() const noexcept { return log_radius_; }

  double radius(double theta) const { return std::exp(log_radius_.eval(theta, 0)); }

  BoundaryFrame frame(double theta) const {
    double s0, s1, s2;
    log_radius_.eval_all(theta, s0, s1, s2);
    const double r = std::exp(s0);
    const double r1 = s1 * r;
    const double r2 = (s2 + s1 * s1) * r;
    const Vec2 er = radial_unit(theta);
    const Vec2 et = angular_unit(theta);

    BoundaryFrame f;
    f.theta = theta;
    f.position = r * er;
    f.d1 = r1 * er + r * et;
    f.d2 = (r2 - r) * er + 2.0 * r1 * et;
    f.speed = norm(f.d1);
    // clockwise quarter turn of the counter-clockwise tangent
    f.normal = (1.0 / f.speed) * Vec2{f.d1.y, -f.d1.x};
    f.curvature = cross(f.d1, f.d2) / (f.speed * f.speed * f.speed);
    return f;
  }

 private:
  std::vector<double> omega_;
  PeriodicSpline log_radius_;
};

inline BoundaryFrame boundary_frame(const Scatterer& sc, double theta) { return sc.frame(theta); }

/// Cardinal splines B_0..B_{N-1} (B_i(theta_j) = delta_ij), built once per N.
inline std::shared_ptr<const std::vector<PeriodicSpline>> cardinal_splines(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const std::vector<PeriodicSpline>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto basis = std::make_shared<std::vector<PeriodicSpline>>();
    basis->reserve(n);
    std::vector<double> unit(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      unit[i] = 1.0;
      basis->emplace_back(unit);
      unit[i] = 0.0;
    }
    slot = std::move(basis);
  }
  return slot;
}

/// Radial boundary perturbation q_i(theta) = r(theta) B_i(theta) = d r / d omega_i.
class RadialPerturbation {
 public:
  RadialPerturbation(const Scatterer& sc, std::size_t knot_index)
      : knot_index_(knot_index), log_radius_(sc.log_radius()) {
    if (knot_index >= sc.n_spline()) {
      throw std::invalid_argument("perturbation_basis: knot index " + std::to_string(knot_index) +
                                  " out of range");
    }
    basis_ = cardinal_splines(sc.n_spline());
  }

  std::size_t knot_index() const noexcept { return knot_index_; }
  const PeriodicSpline& cardinal() const { return (*basis_)[knot_index_]; }

  double operator()(double theta) const {
    return std::exp(log_radius_.eval(theta, 0)) * cardinal().eval(theta, 0);
  }

 private:
  std::size_t knot_index_;
  PeriodicSpline log_radius_;
  std::shared_ptr<const std::vector<PeriodicSpline>> basis_;
};

inline RadialPerturbation perturbation_basis(const Scatterer& sc, std::size_t i) {
  return RadialPerturbation(sc, i);
}

/// Diameter 2*max r(theta) of the origin-centred ball enclosing the scatterer.
inline double circumscribing_diameter(const Scatterer& sc) {
  constexpr int kSamples = 4096;
  const double step = kTwoPi / kSamples;
  int best = 0;
  double best_r = -1.0;
  for (int i = 0; i < kSamples; ++i) {
    const double r = sc.radius(step * i);
    if (r > best_r) {
      best_r = r;
      best = i;
    }
  }
  // golden-section refinement of the sampled maximum
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = step * (best - 1);
  double hi = step * (best + 1);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = sc.radius(x1);
  double f2 = sc.radius(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = sc.radius(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = sc.radius(x1);
    }
  }
  return 2.0 * std::max({best_r, f1, f2});
}

}  // namespace wavesense
