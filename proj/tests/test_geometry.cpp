#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "wavesense/geometry.hpp"
#include "wavesense/shapes.hpp"

using namespace wavesense;

namespace {

std::vector<double> sampled(std::size_t n, double (*f)(double)) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(kTwoPi * j / n);
  return v;
}

double sin_fn(double t) { return std::sin(t); }

double max_interp_error(std::size_t n) {
  const PeriodicSpline sp(sampled(n, sin_fn));
  double e = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = kTwoPi * (i + 0.5) / 10000.0;
    e = std::max(e, std::abs(sp.eval(t) - std::sin(t)));
  }
  return e;
}

}  // namespace

TEST(PeriodicSpline, ConstantDataGivesConstantInterpolant) {
  const PeriodicSpline sp(std::vector<double>(12, 0.7));
  for (std::size_t j = 0; j < 12; ++j) {
    EXPECT_EQ(sp.coeffs_a()[j], 0.0);
    EXPECT_EQ(sp.coeffs_b()[j], 0.0);
    EXPECT_EQ(sp.coeffs_c()[j], 0.0);
    EXPECT_EQ(sp.coeffs_d()[j], 0.7);
  }
  for (double t : {0.0, 0.4, 2.0, 6.1}) {
    EXPECT_DOUBLE_EQ(sp.eval(t), 0.7);
    EXPECT_EQ(sp.eval(t, 1), 0.0);
    EXPECT_EQ(sp.eval(t, 2), 0.0);
  }
}

TEST(PeriodicSpline, InterpolatesAtKnots) {
  const auto data = sampled(12, sin_fn);
  const PeriodicSpline sp(data);
  for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(sp.eval(sp.knot_angle(j)), data[j], 1e-15);
}

TEST(PeriodicSpline, FourthOrderConvergenceOnSine) {
  const double e12 = max_interp_error(12), e24 = max_interp_error(24), e48 = max_interp_error(48);
  const double h = kTwoPi / 12.0;
  EXPECT_LE(e12, h * h * h * h);
  const double p1 = std::log2(e12 / e24), p2 = std::log2(e24 / e48);
  EXPECT_GT(p1, 3.7);
  EXPECT_GT(p2, 3.7);
  EXPECT_LT(p2, 4.3);
}

TEST(PeriodicSpline, PeriodicInArgument) {
  const PeriodicSpline sp(shapes::standin(12).omega());
  for (int order = 0; order <= 2; ++order) {
    EXPECT_NEAR(sp.eval(kTwoPi + 0.3, order), sp.eval(0.3, order), 1e-13);
    EXPECT_NEAR(sp.eval(-0.3, order), sp.eval(kTwoPi - 0.3, order), 1e-13);
  }
}

TEST(PeriodicSpline, SecondOrderContinuityAcrossTheSeam) {
  const PeriodicSpline sp(shapes::standin(12).omega());
  const std::size_t last = 11;
  const double h = sp.spacing();
  const double a = sp.coeffs_a()[last], b = sp.coeffs_b()[last], c = sp.coeffs_c()[last],
               d = sp.coeffs_d()[last];
  const double left0 = ((a * h + b) * h + c) * h + d;
  const double left1 = (3 * a * h + 2 * b) * h + c;
  const double left2 = 6 * a * h + 2 * b;
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  EXPECT_LE(rel(left0, sp.eval(0.0, 0)), 1e-10);
  EXPECT_LE(rel(left1, sp.eval(0.0, 1)), 1e-10);
  EXPECT_LE(rel(left2, sp.eval(0.0, 2)), 1e-10);
}

TEST(PeriodicSpline, DerivativeMatchesFiniteDifferences) {
  const PeriodicSpline sp(shapes::standin(12).omega());
  const double step = 1e-6;
  for (int i = 0; i < 60; ++i) {
    const double t = kTwoPi * (i + 0.31) / 60.0;
    const double fd1 = (sp.eval(t + step) - sp.eval(t - step)) / (2 * step);
    const double fd2 = (sp.eval(t + step, 1) - sp.eval(t - step, 1)) / (2 * step);
    EXPECT_NEAR(fd1, sp.eval(t, 1), 1e-7);
    EXPECT_NEAR(fd2, sp.eval(t, 2), 1e-6);
  }
}

TEST(PeriodicSpline, CardinalReproduction) {
  const auto omega = shapes::standin(12).omega();
  const PeriodicSpline sp(omega);
  const auto basis = cardinal_splines(12);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 100; ++i) {
    const double t = angle(rng);
    double sum = 0.0;
    for (std::size_t j = 0; j < 12; ++j) sum += omega[j] * (*basis)[j].eval(t);
    EXPECT_NEAR(sum, sp.eval(t), 1e-10);
  }
}

TEST(PeriodicSpline, RejectsInvalidInput) {
  EXPECT_THROW(PeriodicSpline(std::vector<double>{0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(PeriodicSpline(std::vector<double>{0, 1, std::nan(""), 2}), std::invalid_argument);
  EXPECT_THROW(PeriodicSpline(std::vector<double>{0, 1, INFINITY, 2}), std::invalid_argument);
  const PeriodicSpline sp(std::vector<double>(4, 0.0));
  EXPECT_THROW(sp.eval(0.1, 3), std::invalid_argument);
  EXPECT_NO_THROW(sp.eval(0.1, 2));
}

TEST(BoundaryFrame, UnitCircle) {
  const Scatterer sc = shapes::circle(12);
  for (double t : {0.0, 0.5, 2.0, 4.4}) {
    const BoundaryFrame f = sc.frame(t);
    EXPECT_NEAR(f.position.x, std::cos(t), 1e-15);
    EXPECT_NEAR(f.position.y, std::sin(t), 1e-15);
    EXPECT_NEAR(f.speed, 1.0, 1e-15);
    EXPECT_NEAR(f.normal.x, std::cos(t), 1e-15);
    EXPECT_NEAR(f.normal.y, std::sin(t), 1e-15);
    EXPECT_NEAR(f.curvature, 1.0, 1e-14);
  }
}

TEST(BoundaryFrame, ScaledCircle) {
  const double c = 0.4;
  const Scatterer sc = shapes::circle(8, c);
  const BoundaryFrame f = sc.frame(1.3);
  EXPECT_NEAR(f.speed, std::exp(c), 1e-14);
  EXPECT_NEAR(f.curvature, std::exp(-c), 1e-14);
}

TEST(BoundaryFrame, FrameInvariantsOnStandin) {
  const Scatterer sc = shapes::standin(12);
  for (int i = 0; i < 360; ++i) {
    const double t = kTwoPi * i / 360.0;
    const BoundaryFrame f = sc.frame(t);
    EXPECT_NEAR(norm(f.normal), 1.0, 1e-12);
    EXPECT_NEAR(dot(f.d1, f.normal), 0.0, 1e-12);
    const double r = sc.radius(t);
    EXPECT_GT(r, 0.0);
    EXPECT_DOUBLE_EQ(r, std::exp(sc.log_radius().eval(t)));
    EXPECT_NEAR(dot(f.normal, radial_unit(t)), r / f.speed, 1e-14);
    EXPECT_GT(dot(f.normal, radial_unit(t)), 0.0);
    // outward: stepping along n increases the distance from the origin
    EXPECT_GT(norm(f.position + 1e-6 * f.normal), r);
  }
}

TEST(BoundaryFrame, NormalAgainstFiniteDifferences) {
  const Scatterer sc = shapes::standin(12);
  const double t = std::numbers::pi / 3.0, h = 1e-6;
  auto chi = [&](double s) { return sc.radius(s) * radial_unit(s); };
  const Vec2 d1 = (1.0 / (2 * h)) * (chi(t + h) - chi(t - h));
  const double fd = sc.radius(t) / norm(d1);
  const BoundaryFrame f = sc.frame(t);
  EXPECT_NEAR(dot(f.normal, radial_unit(t)), fd, 1e-10);
  const Vec2 n_fd = (1.0 / norm(d1)) * Vec2{d1.y, -d1.x};
  EXPECT_NEAR(f.normal.x, n_fd.x, 1e-9);
  EXPECT_NEAR(f.normal.y, n_fd.y, 1e-9);
}

TEST(RadialPerturbation, CardinalProperty) {
  const Scatterer sc = shapes::standin(12);
  const RadialPerturbation q = perturbation_basis(sc, 5);
  const double h = kTwoPi / 12.0;
  EXPECT_DOUBLE_EQ(q(5 * h), sc.radius(5 * h));
  EXPECT_EQ(q(7 * h), 0.0);
  for (std::size_t j = 0; j < 12; ++j) {
    if (j != 5) {
      EXPECT_EQ(q(j * h), 0.0) << j;
    }
  }
  EXPECT_THROW(perturbation_basis(sc, 12), std::invalid_argument);
}

TEST(RadialPerturbation, CardinalSplinesAreLocalised) {
  const auto basis = cardinal_splines(12);
  const double h = kTwoPi / 12.0;
  for (std::size_t i = 0; i < 12; ++i) {
    double peak = 0.0, far = 0.0;
    for (int s = 0; s < 12000; ++s) {
      const double t = kTwoPi * s / 12000.0;
      const double v = std::abs((*basis)[i].eval(t));
      peak = std::max(peak, v);
      const double dist = std::abs(std::remainder(t - i * h, kTwoPi));
      if (dist >= 3 * h - 1e-12) far = std::max(far, v);
    }
    EXPECT_LE(far, 0.05 * peak) << i;
  }
}

TEST(CircumscribingDiameter, UnitCircle) {
  EXPECT_NEAR(circumscribing_diameter(shapes::circle(12)), 2.0, 1e-12);
}

namespace {

double dense_diameter(const Scatterer& sc) {
  double m = 0.0;
  for (int i = 0; i < 100000; ++i) m = std::max(m, sc.radius(kTwoPi * i / 100000.0));
  return 2.0 * m;
}

}  // namespace

TEST(CircumscribingDiameter, CardinalBump) {
  std::vector<double> omega(12, 0.0);
  omega[1] = 0.1;
  const Scatterer sc(omega);
  const double a = circumscribing_diameter(sc);
  EXPECT_NEAR(a, dense_diameter(sc), 1e-8);
  EXPECT_NEAR(a, 2.0 * std::exp(0.1), 1e-8);
}

TEST(CircumscribingDiameter, EllipseLikeAndStandin) {
  for (const Scatterer& sc : {shapes::ellipse_like(12), shapes::standin(12), shapes::standin(48)}) {
    EXPECT_NEAR(circumscribing_diameter(sc), dense_diameter(sc), 1e-8);
  }
}

TEST(Standin, BayIsTheMostConcaveKnotRegion) {
  const Scatterer sc = shapes::standin(12);
  const std::size_t bay = shapes::standin_bay_knot(12);
  EXPECT_EQ(bay, 9u);
  double min_curv = 1e9, arg = 0.0;
  for (int i = 0; i < 3600; ++i) {
    const double t = kTwoPi * i / 3600.0;
    const double c = sc.frame(t).curvature;
    if (c < min_curv) {
      min_curv = c;
      arg = t;
    }
  }
  EXPECT_LT(min_curv, 0.0);
  EXPECT_LT(std::abs(arg - bay * kTwoPi / 12.0), kTwoPi / 24.0);
}
