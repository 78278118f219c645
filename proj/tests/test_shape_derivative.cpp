#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "support.hpp"
#include "wavesense/oracles.hpp"
#include "wavesense/shape_derivative.hpp"
#include "wavesense/shapes.hpp"

using namespace wavesense;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

double row_relative_l2(const DenseComplexMatrix& a, const DenseComplexMatrix& ref, std::size_t row) {
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    num += std::norm(a(row, c) - ref(row, c));
    den += std::norm(ref(row, c));
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(FrechetData, ZeroDirectionGivesZeroData) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const ForwardSolver fw(make_grid(sc, 32), ctx);
  const auto trace = fw.solve(IncidentWave::from_angle(0.0));
  const auto g = frechet_dirichlet_data(fw.grid(), trace, [](double) { return 0.0; });
  for (const auto& v : g) EXPECT_EQ(std::abs(v), 0.0);
}

TEST(FrechetData, UnitCircleDilationIsMinusNeumannTrace) {
  const Scatterer sc = shapes::circle(8);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const ForwardSolver fw(make_grid(sc, 32), ctx);
  const auto trace = fw.solve(IncidentWave::from_angle(0.3));
  const auto g = frechet_dirichlet_data(fw.grid(), trace, [](double) { return 1.0; });
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_LE(std::abs(g[j] + trace.values[j]), 1e-15);
}

TEST(FrechetData, SimplifiedFormulaMatchesDirectNormalComponent) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const ForwardSolver fw(make_grid(sc, 64), ctx);
  const auto trace = fw.solve(IncidentWave::from_angle(1.0));
  const RadialPerturbation q(sc, 9);
  const auto g = frechet_dirichlet_data(fw.grid(), trace, [&](double t) { return q(t); });
  for (std::size_t j = 0; j < g.size(); ++j) {
    const BoundaryFrame& f = fw.grid().frame(j);
    const cd direct = -dot(f.normal, q(f.theta) * radial_unit(f.theta)) * trace.values[j];
    EXPECT_LE(std::abs(g[j] - direct), 1e-13 * std::max(1.0, std::abs(direct)));
  }
}

TEST(FrechetData, RejectsDensityFromAnotherGrid) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const ForwardSolver fw(make_grid(sc, 16), ctx);
  const auto other = make_grid(sc, 16);
  const auto trace = fw.solve(IncidentWave::from_angle(0.0));
  EXPECT_THROW(frechet_dirichlet_data(*other, trace, [](double) { return 1.0; }), std::invalid_argument);
}

TEST(Frechet, UniformDilationMatchesMieRadiusDerivative) {
  const Scatterer sc = shapes::circle(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const auto wave = IncidentWave::from_angle(0.0);
  const auto obs = equispaced_angles(180);
  const std::vector<IncidentWave> waves{wave};
  const auto jac = assemble_jacobian(sc, ctx, waves, obs, 32);
  const auto ref = mie_radius_derivative({.radius = 1.0, .k = ctx.k}, wave.direction(), obs, 1e-5);
  std::vector<cd> sum(obs.size(), 0.0);
  for (std::size_t i = 0; i < jac.n_spline(); ++i)
    for (std::size_t m = 0; m < obs.size(); ++m) sum[m] += jac.entries(i, m);
  EXPECT_LE(testsupport::max_abs_diff(sum, ref.values), 1e-5 * testsupport::max_abs(ref.values));
}

TEST(Frechet, RowSumEqualsDilationDirection) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const auto obs = equispaced_angles(64);
  const std::vector<IncidentWave> waves{IncidentWave::from_angle(0.4)};
  const auto jac = assemble_jacobian(sc, ctx, waves, obs, 64);
  const auto grid = make_grid(sc, 64);
  const ForwardSolver fw(grid, ctx);
  const auto trace = fw.solve(waves[0]);
  const auto dil = FrechetSolver(grid, ctx).direction(trace, [&](double t) { return sc.radius(t); }, obs);
  for (std::size_t m = 0; m < obs.size(); ++m) {
    cd sum = 0.0;
    for (std::size_t i = 0; i < 12; ++i) sum += jac.entries(i, m);
    EXPECT_LE(std::abs(sum - dil.values[m]), 1e-9 * testsupport::max_abs(dil.values));
  }
}

TEST(Frechet, LinearInDirection) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const auto grid = make_grid(sc, 48);
  const ForwardSolver fw(grid, ctx);
  const FrechetSolver fr(grid, ctx);
  const auto trace = fw.solve(IncidentWave::from_angle(2.0));
  const auto obs = equispaced_angles(50);
  auto qa = [](double t) { return std::cos(3 * t); };
  auto qb = [&](double t) { return RadialPerturbation(sc, 4)(t); };
  const auto a = fr.direction(trace, qa, obs), b = fr.direction(trace, qb, obs);
  const auto ab = fr.direction(trace, [&](double t) { return qa(t) + qb(t); }, obs);
  for (std::size_t m = 0; m < obs.size(); ++m) {
    EXPECT_LE(std::abs(ab.values[m] - a.values[m] - b.values[m]), 1e-10 * testsupport::max_abs(ab.values));
  }
  const auto single = solve_frechet_direction(ctx, trace, qb, obs);
  for (std::size_t m = 0; m < obs.size(); ++m) EXPECT_EQ(single.values[m], b.values[m]);
}

TEST(Frechet, AgreesWithFiniteDifferencesOnCorpus) {
  for (const Scatterer& sc : {shapes::circle(12), shapes::ellipse_like(12), shapes::standin(12)}) {
    const auto ctx = WaveContext::from_ka(sc, 2 * pi);
    const auto obs = equispaced_angles(32);
    const std::vector<IncidentWave> waves{IncidentWave::from_angle(0.0)};
    const auto jac = assemble_jacobian(sc, ctx, waves, obs, 64);
    const auto fd = fd_jacobian(sc, ctx, waves, obs, 64, 1e-4);
    for (std::size_t i = 0; i < 12; ++i) EXPECT_LE(row_relative_l2(jac.entries, fd.entries, i), 1e-3) << i;
  }
}

TEST(Jacobian, TwelveKnotsByThousandObservations) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const std::vector<IncidentWave> waves{IncidentWave({1.0, 0.0})};
  const auto jac = assemble_jacobian(sc, ctx, waves, equispaced_angles(1000), 14);
  EXPECT_EQ(jac.entries.rows(), 12u);
  EXPECT_EQ(jac.entries.cols(), 1000u);
  EXPECT_TRUE(jac.entries.all_finite());
}

TEST(Jacobian, DuplicateIncidenceDuplicatesColumns) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const auto obs = equispaced_angles(40);
  const std::vector<IncidentWave> waves{IncidentWave::from_angle(0.3), IncidentWave::from_angle(0.3)};
  const auto jac = assemble_jacobian(sc, ctx, waves, obs, 32);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t m = 0; m < obs.size(); ++m) EXPECT_EQ(jac.entries(i, m), jac.entries(i, 40 + m));
}

TEST(Jacobian, FactorsEachOperatorOnce) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const std::vector<IncidentWave> waves{IncidentWave({1, 0}), IncidentWave({-1, 0}), IncidentWave({0, 1}),
                                        IncidentWave({0, -1})};
  const auto jac = assemble_jacobian(sc, ctx, waves, equispaced_angles(16), 16);
  EXPECT_EQ(jac.stats.forward_factorizations, 1u);
  EXPECT_EQ(jac.stats.indirect_factorizations, 1u);
  EXPECT_EQ(jac.stats.forward_solves, 4u);
  EXPECT_EQ(jac.stats.indirect_solves, 48u);
  EXPECT_EQ(jac.n_inc(), 4u);
  EXPECT_EQ(jac.n_obs(), 16u);
}

TEST(Jacobian, Deterministic) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 4 * pi);
  const std::vector<IncidentWave> waves{IncidentWave({1, 0}), IncidentWave({0, -1})};
  const auto obs = equispaced_angles(100);
  const auto a = assemble_jacobian(sc, ctx, waves, obs, 40);
  const auto b = assemble_jacobian(sc, ctx, waves, obs, 40);
  EXPECT_TRUE(a.entries == b.entries);
}

TEST(Jacobian, RejectsEmptyInputs) {
  const Scatterer sc = shapes::standin(12);
  const auto ctx = WaveContext::from_ka(sc, 2 * pi);
  const std::vector<IncidentWave> none;
  const std::vector<IncidentWave> one{IncidentWave({1, 0})};
  EXPECT_THROW(assemble_jacobian(sc, ctx, none, equispaced_angles(8), 16), std::invalid_argument);
  EXPECT_THROW(assemble_jacobian(sc, ctx, one, std::vector<double>{}, 16), std::invalid_argument);
}
