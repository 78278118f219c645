#pragma once

// Frechet derivative of the far-field map in radial boundary directions.
//
// For a perturbation x -> x + q(theta) e_r(theta) the derivative is the far field of
// the radiating solution v with Dirichlet data
//   v = -(n . e_r) q du/dn = -(q r / |chi'|) du/dn   on the boundary,
// represented as v = (K + ik S)[phi*] with
//   (I + 2K + 2ik S)[phi*] = 2 v|_boundary.
// The forward Neumann trace du/dn enters the data directly, so no further
// differentiation of u is needed.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "wavesense/geometry.hpp"
#include "wavesense/linalg.hpp"
#include "wavesense/nystrom.hpp"
#include "wavesense/parallel.hpp"
#include "wavesense/scattering.hpp"

namespace wavesense {

/// Work counters for one Jacobian assembly.
struct AssemblyStats {
  std::size_t forward_factorizations = 0;
  std::size_t forward_solves = 0;
  std::size_t indirect_factorizations = 0;
  std::size_t indirect_solves = 0;
};

/// Complex sensitivity matrix: row i is knot i, column l * n_obs + m is
/// incidence l observed at obs_angles[m].
struct JacobianMatrix {
  DenseComplexMatrix entries;
  std::vector<Vec2> directions;
  std::vector<double> obs_angles;
  double k = 0.0;
  double ka = 0.0;
  AssemblyStats stats;

  std::size_t n_spline() const noexcept { return entries.rows(); }
  std::size_t n_inc() const noexcept { return directions.size(); }
  std::size_t n_obs() const noexcept { return obs_angles.size(); }

  static JacobianMatrix empty(std::size_t n_spline, std::span<const IncidentWave> waves,
                              std::span<const double> obs_angles, const WaveContext& ctx) {
    JacobianMatrix jac;
    jac.entries = DenseComplexMatrix(n_spline, waves.size() * obs_angles.size());
    for (const auto& w : waves) jac.directions.push_back(w.direction());
    jac.obs_angles.assign(obs_angles.begin(), obs_angles.end());
    jac.k = ctx.k;
    jac.ka = ctx.ka;
    return jac;
  }
};

/// Scalar perturbation profile q(theta) along e_r.
using RadialProfile = std::function<double(double)>;

/// Dirichlet data -(q r/|chi'|) du/dn of the derivative field at the grid nodes.
inline std::vector<ComplexValue> frechet_dirichlet_data(const NystromGrid& grid,
                                                        const SurfaceDensity& forward,
                                                        const RadialProfile& q) {
  if (forward.grid.get() != &grid) {
    throw std::invalid_argument("frechet_dirichlet_data: density lives on a different grid");
  }
  std::vector<ComplexValue> g(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const BoundaryFrame& f = grid.frame(j);
    const double r = norm(f.position);
    g[j] = -(q(f.theta) * r / f.speed) * forward.values[j];
  }
  return g;
}

/// Factored indirect operator I + 2K + 2ik S for one scatterer and wavenumber.
class FrechetSolver {
 public:
  FrechetSolver(std::shared_ptr<const NystromGrid> grid, const WaveContext& ctx)
      : grid_(std::move(grid)), ctx_(ctx), lu_(assemble_indirect_system(*grid_, ctx.k)) {}

  const NystromGrid& grid() const noexcept { return *grid_; }

  /// Density phi* for given Dirichlet data of the radiating field.
  SurfaceDensity solve_dirichlet(std::span<const ComplexValue> data) const {
    std::vector<ComplexValue> rhs(data.begin(), data.end());
    for (auto& v : rhs) v *= 2.0;
    return SurfaceDensity(grid_, lu_.solve(rhs));
  }

  /// Far field of the derivative in direction q given the forward Neumann trace.
  FarFieldPattern direction(const SurfaceDensity& forward, const RadialProfile& q,
                            std::span<const double> obs_angles) const {
    const SurfaceDensity phi = solve_dirichlet(frechet_dirichlet_data(*grid_, forward, q));
    return far_field_combined(phi, ctx_.k, obs_angles);
  }

 private:
  std::shared_ptr<const NystromGrid> grid_;
  WaveContext ctx_;
  LuFactorization<ComplexValue> lu_;
};

/// One derivative row function J_q sampled at obs_angles, for a single direction q.
inline FarFieldPattern solve_frechet_direction(const WaveContext& ctx,
                                               const SurfaceDensity& forward,
                                               const RadialProfile& q,
                                               std::span<const double> obs_angles) {
  return FrechetSolver(forward.grid, ctx).direction(forward, q, obs_angles);
}

/// Sensitivity Jacobian d u_inf / d omega_i for every knot, incidence and observation.
/// The forward and indirect operators do not depend on the incident wave, so each is
/// factored once and reused for all N_inc forward solves and N_inc * N_spline
/// derivative solves.
inline JacobianMatrix assemble_jacobian(const Scatterer& sc, const WaveContext& ctx,
                                        std::span<const IncidentWave> waves,
                                        std::span<const double> obs_angles, std::size_t n_half) {
  if (waves.empty() || obs_angles.empty()) {
    throw std::invalid_argument("assemble_jacobian: waves and observation angles must be nonempty");
  }
  const auto grid = make_grid(sc, n_half);
  const ForwardSolver forward(grid, ctx);
  const FrechetSolver frechet(grid, ctx);

  const std::size_t n_spline = sc.n_spline();
  const std::size_t n_obs = obs_angles.size();
  JacobianMatrix jac = JacobianMatrix::empty(n_spline, waves, obs_angles, ctx);
  jac.stats.forward_factorizations = 1;
  jac.stats.indirect_factorizations = 1;

  std::vector<RadialPerturbation> basis;
  basis.reserve(n_spline);
  for (std::size_t i = 0; i < n_spline; ++i) basis.emplace_back(sc, i);

  for (std::size_t l = 0; l < waves.size(); ++l) {
    const SurfaceDensity trace = forward.solve(waves[l]);
    ++jac.stats.forward_solves;
    parallel_for(n_spline, [&](std::size_t i) {
      const FarFieldPattern row =
          frechet.direction(trace, [&q = basis[i]](double t) { return q(t); }, obs_angles);
      for (std::size_t m = 0; m < n_obs; ++m) jac.entries(i, l * n_obs + m) = row.values[m];
    });
    jac.stats.indirect_solves += n_spline;
  }
  return jac;
}

}  // namespace wavesense
