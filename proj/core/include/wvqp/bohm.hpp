// SPDX-License-Identifier: Apache-2.0
//
// Bohmian mechanics on a uniform 1D grid with hard walls.
//
// Grid point j is identified with the ontic position x_j; the position
// eigenvector |x_j⟩ is the j-th basis vector scaled by 1/√dx, so ⟨x_j|ψ⟩ is
// the wave function value ψ_j and dx·Σ|ψ_j|² = 1. Observables on the grid are
// n×n matrices acting on the amplitude vector.

#pragma once

#include "wvqp/alpha.hpp"
#include "wvqp/hilbert.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wvqp::bohm {

class Grid1D {
 public:
  /// Throws InvariantViolation unless n_points ≥ 8 and x_max > x_min.
  Grid1D(std::size_t n_points, double x_min, double x_max);

  std::size_t size() const noexcept { return n_points_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * dx_; }
  std::vector<double> points() const;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  std::size_t n_points_;
  double x_min_;
  double x_max_;
  double dx_;
};

struct BohmConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double dt = 1e-3;
  /// V(x_j), one value per grid point; empty means free particle.
  std::vector<double> potential;

  /// Throws InvariantViolation unless hbar, mass, dt > 0 and the potential is
  /// empty or sized to the grid.
  void validate(const Grid1D& grid) const;
};

std::vector<double> harmonic_potential(const Grid1D& grid, double mass, double omega,
                                       double center = 0.0);

/// Sampled wave function with dx·Σ|ψ|² = 1 (within 1e-8).
class WaveFunction {
 public:
  /// Throws InvariantViolation if the grid size differs or the norm is off.
  WaveFunction(Grid1D grid, Vector amplitudes);

  /// Rescales to unit discrete norm.
  static WaveFunction normalized(Grid1D grid, Vector amplitudes);

  /// (2πσ₀²)^{-1/4} exp(−(x−x₀)²/4σ₀² + ik₀x), renormalized on the grid.
  /// σ₀ is the standard deviation of |ψ|².
  static WaveFunction gaussian(const Grid1D& grid, double x0, double sigma0, double k0);

  /// Interprets a unit state vector as grid amplitudes ψ_j = c_j/√dx.
  static WaveFunction from_state(const Grid1D& grid, const StateVector& state);

  const Grid1D& grid() const noexcept { return grid_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  double norm() const;
  /// |ψ(x_j)|².
  std::vector<double> density() const;
  /// The unit-norm Hilbert-space vector c_j = √dx ψ_j.
  StateVector to_state() const;
  /// dx·ψ†Aψ.
  Complex expectation(const Matrix& a) const;
  /// 1e-12·max|ψ|²; points at or below it are nodes.
  double node_floor() const;

 private:
  Grid1D grid_;
  Vector amplitudes_;
};

/// −ħ²/2m·(1,−2,1)/dx² + V, Dirichlet boundaries.
Observable build_hamiltonian(const Grid1D& grid, const BohmConfig& cfg);

/// diag(x_j).
Observable position_operator(const Grid1D& grid);

/// −iħ centered-difference derivative with Dirichlet boundaries.
Observable momentum_operator(const Grid1D& grid, double hbar);

/// Crank–Nicolson propagator (1 + iHΔt/2ħ)ψ' = (1 − iHΔt/2ħ)ψ. Tridiagonal H
/// uses a prefactored Thomas solve; anything else a dense LU.
class CrankNicolson {
 public:
  /// Throws SolverFailure if the implicit operator cannot be factored.
  CrankNicolson(const Observable& h, double hbar, double dt);

  void step(Vector& amplitudes) const;
  bool tridiagonal() const noexcept { return tridiagonal_; }

 private:
  bool tridiagonal_ = false;
  Complex tau_;  // iΔt/2ħ
  // Tridiagonal path: H bands and the forward-eliminated factors.
  Vector diag_;
  Vector lower_;
  Vector upper_;
  Vector pivot_;
  Vector multiplier_;
  // Dense path.
  Matrix explicit_;
  Eigen::PartialPivLU<Matrix> lu_;
};

/// Estimate of the largest energy populated by ψ: |⟨H⟩| + 3ΔE.
double populated_energy_scale(const WaveFunction& psi, const Observable& h);

/// True when dt·E/ħ > 0.5 for E = populated_energy_scale.
bool timestep_too_large(const WaveFunction& psi, const Observable& h, const BohmConfig& cfg);

/// Advances ψ by n_steps Crank–Nicolson steps of cfg.dt.
WaveFunction evolve(const WaveFunction& psi, const Observable& h, const BohmConfig& cfg,
                    std::size_t n_steps);

/// Real field on the grid with per-point validity flags.
struct GridField {
  std::vector<double> values;
  std::vector<bool> defined;
};

/// v = (ħ/m)·Im(ψ′/ψ) with centered differences (zero ghost points). Nodes
/// are flagged undefined.
GridField velocity_field(const WaveFunction& psi, const BohmConfig& cfg);

/// Local value of an observable at each grid point.
struct ValueField {
  Grid1D grid;
  std::vector<Complex> values;
  std::vector<bool> defined;
  Alpha alpha;
  std::string observable_tag;
  /// |ψ(x)|²·field(x) in the product form α ψ̄(Aψ) + (1−α) ψ(Aψ)̄, finite at
  /// nodes too. Empty for hand-built fields.
  std::vector<Complex> weighted;
};

/// α⟨x|A|ψ⟩/⟨x|ψ⟩ + (1−α)⟨ψ|A|x⟩/⟨ψ|x⟩ per grid point; at α = ½ this is the
/// real local expectation value Re(Aψ)(x)/ψ(x).
ValueField local_value(const Observable& a, const WaveFunction& psi, const Alpha& alpha,
                       std::string observable_tag = "A");

/// dx·Σ field(x)|ψ(x)|². Flagged points use the weighted term when the field
/// carries one (a nonlocal A still has ψ̄(Aψ) ≠ 0 there), else contribute 0.
/// Throws GridMismatch.
Complex ensemble_average(const ValueField& field, const WaveFunction& psi);

/// i.i.d. draws from |ψ|²dx: inverse CDF over cells [x_j ± dx/2] (clipped
/// to the domain) with uniform jitter inside the cell. Draw k uses its own
/// generator seeded from (seed, k).
std::vector<double> sample_initial_positions(const WaveFunction& psi, std::size_t m_samples,
                                             std::uint64_t seed);

struct TrajectoryEnsemble {
  /// positions[k][j] is trajectory k at times[j].
  std::vector<std::vector<double>> positions;
  std::vector<double> times;
  std::uint64_t seed = 0;
  /// Final ordering of positions equals the initial ordering.
  bool order_preserved = true;

  std::vector<double> final_positions() const;
};

struct TrajectoryOptions {
  /// Record every `record_stride`-th step; the final time is always recorded.
  std::size_t record_stride = 1;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
};

struct TrajectoryRun {
  TrajectoryEnsemble ensemble;
  WaveFunction final_state;
};

/// Integrates dx/dt = v(x,t) with RK4 while ψ advances by Crank–Nicolson in
/// lockstep. The velocity is interpolated linearly in x between grid points
/// and linearly in t between consecutive snapshots. Throws NodeEncounter
/// (lowest trajectory index) if any trajectory touches an undefined cell or
/// leaves the domain; throws InvariantViolation unless t_final is a whole
/// number of steps.
TrajectoryRun integrate_trajectories(const WaveFunction& psi0, const Observable& h,
                                     const BohmConfig& cfg, const std::vector<double>& starts,
                                     double t_final, const TrajectoryOptions& options = {});

/// Number of dt steps in t_final; throws InvariantViolation if not whole.
std::size_t steps_for(double t_final, double dt);

/// CDF of |ψ|²dx on the cell model used by sample_initial_positions.
double density_cdf(const WaveFunction& psi, double x);

/// Kolmogorov–Smirnov distance between the empirical CDF of the final
/// trajectory positions and the CDF of |ψ_t|²dx.
double equivariance_check(const TrajectoryEnsemble& ensemble, const WaveFunction& psi_t);

}  // namespace wvqp::bohm
