// SPDX-License-Identifier: Apache-2.0

#include "wvqp/bohm.hpp"

#include "wvqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

namespace wvqp::bohm {

namespace {

constexpr double kWaveFunctionNormTolerance = 1e-8;
constexpr double kNodeFloorFactor = 1e-12;

void require_grid_dim(const Grid1D& grid, std::size_t dim, const char* what) {
  if (grid.size() != dim) {
    throw DimMismatch(std::string(what) + ": operator dim " + std::to_string(dim) +
                      " != grid size " + std::to_string(grid.size()));
  }
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Cell j covers [x_j − dx/2, x_j + dx/2] clipped to the domain.
double cell_lo(const Grid1D& g, std::size_t j) { return std::max(g.x_min(), g.x(j) - 0.5 * g.dx()); }
double cell_hi(const Grid1D& g, std::size_t j) { return std::min(g.x_max(), g.x(j) + 0.5 * g.dx()); }

// cumulative[j] is the probability mass of cells 0..j-1; size n+1.
std::vector<double> cumulative_mass(const WaveFunction& psi) {
  const auto density = psi.density();
  std::vector<double> cum(density.size() + 1, 0.0);
  for (std::size_t j = 0; j < density.size(); ++j) cum[j + 1] = cum[j] + density[j] * psi.grid().dx();
  return cum;
}

std::size_t cell_of(const Grid1D& g, double x) {
  const double r = std::floor((x - g.x_min()) / g.dx() + 0.5);
  if (r <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(r), g.size() - 1);
}

}  // namespace

// --------------------------------------------------------------------- Grid1D

Grid1D::Grid1D(std::size_t n_points, double x_min, double x_max)
    : n_points_(n_points), x_min_(x_min), x_max_(x_max), dx_(0.0) {
  if (n_points < 8) throw InvariantViolation("grid needs at least 8 points");
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw InvariantViolation("grid needs finite x_max > x_min");
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

std::vector<double> Grid1D::points() const {
  std::vector<double> xs(n_points_);
  for (std::size_t j = 0; j < n_points_; ++j) xs[j] = x(j);
  return xs;
}

void BohmConfig::validate(const Grid1D& grid) const {
  if (!(hbar > 0.0)) throw InvariantViolation("hbar must be > 0");
  if (!(mass > 0.0)) throw InvariantViolation("mass must be > 0");
  if (!(dt > 0.0)) throw InvariantViolation("dt must be > 0");
  if (!potential.empty() && potential.size() != grid.size()) {
    throw InvariantViolation("potential must have one value per grid point");
  }
}

std::vector<double> harmonic_potential(const Grid1D& grid, double mass, double omega, double center) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = grid.x(j) - center;
    v[j] = 0.5 * mass * omega * omega * d * d;
  }
  return v;
}

// --------------------------------------------------------------- WaveFunction

WaveFunction::WaveFunction(Grid1D grid, Vector amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != grid_.size()) {
    throw InvariantViolation("wave function size does not match the grid");
  }
  if (!std::isfinite(amplitudes_.squaredNorm())) {
    throw InvariantViolation("wave function has non-finite amplitudes");
  }
  if (std::abs(norm() - 1.0) > kWaveFunctionNormTolerance) {
    throw InvariantViolation("wave function is not normalized: dx*sum|psi|^2 = " +
                             std::to_string(norm()));
  }
}

WaveFunction WaveFunction::normalized(Grid1D grid, Vector amplitudes) {
  const double mass = amplitudes.squaredNorm() * grid.dx();
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw InvariantViolation("cannot normalize a zero or non-finite wave function");
  }
  amplitudes /= std::sqrt(mass);
  return WaveFunction(grid, std::move(amplitudes));
}

WaveFunction WaveFunction::gaussian(const Grid1D& grid, double x0, double sigma0, double k0) {
  if (!(sigma0 > 0.0)) throw InvariantViolation("gaussian width must be > 0");
  const double prefactor = std::pow(2.0 * std::numbers::pi * sigma0 * sigma0, -0.25);
  Vector amps(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const double d = x - x0;
    amps(static_cast<Eigen::Index>(j)) =
        prefactor * std::exp(Complex(-d * d / (4.0 * sigma0 * sigma0), k0 * x));
  }
  return normalized(grid, std::move(amps));
}

WaveFunction WaveFunction::from_state(const Grid1D& grid, const StateVector& state) {
  require_grid_dim(grid, state.dim(), "from_state");
  return normalized(grid, state.amplitudes() / std::sqrt(grid.dx()));
}

double WaveFunction::norm() const { return amplitudes_.squaredNorm() * grid_.dx(); }

std::vector<double> WaveFunction::density() const {
  std::vector<double> rho(grid_.size());
  for (std::size_t j = 0; j < grid_.size(); ++j) rho[j] = std::norm(amplitudes_(static_cast<Eigen::Index>(j)));
  return rho;
}

StateVector WaveFunction::to_state() const {
  return StateVector::normalized(amplitudes_ * std::sqrt(grid_.dx()));
}

Complex WaveFunction::expectation(const Matrix& a) const {
  require_grid_dim(grid_, static_cast<std::size_t>(a.rows()), "expectation");
  return grid_.dx() * amplitudes_.dot(a * amplitudes_);
}

double WaveFunction::node_floor() const {
  return kNodeFloorFactor * amplitudes_.cwiseAbs2().maxCoeff();
}

// ------------------------------------------------------------------ operators

Observable build_hamiltonian(const Grid1D& grid, const BohmConfig& cfg) {
  cfg.validate(grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double kinetic = cfg.hbar * cfg.hbar / (2.0 * cfg.mass * grid.dx() * grid.dx());
  Matrix h = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = cfg.potential.empty() ? 0.0 : cfg.potential[static_cast<std::size_t>(j)];
    h(j, j) = 2.0 * kinetic + v;
    if (j + 1 < n) {
      h(j, j + 1) = -kinetic;
      h(j + 1, j) = -kinetic;
    }
  }
  return Observable::from_matrix(std::move(h));
}

Observable position_operator(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Matrix x = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) x(j, j) = grid.x(static_cast<std::size_t>(j));
  return Observable::from_matrix(std::move(x));
}

Observable momentum_operator(const Grid1D& grid, double hbar) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Complex c(0.0, -hbar / (2.0 * grid.dx()));
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    p(j, j + 1) = c;
    p(j + 1, j) = -c;
  }
  return Observable::from_matrix(std::move(p));
}

// -------------------------------------------------------------- CrankNicolson

CrankNicolson::CrankNicolson(const Observable& h, double hbar, double dt)
    : tau_(0.0, dt / (2.0 * hbar)) {
  if (!(hbar > 0.0) || !(dt > 0.0)) throw InvariantViolation("hbar and dt must be > 0");
  const Matrix& m = h.matrix();
  const Eigen::Index n = m.rows();

  tridiagonal_ = true;
  for (Eigen::Index j = 0; j < n && tridiagonal_; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(i - j) > 1 && m(i, j) != Complex(0.0)) {
        tridiagonal_ = false;
        break;
      }
    }
  }

  if (tridiagonal_) {
    diag_ = m.diagonal();
    lower_ = Vector::Zero(n);
    upper_ = Vector::Zero(n);
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      upper_(j) = m(j, j + 1);
      lower_(j + 1) = m(j + 1, j);
    }
    pivot_ = Vector(n);
    multiplier_ = Vector::Zero(n);
    pivot_(0) = 1.0 + tau_ * diag_(0);
    for (Eigen::Index j = 1; j < n; ++j) {
      if (std::abs(pivot_(j - 1)) < 1e-300) throw SolverFailure("Crank-Nicolson: zero pivot");
      multiplier_(j) = tau_ * lower_(j) / pivot_(j - 1);
      pivot_(j) = 1.0 + tau_ * diag_(j) - multiplier_(j) * tau_ * upper_(j - 1);
    }
    if (std::abs(pivot_(n - 1)) < 1e-300) throw SolverFailure("Crank-Nicolson: zero pivot");
  } else {
    const Matrix id = Matrix::Identity(n, n);
    explicit_ = id - tau_ * m;
    lu_.compute(id + tau_ * m);
    if (!(lu_.rcond() > 1e-14)) throw SolverFailure("Crank-Nicolson: implicit operator is singular");
  }
}

void CrankNicolson::step(Vector& psi) const {
  const Eigen::Index n = psi.size();
  if (!tridiagonal_) {
    psi = lu_.solve(explicit_ * psi);
    return;
  }
  // rhs = (1 − τH)ψ, then forward/back substitution.
  Vector y(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex hpsi = diag_(j) * psi(j);
    if (j > 0) hpsi += lower_(j) * psi(j - 1);
    if (j + 1 < n) hpsi += upper_(j) * psi(j + 1);
    y(j) = psi(j) - tau_ * hpsi;
  }
  for (Eigen::Index j = 1; j < n; ++j) y(j) -= multiplier_(j) * y(j - 1);
  psi(n - 1) = y(n - 1) / pivot_(n - 1);
  for (Eigen::Index j = n - 2; j >= 0; --j) psi(j) = (y(j) - tau_ * upper_(j) * psi(j + 1)) / pivot_(j);
}

double populated_energy_scale(const WaveFunction& psi, const Observable& h) {
  require_grid_dim(psi.grid(), h.dim(), "populated_energy_scale");
  const Vector hpsi = h.matrix() * psi.amplitudes();
  const double dx = psi.grid().dx();
  const double mean = (dx * psi.amplitudes().dot(hpsi)).real();
  const double second = dx * hpsi.squaredNorm();
  return std::abs(mean) + 3.0 * std::sqrt(std::max(0.0, second - mean * mean));
}

bool timestep_too_large(const WaveFunction& psi, const Observable& h, const BohmConfig& cfg) {
  return cfg.dt * populated_energy_scale(psi, h) / cfg.hbar > 0.5;
}

WaveFunction evolve(const WaveFunction& psi, const Observable& h, const BohmConfig& cfg,
                    std::size_t n_steps) {
  require_grid_dim(psi.grid(), h.dim(), "evolve");
  cfg.validate(psi.grid());
  if (n_steps == 0) return psi;
  const CrankNicolson stepper(h, cfg.hbar, cfg.dt);
  Vector amps = psi.amplitudes();
  for (std::size_t s = 0; s < n_steps; ++s) stepper.step(amps);
  return WaveFunction(psi.grid(), std::move(amps));
}

// --------------------------------------------------------------------- fields

GridField velocity_field(const WaveFunction& psi, const BohmConfig& cfg) {
  const Grid1D& g = psi.grid();
  const Vector& a = psi.amplitudes();
  const auto n = static_cast<Eigen::Index>(g.size());
  const double floor = psi.node_floor();
  const double scale = cfg.hbar / cfg.mass;

  GridField field;
  field.values.assign(g.size(), 0.0);
  field.defined.assign(g.size(), false);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::norm(a(j)) <= floor) continue;
    const Complex right = j + 1 < n ? a(j + 1) : Complex(0.0);
    const Complex left = j > 0 ? a(j - 1) : Complex(0.0);
    const Complex derivative = (right - left) / (2.0 * g.dx());
    field.values[static_cast<std::size_t>(j)] = scale * (derivative / a(j)).imag();
    field.defined[static_cast<std::size_t>(j)] = true;
  }
  return field;
}

ValueField local_value(const Observable& a, const WaveFunction& psi, const Alpha& alpha,
                       std::string observable_tag) {
  require_grid_dim(psi.grid(), a.dim(), "local_value");
  const Vector& amps = psi.amplitudes();
  const Vector apsi = a.matrix() * amps;
  const double floor = psi.node_floor();

  ValueField field{psi.grid(), {}, {}, alpha, std::move(observable_tag), {}};
  field.values.assign(psi.grid().size(), Complex(0.0));
  field.defined.assign(psi.grid().size(), false);
  field.weighted.assign(psi.grid().size(), Complex(0.0));
  for (Eigen::Index j = 0; j < amps.size(); ++j) {
    const Complex w = std::conj(amps(j)) * apsi(j);
    field.weighted[static_cast<std::size_t>(j)] = alpha.value() * w + alpha.complement() * std::conj(w);
    if (std::norm(amps(j)) <= floor) continue;
    const Complex forward = apsi(j) / amps(j);                         // ⟨x|A|ψ⟩/⟨x|ψ⟩
    const Complex reverse = std::conj(apsi(j)) / std::conj(amps(j));   // ⟨ψ|A|x⟩/⟨ψ|x⟩
    field.values[static_cast<std::size_t>(j)] = alpha.value() * forward + alpha.complement() * reverse;
    field.defined[static_cast<std::size_t>(j)] = true;
  }
  return field;
}

Complex ensemble_average(const ValueField& field, const WaveFunction& psi) {
  if (!(field.grid == psi.grid())) throw GridMismatch("value field and wave function grids differ");
  Complex acc{0.0, 0.0};
  const Vector& amps = psi.amplitudes();
  const bool has_weighted = field.weighted.size() == field.values.size();
  for (std::size_t j = 0; j < field.values.size(); ++j) {
    if (field.defined[j]) {
      acc += field.values[j] * std::norm(amps(static_cast<Eigen::Index>(j)));
    } else if (has_weighted) {
      acc += field.weighted[j];
    }
  }
  return acc * psi.grid().dx();
}

// ------------------------------------------------------------------- sampling

std::vector<double> sample_initial_positions(const WaveFunction& psi, std::size_t m_samples,
                                             std::uint64_t seed) {
  if (m_samples == 0) throw InvariantViolation("need at least one sample");
  const Grid1D& g = psi.grid();
  const auto cum = cumulative_mass(psi);
  const double total = cum.back();

  std::vector<double> out(m_samples);
  for (std::size_t k = 0; k < m_samples; ++k) {
    auto rng = stream_for(seed, k);
    const double target = unit_uniform(rng) * total;
    auto it = std::upper_bound(cum.begin() + 1, cum.end(), target);
    std::size_t j = static_cast<std::size_t>(std::distance(cum.begin() + 1, it));
    j = std::min(j, g.size() - 1);
    // Skip empty cells that upper_bound can land on only through ties.
    while (cum[j + 1] - cum[j] <= 0.0 && j + 1 < g.size()) ++j;
    const double lo = cell_lo(g, j);
    const double hi = cell_hi(g, j);
    out[k] = lo + unit_uniform(rng) * (hi - lo);
  }
  return out;
}

double density_cdf(const WaveFunction& psi, double x) {
  const Grid1D& g = psi.grid();
  if (x <= g.x_min()) return 0.0;
  if (x >= g.x_max()) return 1.0;
  const auto cum = cumulative_mass(psi);
  const std::size_t j = cell_of(g, x);
  const double lo = cell_lo(g, j);
  const double hi = cell_hi(g, j);
  const double frac = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
  return (cum[j] + frac * (cum[j + 1] - cum[j])) / cum.back();
}

// --------------------------------------------------------------- trajectories

std::size_t steps_for(double t_final, double dt) {
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw InvariantViolation("need t_final >= 0 and dt > 0");
  const double ratio = t_final / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw InvariantViolation("t_final must be a whole number of dt steps");
  }
  return static_cast<std::size_t>(steps);
}

std::vector<double> TrajectoryEnsemble::final_positions() const {
  std::vector<double> out;
  out.reserve(positions.size());
  for (const auto& p : positions) out.push_back(p.back());
  return out;
}

namespace {

// Velocity snapshots with NaN at undefined points.
class VelocityHistory {
 public:
  VelocityHistory(const Grid1D& grid, std::size_t n_snapshots)
      : grid_(grid), n_(grid.size()), data_(n_snapshots * grid.size()) {}

  void store(std::size_t step, const GridField& field) {
    double* row = data_.data() + step * n_;
    for (std::size_t j = 0; j < n_; ++j) {
      row[j] = field.defined[j] ? field.values[j] : std::numeric_limits<double>::quiet_NaN();
    }
  }

  // Returns NaN outside the domain or next to an undefined point.
  double at(double x, std::size_t step, double theta) const {
    if (!(x >= grid_.x_min()) || !(x <= grid_.x_max())) return std::numeric_limits<double>::quiet_NaN();
    const double r = (x - grid_.x_min()) / grid_.dx();
    std::size_t i = static_cast<std::size_t>(r);
    if (i >= n_ - 1) i = n_ - 2;
    const double w = r - static_cast<double>(i);
    const double* now = data_.data() + step * n_;
    double v = (1.0 - w) * now[i] + w * now[i + 1];
    if (theta > 0.0) {
      const double* next = now + n_;
      v = (1.0 - theta) * v + theta * ((1.0 - w) * next[i] + w * next[i + 1]);
    }
    return v;
  }

 private:
  Grid1D grid_;
  std::size_t n_;
  std::vector<double> data_;
};

}  // namespace

TrajectoryRun integrate_trajectories(const WaveFunction& psi0, const Observable& h,
                                     const BohmConfig& cfg, const std::vector<double>& starts,
                                     double t_final, const TrajectoryOptions& options) {
  require_grid_dim(psi0.grid(), h.dim(), "integrate_trajectories");
  cfg.validate(psi0.grid());
  if (starts.empty()) throw InvariantViolation("need at least one trajectory");
  const std::size_t n_steps = steps_for(t_final, cfg.dt);
  const std::size_t stride = std::max<std::size_t>(options.record_stride, 1);
  const Grid1D& grid = psi0.grid();

  VelocityHistory history(grid, n_steps + 1);
  Vector amps = psi0.amplitudes();
  {
    const CrankNicolson stepper(h, cfg.hbar, cfg.dt);
    WaveFunction current = psi0;
    history.store(0, velocity_field(current, cfg));
    for (std::size_t s = 1; s <= n_steps; ++s) {
      stepper.step(amps);
      // Construct without renormalizing; CN is unitary.
      current = WaveFunction(grid, amps);
      history.store(s, velocity_field(current, cfg));
    }
  }

  std::vector<std::size_t> recorded_steps;
  for (std::size_t s = 0; s <= n_steps; s += stride) recorded_steps.push_back(s);
  if (recorded_steps.back() != n_steps) recorded_steps.push_back(n_steps);

  TrajectoryEnsemble ensemble;
  ensemble.seed = options.seed;
  for (std::size_t s : recorded_steps) ensemble.times.push_back(static_cast<double>(s) * cfg.dt);
  ensemble.positions.assign(starts.size(), std::vector<double>(recorded_steps.size()));

  struct Failure {
    double x;
    double t;
  };
  std::vector<std::optional<Failure>> failures(starts.size());
  const double dt = cfg.dt;

  const auto integrate_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      double x = starts[k];
      auto& out = ensemble.positions[k];
      std::size_t next_record = 0;
      if (std::isnan(history.at(x, 0, 0.0))) {
        failures[k] = Failure{x, 0.0};
        continue;
      }
      for (std::size_t s = 0; s <= n_steps; ++s) {
        if (next_record < recorded_steps.size() && recorded_steps[next_record] == s) out[next_record++] = x;
        if (s == n_steps) break;
        const double k1 = history.at(x, s, 0.0);
        const double k2 = history.at(x + 0.5 * dt * k1, s, 0.5);
        const double k3 = history.at(x + 0.5 * dt * k2, s, 0.5);
        const double k4 = history.at(x + dt * k3, s, 1.0);
        const double next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::isnan(next) || std::isnan(history.at(next, s + 1, 0.0))) {
          failures[k] = Failure{std::isnan(next) ? x : next, static_cast<double>(s + 1) * dt};
          break;
        }
        x = next;
      }
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(options.threads, 1, starts.size());
  if (n_threads == 1) {
    integrate_range(0, starts.size());
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (starts.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(starts.size(), begin + chunk);
      if (begin < end) workers.emplace_back(integrate_range, begin, end);
    }
  }

  for (std::size_t k = 0; k < failures.size(); ++k) {
    if (failures[k]) throw NodeEncounter(k, failures[k]->x, failures[k]->t);
  }

  std::vector<std::size_t> order(starts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return starts[a] < starts[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const double prev = ensemble.positions[order[i - 1]].back();
    const double cur = ensemble.positions[order[i]].back();
    if (starts[order[i - 1]] < starts[order[i]] && !(prev < cur)) ensemble.order_preserved = false;
  }

  return TrajectoryRun{std::move(ensemble), WaveFunction(grid, std::move(amps))};
}

double equivariance_check(const TrajectoryEnsemble& ensemble, const WaveFunction& psi_t) {
  auto xs = ensemble.final_positions();
  std::sort(xs.begin(), xs.end());
  const auto cum = cumulative_mass(psi_t);
  const Grid1D& g = psi_t.grid();
  const double m = static_cast<double>(xs.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double model = 1.0;
    if (xs[i] <= g.x_min()) {
      model = 0.0;
    } else if (xs[i] < g.x_max()) {
      const std::size_t j = cell_of(g, xs[i]);
      const double lo = cell_lo(g, j);
      const double hi = cell_hi(g, j);
      const double frac = std::clamp((xs[i] - lo) / (hi - lo), 0.0, 1.0);
      model = (cum[j] + frac * (cum[j + 1] - cum[j])) / cum.back();
    }
    ks = std::max({ks, std::abs(model - static_cast<double>(i) / m),
                   std::abs(model - static_cast<double>(i + 1) / m)});
  }
  return ks;
}

}  // namespace wvqp::bohm
