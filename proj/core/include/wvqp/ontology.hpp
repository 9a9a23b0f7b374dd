// SPDX-License-Identifier: Apache-2.0
//
// Ontological models over a finite ontic space: epistemic states, indicator
// functions, Bayes consistency, synlogicality classification and the
// two-particle locality analysis of the quasiprobabilistic Bohmian model.
//
// Joint functions may be complex; the classical toy models are real.

#pragma once

#include "wvqp/alpha.hpp"
#include "wvqp/bohm.hpp"
#include "wvqp/hilbert.hpp"
#include "wvqp/quasiprob.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wvqp::ontology {

/// Denominators at or below this make a conditional undefined.
inline constexpr double kDensityFloor = 1e-12;

/// p(λ, a | A, ψ) for one (A, ψ): rows λ, columns a (ascending outcomes).
struct JointTable {
  std::vector<double> outcomes;
  Matrix values;
};

/// Must be a pure function of its arguments; classification sweeps may call
/// it concurrently.
using JointFn = std::function<JointTable(const Observable&, const StateVector&)>;

class OntModel {
 public:
  OntModel(std::string name, std::vector<double> ontic_labels, JointFn joint_fn);

  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& ontic_labels() const noexcept { return ontic_labels_; }
  std::size_t n_ontic() const noexcept { return ontic_labels_.size(); }

  /// Evaluates the joint function; throws InvariantViolation unless the
  /// table has one row per ontic state and sums to 1 within 1e-10.
  JointTable joint(const Observable& a, const StateVector& psi) const;

 private:
  std::string name_;
  std::vector<double> ontic_labels_;
  JointFn joint_fn_;
};

/// λ = grid point x, p^α(x, a|ψ) = ⟨ψ|E^X(x)∘_αE^A(a)|ψ⟩. Labels must be
/// distinct; the Hilbert space is the span of the |x⟩.
OntModel bohmian_grid_model(std::vector<double> positions, const Alpha& alpha);

/// Deterministic toy: λ is a basis index with prior |ψ_λ|², and λ fixes the
/// outcome to the eigenvalue of A nearest A_λλ. Meant for observables
/// diagonal in the λ basis; both O-AS and P-AS.
OntModel classical_toy_model(std::size_t dim);

/// λ labels the eigenvectors of the measured A (ascending), with
/// p(λ, a) = |⟨a_λ|ψ⟩|² δ(a, a_λ). The λ-marginal depends on A (O-S) while
/// the indicator does not depend on ψ (P-AS).
OntModel os_toy_model(std::size_t dim);

/// p(λ|A,ψ) = Σ_a p(λ, a|A,ψ).
std::vector<Complex> epistemic_state(const OntModel& model, const Observable& a,
                                     const StateVector& psi);

/// Boolean mask matching a table's shape.
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct IndicatorFunctions {
  std::vector<double> outcomes;
  JointTable joint;
  std::vector<Complex> epistemic;   // p(λ|A,ψ)
  std::vector<Complex> outcome;     // p(a|A,ψ)
  Matrix outcome_given_ontic;       // p(a|λ,A,ψ), rows λ
  Matrix ontic_given_outcome;       // p(λ|a,A,ψ), rows λ
  Mask outcome_given_ontic_defined;
  Mask ontic_given_outcome_defined;
};

/// Both conditionals of the joint; entries whose denominator magnitude is at
/// or below kDensityFloor are flagged undefined and left at zero.
IndicatorFunctions indicator_functions(const OntModel& model, const Observable& a,
                                       const StateVector& psi);

/// max |p(λ|a) − p(a|λ)p(λ)/p(a)| over entries where both conditionals are
/// defined.
double bayes_check(const OntModel& model, const Observable& a, const StateVector& psi);

/// max_a |Σ_λ p(λ, a) − born(a)|. Throws DimMismatch if the outcome counts
/// differ.
double reproduction_check(const OntModel& model, const Observable& a, const StateVector& psi,
                          const std::vector<double>& born);

/// Same against the Born distribution of A in ψ.
double reproduction_check(const OntModel& model, const Observable& a, const StateVector& psi);

/// A concrete (λ, a, A, ψ, ψ′) at which the indicator p(a|λ,A,·) differs.
struct PreparationWitness {
  std::size_t ontic_index = 0;
  std::size_t outcome_index = 0;
  std::size_t observable = 0;
  std::size_t preparation_1 = 0;
  std::size_t preparation_2 = 0;
  double difference = 0.0;
};

/// Two preparations whose epistemic states overlap at some λ.
struct EpistemicWitness {
  std::size_t preparation_1 = 0;
  std::size_t preparation_2 = 0;
  std::size_t ontic_index = 0;
  double overlap = 0.0;
};

struct SynlogicalityReport {
  std::string model;
  /// The epistemic state depends on the measured observable (O-S).
  bool observable_synlogical = false;
  double observable_deviation = 0.0;
  /// The indicator function depends on the preparation (P-S).
  bool preparation_synlogical = false;
  double preparation_deviation = 0.0;
  bool reproduction_ok = true;
  double reproduction_deviation = 0.0;
  double bayes_deviation = 0.0;
  double tolerance = 1e-10;
  /// Entries with a denominator at or below kDensityFloor are excluded from
  /// every comparison; this counts them.
  std::size_t excluded_entries = 0;
  std::optional<PreparationWitness> preparation_witness;
  std::optional<EpistemicWitness> psi_epistemic_witness;

  bool asynlogical() const noexcept { return !observable_synlogical && !preparation_synlogical; }
};

struct ClassifyOptions {
  double tolerance = 1e-10;
  /// Both epistemic densities must exceed this for an entry to serve as a
  /// P-S witness.
  double witness_floor = 1e-6;
};

/// Probes every (observable, preparation) pair. Throws InvariantViolation
/// with fewer than two observables or two preparations.
SynlogicalityReport classify_synlogicality(const OntModel& model,
                                           const std::vector<Observable>& observables,
                                           const std::vector<StateVector>& preparations,
                                           const ClassifyOptions& options = {});

// ------------------------------------------------------------ two particles

/// One particle: n_sites positions times n_internal internal levels, with
/// basis index site·n_internal + level.
struct ParticleLayout {
  std::size_t n_sites = 2;
  std::size_t n_internal = 1;

  std::size_t dim() const noexcept { return n_sites * n_internal; }
  /// |x⟩⟨x| ⊗ I_internal.
  Matrix position_projector(std::size_t site) const;
  /// Spectral decomposition of the site index operator.
  SpectralDecomposition positions() const;
};

/// H₁ ⊗ H₂ with basis index k₁·dim₂ + k₂.
struct BipartiteLayout {
  ParticleLayout first;
  ParticleLayout second;

  std::size_t dim() const noexcept { return first.dim() * second.dim(); }
};

/// p(x₁, x₂, a, b) with a from A on particle 1 and b from B on particle 2.
struct TwoParticleQP {
  std::size_t n_sites_1 = 0;
  std::size_t n_sites_2 = 0;
  std::vector<double> outcomes_a;
  std::vector<double> outcomes_b;
  std::vector<Complex> values;

  std::size_t index(std::size_t x1, std::size_t x2, std::size_t ia, std::size_t ib) const noexcept {
    return ((x1 * n_sites_2 + x2) * outcomes_a.size() + ia) * outcomes_b.size() + ib;
  }
  Complex at(std::size_t x1, std::size_t x2, std::size_t ia, std::size_t ib) const {
    return values.at(index(x1, x2, ia, ib));
  }
  Complex total() const;
  /// Σ over particle 2: p₁(x₁, a), rows x₁.
  Matrix first_marginal() const;
  /// Σ over particle 1: p₂(x₂, b), rows x₂.
  Matrix second_marginal() const;
};

/// p^α(x, a, b|ψ) = ⟨ψ|E^X(x)∘_α(E^A(a)E^B(b))|ψ⟩ with x = (x₁, x₂).
/// Throws DimMismatch.
TwoParticleQP two_particle_joint_qp(const BipartiteLayout& layout, const Observable& a,
                                    const Observable& b, const StateVector& psi,
                                    const Alpha& alpha);
TwoParticleQP two_particle_joint_qp(const BipartiteLayout& layout, const Observable& a,
                                    const Observable& b, const DensityOperator& rho,
                                    const Alpha& alpha);

/// Single-particle p^α(x, a|ψ), rows x and columns a.
QPDistribution single_particle_joint_qp(const ParticleLayout& layout, const Observable& a,
                                        const StateVector& psi, const Alpha& alpha);

/// ⟨A⟩^α_ψ(x) = Σ_a a·p^α(x, a|ψ)/p(x|ψ). Throws ZeroDensityPoint.
Complex local_expectation(const ParticleLayout& layout, const Observable& a,
                          const StateVector& psi, const Alpha& alpha, std::size_t site);

/// ⟨AB⟩^α_ψ(x) = Σ_{a,b} ab·p^α(a, b|x, ψ). Throws ZeroDensityPoint when
/// p(x|ψ) ≤ kDensityFloor.
Complex correlation(const BipartiteLayout& layout, const Observable& a, const Observable& b,
                    const StateVector& psi, const Alpha& alpha, std::size_t x1, std::size_t x2);

/// ⟨ψ|(E^{X₁}(x₁)∘_{α₁}E^A(a)) ⊗ (E^{X₂}(x₂)∘_{α₂}E^B(b))|ψ⟩, each particle
/// carrying its own ordering parameter.
TwoParticleQP alt_joint_qp(const BipartiteLayout& layout, const Observable& a,
                           const Observable& b, const StateVector& psi, const Alpha& alpha1,
                           const Alpha& alpha2);

/// max |p(x₁, x₂, a, b) − p₁(x₁, a)p₂(x₂, b)| against the distribution's own
/// marginals.
double factorization_deviation(const TwoParticleQP& qp);

/// max_x |⟨x|ψ⟩|²|⟨x|φ⟩|². Throws DimMismatch.
double psi_epistemic_witness(const StateVector& psi, const StateVector& phi);

/// max_x |ψ(x)|²|φ(x)|² on a shared grid. Throws GridMismatch.
double psi_epistemic_witness(const bohm::WaveFunction& psi, const bohm::WaveFunction& phi);

}  // namespace wvqp::ontology
