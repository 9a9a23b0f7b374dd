// SPDX-License-Identifier: Apache-2.0
//
// Weak values and the α-parameterized conditional, joint and marginal
// quasiprobability (QP) distributions.
//
// Outcomes are always listed in ascending eigenvalue order. Functions taking
// a SpectralDecomposition let callers reuse one eigen-solve across many
// (ψ, φ, α); the Observable overloads decompose with the default tolerance.

#pragma once

#include "wvqp/alpha.hpp"
#include "wvqp/hilbert.hpp"
#include "wvqp/report.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace wvqp {

/// |⟨φ|ψ⟩| at or below this (for unit states) is treated as orthogonal.
inline constexpr double kOverlapFloor = 1e-12;

enum class QPKind { conditional, joint, marginal };

std::string to_string(QPKind kind);

/// Complex-valued distribution over outcome labels.
///
/// For `joint`, values are stored row-major over (reference outcome b,
/// outcome a): values[ib * outcomes.size() + ia].
struct QPDistribution {
  QPKind kind = QPKind::conditional;
  std::vector<double> reference_outcomes;  // joint only
  std::vector<double> outcomes;
  std::vector<Complex> values;
  Alpha alpha;
  std::string context;

  Complex total() const;
  Complex at(std::size_t ia) const { return values.at(ia); }
  Complex at(std::size_t ib, std::size_t ia) const { return values.at(ib * outcomes.size() + ia); }
};

/// Subset of outcome positions of a spectral decomposition.
class OutcomeSet {
 public:
  /// Throws InvariantViolation on duplicates or indices ≥ n_outcomes.
  static OutcomeSet of(std::vector<std::size_t> indices, std::size_t n_outcomes);
  static OutcomeSet all(std::size_t n_outcomes);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  bool empty() const noexcept { return indices_.empty(); }

 private:
  explicit OutcomeSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {}
  std::vector<std::size_t> indices_;
};

/// ⟨φ|A|ψ⟩/⟨φ|ψ⟩ for the transition ψ → φ. Throws OrthogonalPrePost.
Complex weak_value(const Observable& a, const StateVector& pre, const StateVector& post);

/// p^α(a|ψ,φ) = α⟨φ|E(a)|ψ⟩/⟨φ|ψ⟩ + (1−α)⟨ψ|E(a)|φ⟩/⟨ψ|φ⟩ for every
/// eigenvalue a. Throws OrthogonalPrePost.
QPDistribution conditional_qp(const SpectralDecomposition& a, const StateVector& pre,
                              const StateVector& post, const Alpha& alpha);
QPDistribution conditional_qp(const Observable& a, const StateVector& pre, const StateVector& post,
                              const Alpha& alpha);

/// Σ a·p(a) over a conditional distribution. Throws WrongKind otherwise.
Complex weak_value_from_qp(const QPDistribution& qp);

/// The α-form evaluated on one projector. Throws NotProjector or
/// OrthogonalPrePost.
Complex morita_form(const Matrix& projector, const StateVector& pre, const StateVector& post,
                    const Alpha& alpha);

/// Additivity and boundary-value checks of the α-form.
struct MoritaReport {
  CheckReport checks;
  /// dim ≥ 3, the hypothesis under which the α-form is the unique solution.
  bool uniqueness_hypothesis = false;

  bool passed() const noexcept { return checks.passed(); }
};

/// Checks additivity over the decomposition's mutually orthogonal projectors
/// (all prefix sums) and the four boundary values on P_ψ, P_ψ⊥, P_φ, P_φ⊥,
/// sweeping ψ⊥ and φ⊥ over an orthonormal basis of each complement.
MoritaReport check_morita_conditions(const StateVector& pre, const StateVector& post,
                                     const Alpha& alpha, const SpectralDecomposition& decomposition,
                                     double tolerance = 1e-10);

/// p^α(b,a|ψ) = ⟨ψ|E^B(b)∘_αE^A(a)|ψ⟩ over all (b, a).
QPDistribution joint_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                        const StateVector& psi, const Alpha& alpha);
QPDistribution joint_qp(const Observable& b, const Observable& a, const StateVector& psi,
                        const Alpha& alpha);

/// Mixed-state joint QP, Tr[(E^B(b)∘_αE^A(a))ρ].
QPDistribution joint_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                        const DensityOperator& rho, const Alpha& alpha);

/// p^α(b,a|ψ) − p^α(a,b|ψ) from two joint distributions; rows b, columns a.
Matrix commutator_asymmetry(const SpectralDecomposition& b, const SpectralDecomposition& a,
                            const StateVector& psi, const Alpha& alpha);
Matrix commutator_asymmetry(const Observable& b, const Observable& a, const StateVector& psi,
                            const Alpha& alpha);

/// ⟨ψ|[E^B(b), E^A(a)]|ψ⟩; rows b, columns a.
Matrix projector_commutator_expectations(const SpectralDecomposition& b,
                                         const SpectralDecomposition& a, const StateVector& psi);

/// Σ_b p^α(b,a|ψ). Throws InvariantViolation if the result is not a real
/// distribution within 1e-10.
QPDistribution marginal_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                           const StateVector& psi, const Alpha& alpha);
QPDistribution marginal_qp(const Observable& b, const Observable& a, const StateVector& psi,
                           const Alpha& alpha);
QPDistribution marginal_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                           const DensityOperator& rho, const Alpha& alpha);

/// ⟨ψ|E^A(a)|ψ⟩ per eigenvalue (rank-weighted for degenerate a), as a
/// marginal distribution.
QPDistribution born_distribution(const SpectralDecomposition& a, const StateVector& psi);
QPDistribution born_distribution(const SpectralDecomposition& a, const DensityOperator& rho);

/// p^α(a ∈ Δ|ψ,φ) with E^A(Δ) = Σ_{i∈Δ} Pᵢ. Throws OrthogonalPrePost.
Complex qp_of_set(const SpectralDecomposition& a, const StateVector& pre, const StateVector& post,
                  const Alpha& alpha, const OutcomeSet& set);

/// Conditional QP given a reference projector E_b:
///   [α⟨ψ|E_b E^A(a)|ψ⟩ + (1−α)⟨ψ|E^A(a) E_b|ψ⟩] / ⟨ψ|E_b|ψ⟩.
/// For rank-1 E_b = |b⟩⟨b| this is p^α(a|ψ,b). Throws OrthogonalPrePost when
/// ⟨ψ|E_b|ψ⟩ ≤ kOverlapFloor².
std::vector<Complex> conditional_qp_given_reference(const SpectralDecomposition& a,
                                                    const Matrix& reference_projector,
                                                    const StateVector& psi, const Alpha& alpha);

/// Σ_a a·p^α(a|ψ,b) for a reference projector E_b, i.e.
///   [α⟨ψ|E_b A|ψ⟩ + (1−α)⟨ψ|A E_b|ψ⟩] / ⟨ψ|E_b|ψ⟩.
Complex reference_conditioned_mean(const Matrix& a, const Matrix& reference_projector,
                                   const StateVector& psi, const Alpha& alpha);

/// Checks p^α(b′|ψ,b) = δ_{bb′} with B as both measured and reference
/// observable, for every b with ⟨ψ|E^B(b)|ψ⟩ above kOverlapFloor².
CheckReport deterministic_reference_check(const SpectralDecomposition& b, const StateVector& psi,
                                          const Alpha& alpha, double tolerance = 1e-10);

}  // namespace wvqp
