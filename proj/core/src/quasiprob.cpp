// SPDX-License-Identifier: Apache-2.0

#include "wvqp/quasiprob.hpp"

#include "wvqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wvqp {

namespace {

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw DimMismatch(std::string(what) + ": dimension " + std::to_string(got) + " != " +
                      std::to_string(expected));
  }
}

// ⟨φ|ψ⟩, rejecting (near-)orthogonal pairs.
Complex transition_amplitude(const StateVector& pre, const StateVector& post) {
  const Complex overlap = inner(post, pre);
  if (std::abs(overlap) <= kOverlapFloor) {
    throw OrthogonalPrePost("pre- and post-selected states are orthogonal (|<phi|psi>| = " +
                            std::to_string(std::abs(overlap)) + ")");
  }
  return overlap;
}

// α⟨φ|P|ψ⟩/⟨φ|ψ⟩ + (1−α)⟨ψ|P|φ⟩/⟨ψ|φ⟩ for Hermitian P.
Complex alpha_form(const Matrix& p, const StateVector& pre, const StateVector& post,
                   Complex overlap, const Alpha& alpha) {
  const Complex forward = post.amplitudes().dot(p * pre.amplitudes()) / overlap;
  const Complex reverse = pre.amplitudes().dot(p * post.amplitudes()) / std::conj(overlap);
  return alpha.value() * forward + alpha.complement() * reverse;
}

// α g + (1−α) conj(g) with g = ⟨ψ|E_b E_a|ψ⟩ = (E_bψ)†(E_aψ).
Complex alpha_mix(Complex g, const Alpha& alpha) {
  return alpha.value() * g + alpha.complement() * std::conj(g);
}

std::vector<Vector> projected(const SpectralDecomposition& d, const Vector& psi) {
  std::vector<Vector> out;
  out.reserve(d.size());
  for (const auto& p : d.projectors) out.push_back(p * psi);
  return out;
}

void require_real_distribution(const QPDistribution& qp) {
  for (const auto& v : qp.values) {
    if (std::abs(v.imag()) > 1e-10 || v.real() < -1e-10 || v.real() > 1.0 + 1e-10) {
      throw InvariantViolation("marginal distribution is not a real probability distribution");
    }
  }
}

}  // namespace

std::string to_string(QPKind kind) {
  switch (kind) {
    case QPKind::conditional:
      return "conditional";
    case QPKind::joint:
      return "joint";
    case QPKind::marginal:
      return "marginal";
  }
  return "unknown";
}

Complex QPDistribution::total() const {
  return std::accumulate(values.begin(), values.end(), Complex{0.0, 0.0});
}

OutcomeSet OutcomeSet::of(std::vector<std::size_t> indices, std::size_t n_outcomes) {
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvariantViolation("outcome set has duplicate indices");
  }
  if (!sorted.empty() && sorted.back() >= n_outcomes) {
    throw InvariantViolation("outcome set index out of range");
  }
  return OutcomeSet(std::move(indices));
}

OutcomeSet OutcomeSet::all(std::size_t n_outcomes) {
  std::vector<std::size_t> idx(n_outcomes);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return OutcomeSet(std::move(idx));
}

Complex weak_value(const Observable& a, const StateVector& pre, const StateVector& post) {
  require_dim(a.dim(), pre.dim(), "weak_value");
  require_dim(a.dim(), post.dim(), "weak_value");
  const Complex overlap = transition_amplitude(pre, post);
  return post.amplitudes().dot(a.matrix() * pre.amplitudes()) / overlap;
}

QPDistribution conditional_qp(const SpectralDecomposition& a, const StateVector& pre,
                              const StateVector& post, const Alpha& alpha) {
  require_dim(a.dim(), pre.dim(), "conditional_qp");
  require_dim(a.dim(), post.dim(), "conditional_qp");
  const Complex overlap = transition_amplitude(pre, post);

  QPDistribution qp;
  qp.kind = QPKind::conditional;
  qp.outcomes = a.eigenvalues;
  qp.alpha = alpha;
  qp.context = "pre/post-selected (psi -> phi)";
  qp.values.reserve(a.size());
  for (const auto& p : a.projectors) qp.values.push_back(alpha_form(p, pre, post, overlap, alpha));
  return qp;
}

QPDistribution conditional_qp(const Observable& a, const StateVector& pre, const StateVector& post,
                              const Alpha& alpha) {
  return conditional_qp(spectral_decompose(a), pre, post, alpha);
}

Complex weak_value_from_qp(const QPDistribution& qp) {
  if (qp.kind != QPKind::conditional) {
    throw WrongKind("weak_value_from_qp needs a conditional distribution, got " + to_string(qp.kind));
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < qp.values.size(); ++i) acc += qp.outcomes[i] * qp.values[i];
  return acc;
}

Complex morita_form(const Matrix& projector, const StateVector& pre, const StateVector& post,
                    const Alpha& alpha) {
  require_dim(static_cast<std::size_t>(projector.rows()), pre.dim(), "morita_form");
  require_dim(static_cast<std::size_t>(projector.rows()), post.dim(), "morita_form");
  if (!is_projector(projector)) throw NotProjector("morita_form: argument is not a projector");
  const Complex overlap = transition_amplitude(pre, post);
  return alpha_form(projector, pre, post, overlap, alpha);
}

MoritaReport check_morita_conditions(const StateVector& pre, const StateVector& post,
                                     const Alpha& alpha, const SpectralDecomposition& decomposition,
                                     double tolerance) {
  require_dim(decomposition.dim(), pre.dim(), "check_morita_conditions");
  require_dim(decomposition.dim(), post.dim(), "check_morita_conditions");
  const Complex overlap = transition_amplitude(pre, post);
  const auto f = [&](const Matrix& p) { return alpha_form(p, pre, post, overlap, alpha); };
  const auto d = static_cast<Eigen::Index>(pre.dim());

  MoritaReport report;
  report.uniqueness_hypothesis = pre.dim() >= 3;

  double orthogonality = 0.0;
  for (std::size_t i = 0; i < decomposition.size(); ++i) {
    for (std::size_t j = i + 1; j < decomposition.size(); ++j) {
      orthogonality = std::max(orthogonality,
                               max_abs(decomposition.projectors[i] * decomposition.projectors[j]));
    }
  }
  report.checks.add("projectors mutually orthogonal", orthogonality, tolerance);

  double additivity = 0.0;
  Matrix partial = Matrix::Zero(d, d);
  Complex summed{0.0, 0.0};
  for (const auto& p : decomposition.projectors) {
    partial += p;
    summed += f(p);
    additivity = std::max(additivity, std::abs(f(partial) - summed));
  }
  report.checks.add("additivity over orthogonal projectors", additivity, tolerance);

  report.checks.add("f(P_psi) = 1", std::abs(f(projector_onto(pre)) - 1.0), tolerance);
  report.checks.add("f(P_phi) = 1", std::abs(f(projector_onto(post)) - 1.0), tolerance);

  const auto complement_max = [&](const StateVector& chi) {
    double worst = 0.0;
    const Matrix basis = orthogonal_complement(chi);
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
      const Vector v = basis.col(k);
      worst = std::max(worst, std::abs(f(v * v.adjoint())));
    }
    return worst;
  };
  report.checks.add("f(P_psi_perp) = 0", complement_max(pre), tolerance);
  report.checks.add("f(P_phi_perp) = 0", complement_max(post), tolerance);
  return report;
}

QPDistribution joint_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                        const StateVector& psi, const Alpha& alpha) {
  require_dim(a.dim(), psi.dim(), "joint_qp");
  require_dim(b.dim(), psi.dim(), "joint_qp");
  const auto ub = projected(b, psi.amplitudes());
  const auto wa = projected(a, psi.amplitudes());

  QPDistribution qp;
  qp.kind = QPKind::joint;
  qp.reference_outcomes = b.eigenvalues;
  qp.outcomes = a.eigenvalues;
  qp.alpha = alpha;
  qp.context = "pure state, reference observable B";
  qp.values.reserve(b.size() * a.size());
  for (const auto& u : ub) {
    for (const auto& w : wa) qp.values.push_back(alpha_mix(u.dot(w), alpha));
  }
  return qp;
}

QPDistribution joint_qp(const Observable& b, const Observable& a, const StateVector& psi,
                        const Alpha& alpha) {
  return joint_qp(spectral_decompose(b), spectral_decompose(a), psi, alpha);
}

QPDistribution joint_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                        const DensityOperator& rho, const Alpha& alpha) {
  require_dim(a.dim(), rho.dim(), "joint_qp");
  require_dim(b.dim(), rho.dim(), "joint_qp");
  const Matrix rho_t = rho.matrix().transpose();

  QPDistribution qp;
  qp.kind = QPKind::joint;
  qp.reference_outcomes = b.eigenvalues;
  qp.outcomes = a.eigenvalues;
  qp.alpha = alpha;
  qp.context = "density operator, reference observable B";
  qp.values.reserve(b.size() * a.size());
  for (const auto& pb : b.projectors) {
    for (const auto& pa : a.projectors) {
      // Tr[E_b E_a ρ]; Tr[E_a E_b ρ] is its conjugate.
      const Complex g = (pb * pa).cwiseProduct(rho_t).sum();
      qp.values.push_back(alpha_mix(g, alpha));
    }
  }
  return qp;
}

Matrix commutator_asymmetry(const SpectralDecomposition& b, const SpectralDecomposition& a,
                            const StateVector& psi, const Alpha& alpha) {
  const QPDistribution ba = joint_qp(b, a, psi, alpha);
  const QPDistribution ab = joint_qp(a, b, psi, alpha);
  Matrix out(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(a.size()));
  for (std::size_t ib = 0; ib < b.size(); ++ib) {
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
      out(static_cast<Eigen::Index>(ib), static_cast<Eigen::Index>(ia)) =
          ba.at(ib, ia) - ab.at(ia, ib);
    }
  }
  return out;
}

Matrix commutator_asymmetry(const Observable& b, const Observable& a, const StateVector& psi,
                            const Alpha& alpha) {
  return commutator_asymmetry(spectral_decompose(b), spectral_decompose(a), psi, alpha);
}

Matrix projector_commutator_expectations(const SpectralDecomposition& b,
                                         const SpectralDecomposition& a, const StateVector& psi) {
  Matrix out(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(a.size()));
  for (std::size_t ib = 0; ib < b.size(); ++ib) {
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
      out(static_cast<Eigen::Index>(ib), static_cast<Eigen::Index>(ia)) =
          expectation(commutator(b.projectors[ib], a.projectors[ia]), psi);
    }
  }
  return out;
}

namespace {

QPDistribution sum_over_reference(const QPDistribution& joint, std::string context) {
  QPDistribution qp;
  qp.kind = QPKind::marginal;
  qp.outcomes = joint.outcomes;
  qp.alpha = joint.alpha;
  qp.context = std::move(context);
  qp.values.assign(joint.outcomes.size(), Complex{0.0, 0.0});
  for (std::size_t ib = 0; ib < joint.reference_outcomes.size(); ++ib) {
    for (std::size_t ia = 0; ia < joint.outcomes.size(); ++ia) qp.values[ia] += joint.at(ib, ia);
  }
  require_real_distribution(qp);
  return qp;
}

}  // namespace

QPDistribution marginal_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                           const StateVector& psi, const Alpha& alpha) {
  return sum_over_reference(joint_qp(b, a, psi, alpha), "pure state, summed over reference B");
}

QPDistribution marginal_qp(const Observable& b, const Observable& a, const StateVector& psi,
                           const Alpha& alpha) {
  return marginal_qp(spectral_decompose(b), spectral_decompose(a), psi, alpha);
}

QPDistribution marginal_qp(const SpectralDecomposition& b, const SpectralDecomposition& a,
                           const DensityOperator& rho, const Alpha& alpha) {
  return sum_over_reference(joint_qp(b, a, rho, alpha), "density operator, summed over reference B");
}

QPDistribution born_distribution(const SpectralDecomposition& a, const StateVector& psi) {
  require_dim(a.dim(), psi.dim(), "born_distribution");
  QPDistribution qp;
  qp.kind = QPKind::marginal;
  qp.outcomes = a.eigenvalues;
  qp.context = "Born rule";
  for (const auto& w : projected(a, psi.amplitudes())) qp.values.emplace_back(w.squaredNorm(), 0.0);
  return qp;
}

QPDistribution born_distribution(const SpectralDecomposition& a, const DensityOperator& rho) {
  require_dim(a.dim(), rho.dim(), "born_distribution");
  QPDistribution qp;
  qp.kind = QPKind::marginal;
  qp.outcomes = a.eigenvalues;
  qp.context = "Born rule";
  for (const auto& p : a.projectors) qp.values.emplace_back((p * rho.matrix()).trace().real(), 0.0);
  return qp;
}

Complex qp_of_set(const SpectralDecomposition& a, const StateVector& pre, const StateVector& post,
                  const Alpha& alpha, const OutcomeSet& set) {
  require_dim(a.dim(), pre.dim(), "qp_of_set");
  require_dim(a.dim(), post.dim(), "qp_of_set");
  const Complex overlap = transition_amplitude(pre, post);
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix e = Matrix::Zero(d, d);
  for (std::size_t i : set.indices()) e += a.projectors.at(i);
  return alpha_form(e, pre, post, overlap, alpha);
}

std::vector<Complex> conditional_qp_given_reference(const SpectralDecomposition& a,
                                                    const Matrix& reference_projector,
                                                    const StateVector& psi, const Alpha& alpha) {
  require_dim(a.dim(), psi.dim(), "conditional_qp_given_reference");
  require_dim(static_cast<std::size_t>(reference_projector.rows()), psi.dim(),
              "conditional_qp_given_reference");
  const Vector u = reference_projector * psi.amplitudes();
  const double weight = psi.amplitudes().dot(u).real();
  if (weight <= kOverlapFloor * kOverlapFloor) {
    throw OrthogonalPrePost("state has no support on the reference eigenspace");
  }
  std::vector<Complex> out;
  out.reserve(a.size());
  for (const auto& w : projected(a, psi.amplitudes())) out.push_back(alpha_mix(u.dot(w), alpha) / weight);
  return out;
}

Complex reference_conditioned_mean(const Matrix& a, const Matrix& reference_projector,
                                   const StateVector& psi, const Alpha& alpha) {
  require_dim(static_cast<std::size_t>(a.rows()), psi.dim(), "reference_conditioned_mean");
  require_dim(static_cast<std::size_t>(reference_projector.rows()), psi.dim(),
              "reference_conditioned_mean");
  const Vector u = reference_projector * psi.amplitudes();
  const double weight = psi.amplitudes().dot(u).real();
  if (weight <= kOverlapFloor * kOverlapFloor) {
    throw ZeroDensityPoint("state has no support on the reference eigenspace");
  }
  const Complex forward = u.dot(a * psi.amplitudes());              // ⟨ψ|E_b A|ψ⟩
  const Complex reverse = (a * psi.amplitudes()).dot(u);            // ⟨ψ|A E_b|ψ⟩ for Hermitian A
  return (alpha.value() * forward + alpha.complement() * reverse) / weight;
}

CheckReport deterministic_reference_check(const SpectralDecomposition& b, const StateVector& psi,
                                          const Alpha& alpha, double tolerance) {
  require_dim(b.dim(), psi.dim(), "deterministic_reference_check");
  CheckReport report;
  for (std::size_t ib = 0; ib < b.size(); ++ib) {
    const double weight = expectation(b.projectors[ib], psi).real();
    if (weight <= kOverlapFloor * kOverlapFloor) continue;
    const auto cond = conditional_qp_given_reference(b, b.projectors[ib], psi, alpha);
    double dev = 0.0;
    for (std::size_t jb = 0; jb < cond.size(); ++jb) {
      dev = std::max(dev, std::abs(cond[jb] - (ib == jb ? 1.0 : 0.0)));
    }
    report.add("p(b'|psi,b) = delta for b = " + std::to_string(b.eigenvalues[ib]), dev, tolerance);
  }
  return report;
}

}  // namespace wvqp
