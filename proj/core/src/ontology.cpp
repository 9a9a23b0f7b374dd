// SPDX-License-Identifier: Apache-2.0

#include "wvqp/ontology.hpp"

#include "wvqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wvqp::ontology {

namespace {

constexpr double kNormalizationTolerance = 1e-10;

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimMismatch(std::string(what) + ": dim " + std::to_string(got) + " != " + std::to_string(want));
  }
}

Complex mix(Complex g, const Alpha& alpha) {
  return alpha.value() * g + alpha.complement() * std::conj(g);
}

// ψ as a d₁×d₂ matrix, Ψ(k₁, k₂) = ψ[k₁·d₂ + k₂].
Matrix reshape(const Vector& psi, std::size_t d1, std::size_t d2) {
  Matrix out(static_cast<Eigen::Index>(d1), static_cast<Eigen::Index>(d2));
  for (std::size_t k1 = 0; k1 < d1; ++k1) {
    for (std::size_t k2 = 0; k2 < d2; ++k2) {
      out(static_cast<Eigen::Index>(k1), static_cast<Eigen::Index>(k2)) =
          psi(static_cast<Eigen::Index>(k1 * d2 + k2));
    }
  }
  return out;
}

void check_bipartite(const BipartiteLayout& layout, const Observable& a, const Observable& b,
                     std::size_t state_dim) {
  if (layout.first.dim() == 0 || layout.second.dim() == 0) {
    throw InvariantViolation("particle layouts must be non-empty");
  }
  require_dim(a.dim(), layout.first.dim(), "observable on particle 1");
  require_dim(b.dim(), layout.second.dim(), "observable on particle 2");
  require_dim(state_dim, layout.dim(), "bipartite state");
}

TwoParticleQP empty_table(const BipartiteLayout& layout, const SpectralDecomposition& da,
                          const SpectralDecomposition& db) {
  TwoParticleQP qp;
  qp.n_sites_1 = layout.first.n_sites;
  qp.n_sites_2 = layout.second.n_sites;
  qp.outcomes_a = da.eigenvalues;
  qp.outcomes_b = db.eigenvalues;
  qp.values.assign(qp.n_sites_1 * qp.n_sites_2 * da.size() * db.size(), Complex(0.0));
  return qp;
}

// Σ over one particle's position block pair of f(k₁, k₂).
template <typename F>
Complex block_sum(const BipartiteLayout& layout, std::size_t x1, std::size_t x2, F&& f) {
  Complex acc{0.0, 0.0};
  const std::size_t n1 = layout.first.n_internal;
  const std::size_t n2 = layout.second.n_internal;
  for (std::size_t s1 = 0; s1 < n1; ++s1) {
    for (std::size_t s2 = 0; s2 < n2; ++s2) acc += f(x1 * n1 + s1, x2 * n2 + s2);
  }
  return acc;
}

}  // namespace

// ------------------------------------------------------------------- OntModel

OntModel::OntModel(std::string name, std::vector<double> ontic_labels, JointFn joint_fn)
    : name_(std::move(name)), ontic_labels_(std::move(ontic_labels)), joint_fn_(std::move(joint_fn)) {
  if (ontic_labels_.empty()) throw InvariantViolation("ontic space must be non-empty");
  if (!joint_fn_) throw InvariantViolation("joint function must be callable");
}

JointTable OntModel::joint(const Observable& a, const StateVector& psi) const {
  JointTable table = joint_fn_(a, psi);
  if (static_cast<std::size_t>(table.values.rows()) != n_ontic() ||
      static_cast<std::size_t>(table.values.cols()) != table.outcomes.size()) {
    throw InvariantViolation("joint table shape does not match the model");
  }
  const Complex total = table.values.sum();
  if (std::abs(total - Complex(1.0)) > kNormalizationTolerance) {
    throw InvariantViolation("joint table of model '" + name_ + "' sums to " +
                             std::to_string(total.real()) + (total.imag() < 0 ? "" : "+") +
                             std::to_string(total.imag()) + "i");
  }
  return table;
}

OntModel bohmian_grid_model(std::vector<double> positions, const Alpha& alpha) {
  if (std::set<double>(positions.begin(), positions.end()).size() != positions.size()) {
    throw InvariantViolation("grid positions must be distinct");
  }
  const std::size_t d = positions.size();
  SpectralDecomposition x;
  for (std::size_t j = 0; j < d; ++j) {
    x.eigenvalues.push_back(positions[j]);
    x.projectors.push_back(projector_onto(StateVector::basis(d, j)));
    x.eigenvectors.push_back(StateVector::basis(d, j).amplitudes());
  }
  auto fn = [x = std::move(x), alpha](const Observable& a, const StateVector& psi) {
    const auto qp = joint_qp(x, spectral_decompose(a), psi, alpha);
    JointTable table{qp.outcomes, Matrix(static_cast<Eigen::Index>(x.size()),
                                         static_cast<Eigen::Index>(qp.outcomes.size()))};
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (std::size_t ia = 0; ia < qp.outcomes.size(); ++ia) {
        table.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(ia)) = qp.at(j, ia);
      }
    }
    return table;
  };
  return OntModel("bohmian-grid", std::move(positions), std::move(fn));
}

OntModel classical_toy_model(std::size_t dim) {
  std::vector<double> labels(dim);
  for (std::size_t j = 0; j < dim; ++j) labels[j] = static_cast<double>(j);
  auto fn = [dim](const Observable& a, const StateVector& psi) {
    require_dim(a.dim(), dim, "classical toy observable");
    require_dim(psi.dim(), dim, "classical toy state");
    const auto da = spectral_decompose(a);
    JointTable table{da.eigenvalues, Matrix::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(da.size()))};
    for (std::size_t lambda = 0; lambda < dim; ++lambda) {
      const double target = a.matrix()(static_cast<Eigen::Index>(lambda), static_cast<Eigen::Index>(lambda)).real();
      std::size_t best = 0;
      for (std::size_t ia = 1; ia < da.size(); ++ia) {
        if (std::abs(da.eigenvalues[ia] - target) < std::abs(da.eigenvalues[best] - target)) best = ia;
      }
      table.values(static_cast<Eigen::Index>(lambda), static_cast<Eigen::Index>(best)) = std::norm(psi[lambda]);
    }
    return table;
  };
  return OntModel("classical-toy", std::move(labels), std::move(fn));
}

OntModel os_toy_model(std::size_t dim) {
  std::vector<double> labels(dim);
  for (std::size_t j = 0; j < dim; ++j) labels[j] = static_cast<double>(j);
  auto fn = [dim](const Observable& a, const StateVector& psi) {
    require_dim(a.dim(), dim, "toy observable");
    require_dim(psi.dim(), dim, "toy state");
    const auto da = spectral_decompose(a);
    JointTable table{da.eigenvalues, Matrix::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(da.size()))};
    Eigen::Index lambda = 0;
    for (std::size_t ia = 0; ia < da.size(); ++ia) {
      const Matrix& vecs = da.eigenvectors[ia];
      for (Eigen::Index c = 0; c < vecs.cols(); ++c, ++lambda) {
        table.values(lambda, static_cast<Eigen::Index>(ia)) = std::norm(vecs.col(c).dot(psi.amplitudes()));
      }
    }
    return table;
  };
  return OntModel("os-toy", std::move(labels), std::move(fn));
}

// ------------------------------------------------------------ conditionals

std::vector<Complex> epistemic_state(const OntModel& model, const Observable& a,
                                     const StateVector& psi) {
  const auto table = model.joint(a, psi);
  std::vector<Complex> out(model.n_ontic());
  for (Eigen::Index l = 0; l < table.values.rows(); ++l) out[static_cast<std::size_t>(l)] = table.values.row(l).sum();
  return out;
}

IndicatorFunctions indicator_functions(const OntModel& model, const Observable& a,
                                       const StateVector& psi) {
  IndicatorFunctions ind;
  ind.joint = model.joint(a, psi);
  ind.outcomes = ind.joint.outcomes;
  const Matrix& j = ind.joint.values;
  const Eigen::Index nl = j.rows();
  const Eigen::Index na = j.cols();

  ind.epistemic.resize(static_cast<std::size_t>(nl));
  ind.outcome.resize(static_cast<std::size_t>(na));
  for (Eigen::Index l = 0; l < nl; ++l) ind.epistemic[static_cast<std::size_t>(l)] = j.row(l).sum();
  for (Eigen::Index c = 0; c < na; ++c) ind.outcome[static_cast<std::size_t>(c)] = j.col(c).sum();

  ind.outcome_given_ontic = Matrix::Zero(nl, na);
  ind.ontic_given_outcome = Matrix::Zero(nl, na);
  ind.outcome_given_ontic_defined = Mask::Constant(nl, na, false);
  ind.ontic_given_outcome_defined = Mask::Constant(nl, na, false);
  for (Eigen::Index l = 0; l < nl; ++l) {
    const Complex pl = ind.epistemic[static_cast<std::size_t>(l)];
    for (Eigen::Index c = 0; c < na; ++c) {
      const Complex pa = ind.outcome[static_cast<std::size_t>(c)];
      if (std::abs(pl) > kDensityFloor) {
        ind.outcome_given_ontic(l, c) = j(l, c) / pl;
        ind.outcome_given_ontic_defined(l, c) = true;
      }
      if (std::abs(pa) > kDensityFloor) {
        ind.ontic_given_outcome(l, c) = j(l, c) / pa;
        ind.ontic_given_outcome_defined(l, c) = true;
      }
    }
  }
  return ind;
}

double bayes_check(const OntModel& model, const Observable& a, const StateVector& psi) {
  const auto ind = indicator_functions(model, a, psi);
  double worst = 0.0;
  for (Eigen::Index l = 0; l < ind.joint.values.rows(); ++l) {
    for (Eigen::Index c = 0; c < ind.joint.values.cols(); ++c) {
      if (!ind.outcome_given_ontic_defined(l, c) || !ind.ontic_given_outcome_defined(l, c)) continue;
      const Complex bayes = ind.outcome_given_ontic(l, c) * ind.epistemic[static_cast<std::size_t>(l)] /
                            ind.outcome[static_cast<std::size_t>(c)];
      worst = std::max(worst, std::abs(ind.ontic_given_outcome(l, c) - bayes));
    }
  }
  return worst;
}

double reproduction_check(const OntModel& model, const Observable& a, const StateVector& psi,
                          const std::vector<double>& born) {
  const auto table = model.joint(a, psi);
  require_dim(born.size(), table.outcomes.size(), "reproduction_check outcomes");
  double worst = 0.0;
  for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
    worst = std::max(worst, std::abs(table.values.col(c).sum() - born[static_cast<std::size_t>(c)]));
  }
  return worst;
}

double reproduction_check(const OntModel& model, const Observable& a, const StateVector& psi) {
  const auto born = born_distribution(spectral_decompose(a), psi);
  std::vector<double> p;
  p.reserve(born.values.size());
  for (const auto& v : born.values) p.push_back(v.real());
  return reproduction_check(model, a, psi, p);
}

// ------------------------------------------------------------- classification

SynlogicalityReport classify_synlogicality(const OntModel& model,
                                           const std::vector<Observable>& observables,
                                           const std::vector<StateVector>& preparations,
                                           const ClassifyOptions& options) {
  if (observables.size() < 2 || preparations.size() < 2) {
    throw InvariantViolation("classification needs at least two observables and two preparations");
  }
  SynlogicalityReport report;
  report.model = model.name();
  report.tolerance = options.tolerance;

  // ind[k][p] for observable k, preparation p.
  std::vector<std::vector<IndicatorFunctions>> ind(observables.size());
  for (std::size_t k = 0; k < observables.size(); ++k) {
    for (std::size_t p = 0; p < preparations.size(); ++p) {
      ind[k].push_back(indicator_functions(model, observables[k], preparations[p]));
      report.reproduction_deviation =
          std::max(report.reproduction_deviation, reproduction_check(model, observables[k], preparations[p]));
      report.bayes_deviation =
          std::max(report.bayes_deviation, bayes_check(model, observables[k], preparations[p]));
    }
  }
  report.reproduction_ok = report.reproduction_deviation <= options.tolerance;

  // Observable dependence of p(λ|A,ψ).
  for (std::size_t p = 0; p < preparations.size(); ++p) {
    for (std::size_t k = 1; k < observables.size(); ++k) {
      for (std::size_t l = 0; l < model.n_ontic(); ++l) {
        report.observable_deviation = std::max(
            report.observable_deviation, std::abs(ind[k][p].epistemic[l] - ind[0][p].epistemic[l]));
      }
    }
  }
  report.observable_synlogical = report.observable_deviation > options.tolerance;

  // Preparation dependence of p(a|λ,A,ψ).
  PreparationWitness best;
  bool have_witness = false;
  for (std::size_t k = 0; k < observables.size(); ++k) {
    for (std::size_t p = 0; p < preparations.size(); ++p) {
      for (std::size_t q = p + 1; q < preparations.size(); ++q) {
        const auto& ip = ind[k][p];
        const auto& iq = ind[k][q];
        for (std::size_t l = 0; l < model.n_ontic(); ++l) {
          const auto row = static_cast<Eigen::Index>(l);
          for (std::size_t c = 0; c < ip.outcomes.size(); ++c) {
            const auto col = static_cast<Eigen::Index>(c);
            if (!ip.outcome_given_ontic_defined(row, col) || !iq.outcome_given_ontic_defined(row, col)) {
              ++report.excluded_entries;
              continue;
            }
            const double diff = std::abs(ip.outcome_given_ontic(row, col) - iq.outcome_given_ontic(row, col));
            report.preparation_deviation = std::max(report.preparation_deviation, diff);
            const bool supported = std::abs(ip.epistemic[l]) > options.witness_floor &&
                                   std::abs(iq.epistemic[l]) > options.witness_floor;
            if (supported && diff > options.tolerance && (!have_witness || diff > best.difference)) {
              best = PreparationWitness{l, c, k, p, q, diff};
              have_witness = true;
            }
          }
        }
      }
    }
  }
  report.preparation_synlogical = report.preparation_deviation > options.tolerance;
  if (have_witness) report.preparation_witness = best;

  // Overlap of epistemic states under the first observable.
  for (std::size_t p = 0; p < preparations.size(); ++p) {
    for (std::size_t q = p + 1; q < preparations.size(); ++q) {
      for (std::size_t l = 0; l < model.n_ontic(); ++l) {
        const double overlap = std::abs(ind[0][p].epistemic[l]) * std::abs(ind[0][q].epistemic[l]);
        if (overlap > 0.0 && (!report.psi_epistemic_witness || overlap > report.psi_epistemic_witness->overlap)) {
          report.psi_epistemic_witness = EpistemicWitness{p, q, l, overlap};
        }
      }
    }
  }
  return report;
}

// ------------------------------------------------------------- two particles

Matrix ParticleLayout::position_projector(std::size_t site) const {
  if (site >= n_sites) throw DimMismatch("site index out of range");
  const auto d = static_cast<Eigen::Index>(dim());
  Matrix p = Matrix::Zero(d, d);
  for (std::size_t s = 0; s < n_internal; ++s) {
    const auto k = static_cast<Eigen::Index>(site * n_internal + s);
    p(k, k) = 1.0;
  }
  return p;
}

SpectralDecomposition ParticleLayout::positions() const {
  SpectralDecomposition out;
  const auto d = static_cast<Eigen::Index>(dim());
  for (std::size_t site = 0; site < n_sites; ++site) {
    out.eigenvalues.push_back(static_cast<double>(site));
    out.projectors.push_back(position_projector(site));
    out.eigenvectors.push_back(Matrix::Identity(d, d).middleCols(static_cast<Eigen::Index>(site * n_internal),
                                                                 static_cast<Eigen::Index>(n_internal)));
  }
  return out;
}

Complex TwoParticleQP::total() const {
  Complex acc{0.0, 0.0};
  for (const auto& v : values) acc += v;
  return acc;
}

Matrix TwoParticleQP::first_marginal() const {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n_sites_1), static_cast<Eigen::Index>(outcomes_a.size()));
  for (std::size_t x1 = 0; x1 < n_sites_1; ++x1)
    for (std::size_t x2 = 0; x2 < n_sites_2; ++x2)
      for (std::size_t ia = 0; ia < outcomes_a.size(); ++ia)
        for (std::size_t ib = 0; ib < outcomes_b.size(); ++ib)
          m(static_cast<Eigen::Index>(x1), static_cast<Eigen::Index>(ia)) += values[index(x1, x2, ia, ib)];
  return m;
}

Matrix TwoParticleQP::second_marginal() const {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n_sites_2), static_cast<Eigen::Index>(outcomes_b.size()));
  for (std::size_t x1 = 0; x1 < n_sites_1; ++x1)
    for (std::size_t x2 = 0; x2 < n_sites_2; ++x2)
      for (std::size_t ia = 0; ia < outcomes_a.size(); ++ia)
        for (std::size_t ib = 0; ib < outcomes_b.size(); ++ib)
          m(static_cast<Eigen::Index>(x2), static_cast<Eigen::Index>(ib)) += values[index(x1, x2, ia, ib)];
  return m;
}

TwoParticleQP two_particle_joint_qp(const BipartiteLayout& layout, const Observable& a,
                                    const Observable& b, const StateVector& psi,
                                    const Alpha& alpha) {
  check_bipartite(layout, a, b, psi.dim());
  const auto da = spectral_decompose(a);
  const auto db = spectral_decompose(b);
  auto qp = empty_table(layout, da, db);
  const Matrix state = reshape(psi.amplitudes(), layout.first.dim(), layout.second.dim());

  for (std::size_t ia = 0; ia < da.size(); ++ia) {
    const Matrix left = da.projectors[ia] * state;
    for (std::size_t ib = 0; ib < db.size(); ++ib) {
      // (E^A(a) ⊗ E^B(b))ψ as a matrix.
      const Matrix u = left * db.projectors[ib].transpose();
      for (std::size_t x1 = 0; x1 < qp.n_sites_1; ++x1) {
        for (std::size_t x2 = 0; x2 < qp.n_sites_2; ++x2) {
          const Complex g = block_sum(layout, x1, x2, [&](std::size_t k1, std::size_t k2) {
            const auto r = static_cast<Eigen::Index>(k1);
            const auto c = static_cast<Eigen::Index>(k2);
            return std::conj(state(r, c)) * u(r, c);
          });
          qp.values[qp.index(x1, x2, ia, ib)] = mix(g, alpha);
        }
      }
    }
  }
  return qp;
}

TwoParticleQP two_particle_joint_qp(const BipartiteLayout& layout, const Observable& a,
                                    const Observable& b, const DensityOperator& rho,
                                    const Alpha& alpha) {
  check_bipartite(layout, a, b, rho.dim());
  const auto da = spectral_decompose(a);
  const auto db = spectral_decompose(b);
  auto qp = empty_table(layout, da, db);
  const std::size_t d2 = layout.second.dim();

  for (std::size_t ia = 0; ia < da.size(); ++ia) {
    for (std::size_t ib = 0; ib < db.size(); ++ib) {
      const Matrix product = kron(da.projectors[ia], db.projectors[ib]) * rho.matrix();
      for (std::size_t x1 = 0; x1 < qp.n_sites_1; ++x1) {
        for (std::size_t x2 = 0; x2 < qp.n_sites_2; ++x2) {
          // Tr[E^X(x) E^A E^B ρ]: diagonal of the product over the x block.
          const Complex g = block_sum(layout, x1, x2, [&](std::size_t k1, std::size_t k2) {
            const auto k = static_cast<Eigen::Index>(k1 * d2 + k2);
            return product(k, k);
          });
          qp.values[qp.index(x1, x2, ia, ib)] = mix(g, alpha);
        }
      }
    }
  }
  return qp;
}

QPDistribution single_particle_joint_qp(const ParticleLayout& layout, const Observable& a,
                                        const StateVector& psi, const Alpha& alpha) {
  require_dim(a.dim(), layout.dim(), "single_particle_joint_qp observable");
  require_dim(psi.dim(), layout.dim(), "single_particle_joint_qp state");
  auto qp = joint_qp(layout.positions(), spectral_decompose(a), psi, alpha);
  qp.context = "pure state, reference observable X";
  return qp;
}

Complex local_expectation(const ParticleLayout& layout, const Observable& a,
                          const StateVector& psi, const Alpha& alpha, std::size_t site) {
  require_dim(a.dim(), layout.dim(), "local_expectation observable");
  require_dim(psi.dim(), layout.dim(), "local_expectation state");
  const Matrix ex = layout.position_projector(site);
  if (expectation(ex, psi).real() <= kDensityFloor) {
    throw ZeroDensityPoint("p(x|psi) vanishes at site " + std::to_string(site));
  }
  return reference_conditioned_mean(a.matrix(), ex, psi, alpha);
}

Complex correlation(const BipartiteLayout& layout, const Observable& a, const Observable& b,
                    const StateVector& psi, const Alpha& alpha, std::size_t x1, std::size_t x2) {
  check_bipartite(layout, a, b, psi.dim());
  if (x1 >= layout.first.n_sites || x2 >= layout.second.n_sites) throw DimMismatch("site index out of range");
  const Matrix state = reshape(psi.amplitudes(), layout.first.dim(), layout.second.dim());
  // Σ_{a,b} ab E^A(a)E^B(b) = A ⊗ B.
  const Matrix ab_state = a.matrix() * state * b.matrix().transpose();
  double density = 0.0;
  const Complex g = block_sum(layout, x1, x2, [&](std::size_t k1, std::size_t k2) {
    const auto r = static_cast<Eigen::Index>(k1);
    const auto c = static_cast<Eigen::Index>(k2);
    density += std::norm(state(r, c));
    return std::conj(state(r, c)) * ab_state(r, c);
  });
  if (density <= kDensityFloor) {
    throw ZeroDensityPoint("p(x|psi) vanishes at (" + std::to_string(x1) + ", " + std::to_string(x2) + ")");
  }
  return mix(g, alpha) / density;
}

TwoParticleQP alt_joint_qp(const BipartiteLayout& layout, const Observable& a,
                           const Observable& b, const StateVector& psi, const Alpha& alpha1,
                           const Alpha& alpha2) {
  check_bipartite(layout, a, b, psi.dim());
  const auto da = spectral_decompose(a);
  const auto db = spectral_decompose(b);
  auto qp = empty_table(layout, da, db);
  const Matrix state = reshape(psi.amplitudes(), layout.first.dim(), layout.second.dim());

  // Second-particle factors E^{X₂}(x₂)∘_{α₂}E^B(b), indexed [x2][ib].
  std::vector<std::vector<Matrix>> second(qp.n_sites_2);
  for (std::size_t x2 = 0; x2 < qp.n_sites_2; ++x2) {
    for (std::size_t ib = 0; ib < db.size(); ++ib) {
      second[x2].push_back(alpha_product(layout.second.position_projector(x2), db.projectors[ib], alpha2));
    }
  }
  for (std::size_t x1 = 0; x1 < qp.n_sites_1; ++x1) {
    const Matrix ex1 = layout.first.position_projector(x1);
    for (std::size_t ia = 0; ia < da.size(); ++ia) {
      // ⟨ψ|O₁ ⊗ O₂|ψ⟩ = Σ_ij (Ψ†O₁Ψ)_ij (O₂)_ij.
      const Matrix left = state.adjoint() * alpha_product(ex1, da.projectors[ia], alpha1) * state;
      for (std::size_t x2 = 0; x2 < qp.n_sites_2; ++x2) {
        for (std::size_t ib = 0; ib < db.size(); ++ib) {
          qp.values[qp.index(x1, x2, ia, ib)] = left.cwiseProduct(second[x2][ib]).sum();
        }
      }
    }
  }
  return qp;
}

double factorization_deviation(const TwoParticleQP& qp) {
  const Matrix p1 = qp.first_marginal();
  const Matrix p2 = qp.second_marginal();
  double worst = 0.0;
  for (std::size_t x1 = 0; x1 < qp.n_sites_1; ++x1)
    for (std::size_t x2 = 0; x2 < qp.n_sites_2; ++x2)
      for (std::size_t ia = 0; ia < qp.outcomes_a.size(); ++ia)
        for (std::size_t ib = 0; ib < qp.outcomes_b.size(); ++ib) {
          const Complex product = p1(static_cast<Eigen::Index>(x1), static_cast<Eigen::Index>(ia)) *
                                  p2(static_cast<Eigen::Index>(x2), static_cast<Eigen::Index>(ib));
          worst = std::max(worst, std::abs(qp.at(x1, x2, ia, ib) - product));
        }
  return worst;
}

double psi_epistemic_witness(const StateVector& psi, const StateVector& phi) {
  require_dim(phi.dim(), psi.dim(), "psi_epistemic_witness");
  double best = 0.0;
  for (std::size_t j = 0; j < psi.dim(); ++j) best = std::max(best, std::norm(psi[j]) * std::norm(phi[j]));
  return best;
}

double psi_epistemic_witness(const bohm::WaveFunction& psi, const bohm::WaveFunction& phi) {
  if (!(psi.grid() == phi.grid())) throw GridMismatch("wave functions live on different grids");
  const auto a = psi.density();
  const auto b = phi.density();
  double best = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) best = std::max(best, a[j] * b[j]);
  return best;
}

}  // namespace wvqp::ontology
