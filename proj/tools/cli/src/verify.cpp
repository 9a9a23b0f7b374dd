// SPDX-License-Identifier: Apache-2.0

#include "wvqp_cli/verify.hpp"

#include "wvqp/alpha.hpp"
#include "wvqp/bohm.hpp"
#include "wvqp/errors.hpp"
#include "wvqp/quasiprob.hpp"
#include "wvqp/random.hpp"

#include <cmath>
#include <map>
#include <string>

namespace wvqp::cli {

namespace {

class Worst {
 public:
  void record(const std::string& name, double deviation, double tolerance) {
    auto [it, inserted] = entries_.try_emplace(name, Check{name, deviation, tolerance});
    if (!inserted && !(it->second.deviation >= deviation)) it->second.deviation = deviation;
    if (inserted) order_.push_back(name);
  }

  CheckReport report() const {
    CheckReport out;
    for (const auto& name : order_) out.checks.push_back(entries_.at(name));
    return out;
  }

 private:
  std::map<std::string, Check> entries_;
  std::vector<std::string> order_;
};

double max_abs_diff(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

}  // namespace

CheckReport run_identity_suite(const VerifyOptions& options) {
  if (options.dim < 2) throw InvariantViolation("verify needs dim >= 2");
  if (options.trials == 0) throw InvariantViolation("verify needs trials >= 1");
  random::Engine rng(options.seed);
  Worst worst;
  const std::size_t d = options.dim;

  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const auto a = random::hermitian(rng, d);
    const auto b = random::hermitian(rng, d);
    const auto psi = random::state(rng, d);
    const auto phi = random::state(rng, d);
    const auto alpha = random::alpha(rng);
    const auto da = spectral_decompose(a);
    const auto db = spectral_decompose(b);

    // Marginal over the reference recovers the Born rule.
    {
      const auto marginal = marginal_qp(db, da, psi, alpha);
      const auto born = born_distribution(da, psi);
      double dev = 0.0;
      for (std::size_t i = 0; i < born.values.size(); ++i) {
        dev = std::max(dev, std::abs(marginal.values[i] + options.perturb - born.values[i]));
      }
      worst.record("born-rule-marginal", dev, 1e-10);
    }

    // Kolmogorov additivity and normalization of the conditional QP.
    {
      const auto cond = conditional_qp(da, psi, phi, alpha);
      const std::size_t k = 1 + random::index(rng, da.size());
      const auto blocks = random::partition(rng, da.size(), k);
      Complex sum_blocks{0.0, 0.0};
      double additivity = 0.0;
      for (const auto& block : blocks) {
        const Complex set_value = qp_of_set(da, psi, phi, alpha, OutcomeSet::of(block, da.size()));
        Complex singletons{0.0, 0.0};
        for (auto i : block) singletons += cond.values[i];
        additivity = std::max(additivity, std::abs(set_value - singletons));
        sum_blocks += set_value;
      }
      const Complex whole = qp_of_set(da, psi, phi, alpha, OutcomeSet::all(da.size()));
      additivity = std::max(additivity, std::abs(sum_blocks - whole));
      worst.record("kolmogorov-additivity", additivity, 1e-12);
      worst.record("kolmogorov-normalization", std::abs(cond.total() - 1.0), 1e-12);
    }

    // p(b,a) − p(a,b) = (2α − 1)⟨ψ|[E_b, E_a]|ψ⟩.
    {
      const Matrix lhs = commutator_asymmetry(db, da, psi, alpha);
      const Matrix rhs = (2.0 * alpha.value() - 1.0) * projector_commutator_expectations(db, da, psi);
      worst.record("commutator-asymmetry", max_abs(lhs - rhs), 1e-10);
    }

    // α = 0 is the complex conjugate of α = 1.
    {
      const auto forward = conditional_qp(da, psi, phi, Alpha(1.0));
      const auto reverse = conditional_qp(da, psi, phi, Alpha(0.0));
      std::vector<Complex> conj_forward;
      for (const auto& v : forward.values) conj_forward.push_back(std::conj(v));
      worst.record("conjugation-symmetry", max_abs_diff(reverse.values, conj_forward), 1e-12);
    }

    // The symmetric joint QP is real and symmetric under swapping A and B.
    {
      const auto ba = joint_qp(db, da, psi, Alpha(0.5));
      const auto ab = joint_qp(da, db, psi, Alpha(0.5));
      double imag = 0.0;
      double swap = 0.0;
      for (std::size_t ib = 0; ib < db.size(); ++ib) {
        for (std::size_t ia = 0; ia < da.size(); ++ia) {
          imag = std::max(imag, std::abs(ba.at(ib, ia).imag()));
          swap = std::max(swap, std::abs(ba.at(ib, ia) - ab.at(ia, ib)));
        }
      }
      worst.record("symmetric-joint-reality", imag, 1e-12);
      worst.record("symmetric-joint-swap", swap, 1e-12);
    }

    // α-product identities.
    {
      const Matrix x = random::complex_matrix(rng, d, d);
      const Matrix y = random::complex_matrix(rng, d, d);
      const Complex i(0.0, 1.0);
      const double scale = std::max(1.0, max_abs(x) * max_abs(y));
      worst.record("alpha-product-endpoints",
                   std::max(max_abs(alpha_product(x, y, Alpha(1.0)) - x * y),
                            max_abs(alpha_product(x, y, Alpha(0.0)) - y * x)) / scale,
                   1e-12);
      worst.record("alpha-product-jordan",
                   max_abs(alpha_product(x, y, Alpha(0.5)) - 0.5 * anticommutator(x, y)) / scale, 1e-12);
      worst.record("alpha-product-imaginary-split",
                   max_abs(alpha_product(x, y, alpha) -
                           (alpha_product(x, y, Alpha(alpha.s())) + i * alpha.t() * commutator(x, y))) / scale,
                   1e-12);
      worst.record("alpha-product-half-minus-i",
                   max_abs(alpha_product(x, y, Alpha(0.5, -0.5)) -
                           (0.5 * anticommutator(x, y) - 0.5 * i * commutator(x, y))) / scale,
                   1e-12);
      worst.record("alpha-product-symmetrized-sum",
                   max_abs(alpha_product(x, y, alpha) + alpha_product(y, x, alpha) - anticommutator(x, y)) / scale,
                   1e-12);
      // Commuting pair: functions of one Hermitian matrix.
      const Matrix h = a.matrix();
      const Matrix h2 = h * h;
      worst.record("alpha-product-commuting",
                   max_abs(alpha_product(h, h2, alpha) - h * h2) / std::max(1.0, max_abs(h) * max_abs(h2)), 1e-12);
    }

    // Ensemble average of the local value is ⟨ψ|A|ψ⟩ for any α.
    {
      const bohm::Grid1D grid(32, -1.0, 1.0);
      const auto h = random::hermitian(rng, grid.size());
      const auto wf = bohm::WaveFunction::from_state(grid, random::state(rng, grid.size()));
      const Complex exact = wf.expectation(h.matrix());
      const Complex avg = bohm::ensemble_average(bohm::local_value(h, wf, alpha), wf);
      worst.record("local-value-ensemble-average", std::abs(avg - exact), 1e-8);
    }

    // Morita conditions on the α-form.
    {
      const auto report = check_morita_conditions(psi, phi, alpha, da);
      const auto& checks = report.checks.checks;
      double c1 = 0.0;
      double c2 = 0.0;
      for (const auto& c : checks) {
        const bool additive = c.name.find("additivity") != std::string::npos ||
                              c.name.find("orthogonal") != std::string::npos;
        double& slot = additive ? c1 : c2;
        slot = std::max(slot, c.deviation);
      }
      worst.record("morita-additivity", c1, 1e-10);
      worst.record("morita-boundary-values", c2, 1e-10);
    }
  }
  return worst.report();
}

}  // namespace wvqp::cli
