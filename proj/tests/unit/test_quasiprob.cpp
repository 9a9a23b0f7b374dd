// SPDX-License-Identifier: Apache-2.0

#include "oracle.hpp"
#include "property.hpp"

#include "wvqp/errors.hpp"
#include "wvqp/quasiprob.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace {

using namespace wvqp;
using oracle::cd;
using oracle::CMat;
using oracle::CVec;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

const CMat kX{{0.0, 1.0}, {1.0, 0.0}};
const CMat kZ{{1.0, 0.0}, {0.0, -1.0}};

StateVector ket(std::initializer_list<cd> amps) { return oracle::to_state(CVec(amps)); }
StateVector plus_x() { return ket({kInvSqrt2, kInvSqrt2}); }
StateVector plus_y() { return ket({kInvSqrt2, cd(0.0, kInvSqrt2)}); }

// Random (ψ, φ) pair whose overlap is not tiny, so absolute tolerances stay meaningful.
std::pair<CVec, CVec> overlapping_pair(oracle::Rng& rng, std::size_t d) {
  for (;;) {
    CVec psi = oracle::random_state(rng, d);
    CVec phi = oracle::random_state(rng, d);
    if (std::abs(oracle::inner(phi, psi)) > 0.2) return {psi, phi};
  }
}

TEST(WeakValue, ClosedProcessIsExpectation) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 6);
    const auto known = oracle::known_observable(rng, d);
    const CVec psi = oracle::random_state(rng, d);
    const auto s = oracle::to_state(psi);
    EXPECT_LE(std::abs(weak_value(oracle::to_observable(known.matrix), s, s) -
                       oracle::sandwich(psi, known.matrix, psi)), 1e-12);
  });
}

TEST(WeakValue, Examples) {
  const auto z = oracle::to_observable(kZ);
  const cd v = weak_value(z, StateVector::basis(2, 0), plus_x());
  EXPECT_NEAR(v.real(), 1.0, 1e-15);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  EXPECT_THROW(weak_value(z, plus_x(), ket({kInvSqrt2, -kInvSqrt2})), OrthogonalPrePost);
  EXPECT_THROW(weak_value(z, StateVector::basis(3, 0), StateVector::basis(3, 0)), DimMismatch);
}

TEST(WeakValue, MatchesRatioOracle) {
  prop::for_all(30, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 6);
    const auto known = oracle::known_observable(rng, d);
    const auto [psi, phi] = overlapping_pair(rng, d);
    const cd expected = oracle::sandwich(phi, known.matrix, psi) / oracle::inner(phi, psi);
    const cd got = weak_value(oracle::to_observable(known.matrix), oracle::to_state(psi), oracle::to_state(phi));
    EXPECT_LE(std::abs(got - expected), 1e-11);
  });
}

TEST(ConditionalQP, PauliZBetweenPlusXAndPlusY) {
  const auto z = oracle::to_observable(kZ);
  const auto qp = conditional_qp(z, plus_x(), plus_y(), Alpha(1.0));
  ASSERT_EQ(qp.outcomes, (std::vector<double>{-1.0, 1.0}));
  EXPECT_LE(std::abs(qp.at(0) - cd(0.5, -0.5)), 1e-15);
  EXPECT_LE(std::abs(qp.at(1) - cd(0.5, 0.5)), 1e-15);
  EXPECT_LE(std::abs(qp.total() - 1.0), 1e-15);

  const auto half = conditional_qp(z, plus_x(), plus_y(), Alpha(0.5));
  EXPECT_LE(std::abs(half.at(0) - 0.5), 1e-15);
  EXPECT_LE(std::abs(half.at(1) - 0.5), 1e-15);

  const cd w = weak_value_from_qp(qp);
  EXPECT_LE(std::abs(w - cd(0.0, 1.0)), 1e-15);
}

TEST(ConditionalQP, ClosedProcessIsBornForAnyAlpha) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    const auto known = oracle::known_observable(rng, d);
    const CVec psi = oracle::random_state(rng, d);
    const auto s = oracle::to_state(psi);
    const auto qp = conditional_qp(oracle::to_observable(known.matrix), s, s, Alpha(oracle::random_alpha(rng)));
    for (std::size_t i = 0; i < d; ++i) {
      EXPECT_LE(std::abs(qp.at(i) - oracle::born(known.projectors[i], psi)), 1e-12);
    }
  });
}

TEST(ConditionalQP, SpecialAlphaValues) {
  prop::for_all(40, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 6);
    const auto known = oracle::known_observable(rng, d);
    const auto sd = spectral_decompose(oracle::to_observable(known.matrix));
    const auto [psi, phi] = overlapping_pair(rng, d);
    const auto pre = oracle::to_state(psi), post = oracle::to_state(phi);
    const auto one = conditional_qp(sd, pre, post, Alpha(1.0));
    const auto zero = conditional_qp(sd, pre, post, Alpha(0.0));
    const auto half = conditional_qp(sd, pre, post, Alpha(0.5));
    for (std::size_t i = 0; i < sd.size(); ++i) {
      EXPECT_LE(std::abs(zero.at(i) - std::conj(one.at(i))), 1e-12);
      EXPECT_LE(std::abs(half.at(i) - one.at(i).real()), 1e-12);
      // α = 1 is ⟨φ|E(a)|ψ⟩/⟨φ|ψ⟩.
      const cd expected = oracle::sandwich(phi, known.projectors[i], psi) / oracle::inner(phi, psi);
      EXPECT_LE(std::abs(one.at(i) - expected), 1e-12);
    }
    const cd a = oracle::random_alpha(rng);
    EXPECT_LE(std::abs(conditional_qp(sd, pre, post, Alpha(a)).total() - 1.0), 1e-10);

    EXPECT_LE(std::abs(weak_value_from_qp(one) - weak_value(oracle::to_observable(known.matrix), pre, post)), 1e-10);
    EXPECT_LE(std::abs(weak_value_from_qp(half) - weak_value(oracle::to_observable(known.matrix), pre, post).real()), 1e-10);
  });
}

TEST(ConditionalQP, RejectsOrthogonalPair) {
  const auto z = spectral_decompose(oracle::to_observable(kZ));
  EXPECT_THROW(conditional_qp(z, StateVector::basis(2, 0), StateVector::basis(2, 1), Alpha()), OrthogonalPrePost);
}

TEST(WeakValueFromQP, WrongKind) {
  const auto z = spectral_decompose(oracle::to_observable(kZ));
  const auto joint = joint_qp(z, z, plus_x(), Alpha());
  EXPECT_THROW(weak_value_from_qp(joint), WrongKind);
  const auto ss = plus_x();
  EXPECT_LE(std::abs(weak_value_from_qp(conditional_qp(z, ss, ss, Alpha())) - 0.0), 1e-15);
}

TEST(MoritaForm, BoundaryValues) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    const auto [psi, phi] = overlapping_pair(rng, d);
    const auto pre = oracle::to_state(psi), post = oracle::to_state(phi);
    const Alpha a(oracle::random_alpha(rng));
    EXPECT_LE(std::abs(morita_form(oracle::to_eigen(oracle::outer(psi, psi)), pre, post, a) - 1.0), 1e-12);
    EXPECT_LE(std::abs(morita_form(oracle::to_eigen(oracle::outer(phi, phi)), pre, post, a) - 1.0), 1e-12);
    // A vector orthogonal to ψ: Gram–Schmidt a random vector against it.
    CVec v = oracle::random_state(rng, d);
    const cd c = oracle::inner(psi, v);
    for (std::size_t i = 0; i < d; ++i) v[i] -= c * psi[i];
    const auto perp = oracle::to_state(v);
    EXPECT_LE(std::abs(morita_form(projector_onto(perp), pre, post, a)), 1e-12);
  });
}

TEST(MoritaForm, RejectsNonProjector) {
  EXPECT_THROW(morita_form(2.0 * Matrix::Identity(2, 2), plus_x(), plus_x(), Alpha()), NotProjector);
  EXPECT_THROW(morita_form(Matrix::Identity(2, 2), StateVector::basis(2, 0), StateVector::basis(2, 1), Alpha()),
               OrthogonalPrePost);
}

TEST(MoritaConditions, RandomQutritsAndQuartets) {
  prop::for_all(50, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 3, 4);
    const auto known = oracle::known_observable(rng, d);
    const auto [psi, phi] = overlapping_pair(rng, d);
    const auto report = check_morita_conditions(oracle::to_state(psi), oracle::to_state(phi),
                                                Alpha(oracle::random_alpha(rng)),
                                                spectral_decompose(oracle::to_observable(known.matrix)));
    EXPECT_TRUE(report.uniqueness_hypothesis);
    EXPECT_EQ(report.checks.checks.size(), 6u);
    for (const auto& c : report.checks.checks) EXPECT_LE(c.deviation, 1e-10) << c.name;
    EXPECT_TRUE(report.passed());
  });
}

TEST(MoritaConditions, DegenerateCases) {
  const auto psi = ket({1.0, cd(0.0, 1.0), 2.0});
  const auto identity = spectral_decompose(Matrix::Identity(3, 3));
  const auto r1 = check_morita_conditions(psi, psi, Alpha(0.3, 0.9), identity);
  EXPECT_TRUE(r1.passed());
  EXPECT_LE(std::abs(morita_form(Matrix::Identity(3, 3), psi, psi, Alpha(0.3, 0.9)) - 1.0), 1e-15);

  const auto qubit = check_morita_conditions(plus_x(), plus_y(), Alpha(), spectral_decompose(oracle::to_observable(kZ)));
  EXPECT_FALSE(qubit.uniqueness_hypothesis);
  EXPECT_TRUE(qubit.passed());
}

TEST(JointQP, PauliZThenPauliX) {
  const auto qp = joint_qp(oracle::to_observable(kZ), oracle::to_observable(kX), StateVector::basis(2, 0), Alpha(1.0));
  // Rows b ∈ {−1, +1}, columns a ∈ {−1, +1}.
  EXPECT_LE(std::abs(qp.at(0, 0)), 1e-15);
  EXPECT_LE(std::abs(qp.at(0, 1)), 1e-15);
  EXPECT_LE(std::abs(qp.at(1, 0) - 0.5), 1e-15);
  EXPECT_LE(std::abs(qp.at(1, 1) - 0.5), 1e-15);
}

TEST(JointQP, BruteForceOracle) {
  prop::for_all(100, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 4);
    const auto kb = oracle::known_observable(rng, d);
    const auto ka = oracle::known_observable(rng, d);
    const CVec psi = oracle::random_state(rng, d);
    const cd a = oracle::random_alpha(rng);
    const auto qp = joint_qp(oracle::to_observable(kb.matrix), oracle::to_observable(ka.matrix), oracle::to_state(psi), Alpha(a));
    ASSERT_EQ(qp.values.size(), d * d);
    for (std::size_t ib = 0; ib < d; ++ib)
      for (std::size_t ia = 0; ia < d; ++ia)
        EXPECT_LE(std::abs(qp.at(ib, ia) - oracle::joint(kb.projectors[ib], ka.projectors[ia], psi, a)), 1e-12);
    EXPECT_LE(std::abs(qp.total() - 1.0), 1e-10);
  });
}

TEST(JointQP, CommutingPairIsAlphaIndependent) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    // A and B share eigenvectors.
    const auto ka = oracle::known_observable(rng, d);
    CMat b = oracle::zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) b = oracle::add(b, ka.projectors[i], rng.uniform(-1.0, 1.0));
    const auto B = spectral_decompose(oracle::to_eigen(b));
    const auto A = spectral_decompose(oracle::to_eigen(ka.matrix));
    const auto s = oracle::to_state(oracle::random_state(rng, d));
    const auto ref = joint_qp(B, A, s, Alpha(1.0));
    for (int k = 0; k < 5; ++k) {
      const auto other = joint_qp(B, A, s, Alpha(oracle::random_alpha(rng)));
      for (std::size_t i = 0; i < ref.values.size(); ++i) EXPECT_LE(std::abs(other.values[i] - ref.values[i]), 1e-12);
    }
  });
}

TEST(JointQP, SymmetricAlphaIsRealAndSwapInvariant) {
  prop::for_all(50, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 6);
    const auto A = spectral_decompose(oracle::to_observable(oracle::known_observable(rng, d).matrix));
    const auto B = spectral_decompose(oracle::to_observable(oracle::known_observable(rng, d).matrix));
    const auto s = oracle::to_state(oracle::random_state(rng, d));
    const auto ba = joint_qp(B, A, s, Alpha(0.5));
    const auto ab = joint_qp(A, B, s, Alpha(0.5));
    for (std::size_t ib = 0; ib < B.size(); ++ib)
      for (std::size_t ia = 0; ia < A.size(); ++ia) {
        EXPECT_LE(std::abs(ba.at(ib, ia).imag()), 1e-12);
        EXPECT_LE(std::abs(ba.at(ib, ia) - ab.at(ia, ib)), 1e-12);
      }
  });
}

TEST(JointQP, ProductFormWhereReferenceIsPopulated) {
  prop::for_all(40, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    const auto kb = oracle::known_observable(rng, d);
    const auto ka = oracle::known_observable(rng, d);
    const CVec psi = oracle::random_state(rng, d);
    const auto s = oracle::to_state(psi);
    const cd a = oracle::random_alpha(rng);
    const auto B = spectral_decompose(oracle::to_observable(kb.matrix));
    const auto A = spectral_decompose(oracle::to_observable(ka.matrix));
    const auto qp = joint_qp(B, A, s, Alpha(a));
    for (std::size_t ib = 0; ib < d; ++ib) {
      const double pb = oracle::born(kb.projectors[ib], psi);
      if (pb <= 1e-12) continue;
      // |b⟩ from the rank-1 projector: its largest column, normalized.
      std::size_t col = 0;
      for (std::size_t j = 1; j < d; ++j)
        if (std::abs(kb.projectors[ib][j][j]) > std::abs(kb.projectors[ib][col][col])) col = j;
      CVec b(d);
      for (std::size_t i = 0; i < d; ++i) b[i] = kb.projectors[ib][i][col];
      const auto cond = conditional_qp(A, s, oracle::to_state(b), Alpha(a));
      for (std::size_t ia = 0; ia < d; ++ia) EXPECT_LE(std::abs(qp.at(ib, ia) - cond.at(ia) * pb), 1e-10);

      const auto given = conditional_qp_given_reference(A, B.projectors[ib], s, Alpha(a));
      for (std::size_t ia = 0; ia < d; ++ia) EXPECT_LE(std::abs(given[ia] - cond.at(ia)), 1e-10);
    }
  });
}

TEST(JointQP, UnpopulatedReferenceIsFinite) {
  // ⟨b|ψ⟩ = 0 for b = −1: the row is zero rather than 0/0.
  const auto qp = joint_qp(oracle::to_observable(kZ), oracle::to_observable(kX), StateVector::basis(2, 0), Alpha(0.2, 3.0));
  EXPECT_EQ(qp.at(0, 0), cd(0.0));
  EXPECT_EQ(qp.at(0, 1), cd(0.0));
  EXPECT_THROW(conditional_qp_given_reference(spectral_decompose(oracle::to_observable(kX)),
                                              oracle::to_eigen(CMat{{0.0, 0.0}, {0.0, 1.0}}),
                                              StateVector::basis(2, 0), Alpha()),
               OrthogonalPrePost);
}

TEST(JointQP, DegenerateReference) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const auto kb = oracle::known_observable(rng, {2, 2});
    const auto ka = oracle::known_observable(rng, 4);
    const CVec psi = oracle::random_state(rng, 4);
    const cd a = oracle::random_alpha(rng);
    const auto B = spectral_decompose(oracle::to_observable(kb.matrix));
    ASSERT_EQ(B.size(), 2u);
    const auto qp = joint_qp(B, spectral_decompose(oracle::to_observable(ka.matrix)), oracle::to_state(psi), Alpha(a));
    for (std::size_t ib = 0; ib < 2; ++ib)
      for (std::size_t ia = 0; ia < 4; ++ia)
        EXPECT_LE(std::abs(qp.at(ib, ia) - oracle::joint(kb.projectors[ib], ka.projectors[ia], psi, a)), 1e-12);
  });
}

TEST(CommutatorAsymmetry, MatchesProjectorCommutators) {
  prop::for_all(100, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    const auto kb = oracle::known_observable(rng, d);
    const auto ka = oracle::known_observable(rng, d);
    const CVec psi = oracle::random_state(rng, d);
    const cd a = oracle::random_alpha(rng);
    const Matrix lhs = commutator_asymmetry(oracle::to_observable(kb.matrix), oracle::to_observable(ka.matrix),
                                            oracle::to_state(psi), Alpha(a));
    for (std::size_t ib = 0; ib < d; ++ib)
      for (std::size_t ia = 0; ia < d; ++ia) {
        const CMat comm = oracle::add(oracle::matmul(kb.projectors[ib], ka.projectors[ia]),
                                      oracle::matmul(ka.projectors[ia], kb.projectors[ib]), -1.0);
        const cd rhs = (2.0 * a - 1.0) * oracle::sandwich(psi, comm, psi);
        EXPECT_LE(std::abs(lhs(static_cast<Eigen::Index>(ib), static_cast<Eigen::Index>(ia)) - rhs), 1e-10);
      }
  });
}

TEST(CommutatorAsymmetry, VanishingCases) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    const auto ka = oracle::known_observable(rng, d);
    const auto kb = oracle::known_observable(rng, d);
    const auto s = oracle::to_state(oracle::random_state(rng, d));
    const auto A = spectral_decompose(oracle::to_observable(ka.matrix));
    const auto B = spectral_decompose(oracle::to_observable(kb.matrix));
    EXPECT_LE(max_abs(commutator_asymmetry(B, A, s, Alpha(0.5))), 1e-12);
    CMat f = oracle::zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) f = oracle::add(f, ka.projectors[i], static_cast<double>(i * i) - 1.5);
    EXPECT_LE(max_abs(commutator_asymmetry(spectral_decompose(oracle::to_eigen(f)), A, s, Alpha(oracle::random_alpha(rng)))), 1e-12);
  });
}

TEST(CommutatorAsymmetry, PauliExample) {
  const auto B = spectral_decompose(oracle::to_observable(kZ));
  const auto A = spectral_decompose(oracle::to_observable(kX));
  const Matrix lhs = commutator_asymmetry(B, A, plus_x(), Alpha(1.0));
  const Matrix rhs = projector_commutator_expectations(B, A, plus_x());
  // ⟨+x|[E^z(b), E^x(a)]|+x⟩ by hand: E^z(±1) = (I±Z)/2, E^x(±1) = (I±X)/2, so
  // the commutator is ±±[Z,X]/4 = ±± iY/2, and ⟨+x|Y|+x⟩ = 0.
  EXPECT_LE(max_abs(lhs - rhs), 1e-15);
  EXPECT_LE(max_abs(rhs), 1e-15);
  const auto ket0 = StateVector::basis(2, 0);
  const Matrix lhs0 = commutator_asymmetry(B, A, plus_y(), Alpha(1.0));
  // ⟨+y|Y|+y⟩ = 1, so entry (b, a) = sign(b)sign(a)·i/2.
  for (int ib = 0; ib < 2; ++ib)
    for (int ia = 0; ia < 2; ++ia) {
      const double sb = ib == 0 ? -1.0 : 1.0, sa = ia == 0 ? -1.0 : 1.0;
      EXPECT_LE(std::abs(lhs0(ib, ia) - cd(0.0, 0.5 * sb * sa)), 1e-15);
    }
  EXPECT_LE(max_abs(projector_commutator_expectations(B, A, ket0)), 1e-15);
}

TEST(MarginalQP, Examples) {
  const auto z = oracle::to_observable(kZ);
  const auto x = oracle::to_observable(kX);
  const auto m = marginal_qp(x, z, plus_x(), Alpha(0.7, -1.1));
  EXPECT_LE(std::abs(m.at(0) - 0.5), 1e-12);
  EXPECT_LE(std::abs(m.at(1) - 0.5), 1e-12);
  const auto psi = ket({std::sqrt(0.3), std::sqrt(0.7)});
  const auto m2 = marginal_qp(x, z, psi, Alpha(1.0));
  EXPECT_EQ(m2.kind, QPKind::marginal);
  EXPECT_LE(std::abs(m2.at(0) - 0.7), 1e-12);
  EXPECT_LE(std::abs(m2.at(1) - 0.3), 1e-12);
}

TEST(MarginalQP, BornRuleForAnyAlpha) {
  prop::for_all(50, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 8);
    const auto ka = oracle::known_observable(rng, d);
    const auto kb = oracle::known_observable(rng, d);
    const CVec psi = oracle::random_state(rng, d);
    const auto A = spectral_decompose(oracle::to_observable(ka.matrix));
    const auto B = spectral_decompose(oracle::to_observable(kb.matrix));
    const auto s = oracle::to_state(psi);
    std::vector<QPDistribution> runs;
    for (int k = 0; k < 20; ++k) runs.push_back(marginal_qp(B, A, s, Alpha(oracle::random_alpha(rng))));
    for (std::size_t ia = 0; ia < d; ++ia) {
      const double born = oracle::born(ka.projectors[ia], psi);
      for (const auto& r : runs) {
        EXPECT_LE(std::abs(r.at(ia) - born), 1e-10);
        EXPECT_LE(std::abs(r.at(ia) - runs.front().at(ia)), 1e-10);
      }
    }
  });
}

TEST(MarginalQP, DegenerateOutcomeIsRankWeighted) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const auto ka = oracle::known_observable(rng, {1, 3});
    const auto kb = oracle::known_observable(rng, 4);
    const CVec psi = oracle::random_state(rng, 4);
    const auto m = marginal_qp(oracle::to_observable(kb.matrix), oracle::to_observable(ka.matrix),
                               oracle::to_state(psi), Alpha(oracle::random_alpha(rng)));
    ASSERT_EQ(m.values.size(), 2u);
    EXPECT_LE(std::abs(m.at(1) - oracle::born(ka.projectors[1], psi)), 1e-10);
  });
}

TEST(QPOfSet, KolmogorovAxioms) {
  prop::for_all(100, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 6);
    const auto known = oracle::known_observable(rng, d);
    const auto A = spectral_decompose(oracle::to_observable(known.matrix));
    const auto [psi, phi] = overlapping_pair(rng, d);
    const auto pre = oracle::to_state(psi), post = oracle::to_state(phi);
    const Alpha a(oracle::random_alpha(rng));

    EXPECT_EQ(qp_of_set(A, pre, post, a, OutcomeSet::of({}, d)), cd(0.0));
    EXPECT_LE(std::abs(qp_of_set(A, pre, post, a, OutcomeSet::all(d)) - 1.0), 1e-12);

    // Random partition into blocks.
    const std::size_t k = prop::dim_between(rng, 1, d);
    std::vector<std::vector<std::size_t>> blocks(k);
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = d; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t i = 0; i < d; ++i) blocks[i < k ? i : rng.below(k)].push_back(order[i]);
    cd sum = 0.0;
    for (const auto& b : blocks) sum += qp_of_set(A, pre, post, a, OutcomeSet::of(b, d));
    EXPECT_LE(std::abs(sum - qp_of_set(A, pre, post, a, OutcomeSet::all(d))), 1e-12);

    // Single outcomes agree with the conditional distribution.
    const auto cond = conditional_qp(A, pre, post, a);
    for (std::size_t i = 0; i < d; ++i)
      EXPECT_LE(std::abs(qp_of_set(A, pre, post, a, OutcomeSet::of({i}, d)) - cond.at(i)), 1e-12);
  });
}

TEST(QPOfSet, Validation) {
  EXPECT_THROW(OutcomeSet::of({0, 0}, 2), InvariantViolation);
  EXPECT_THROW(OutcomeSet::of({2}, 2), InvariantViolation);
  const auto A = spectral_decompose(oracle::to_observable(kZ));
  EXPECT_THROW(qp_of_set(A, StateVector::basis(2, 0), StateVector::basis(2, 1), Alpha(), OutcomeSet::all(2)),
               OrthogonalPrePost);
}

TEST(DeterministicReference, Examples) {
  const auto z = spectral_decompose(oracle::to_observable(kZ));
  for (const cd a : {cd(0.0), cd(1.0), cd(0.5), cd(-1.3, 2.2)}) {
    const auto r = deterministic_reference_check(z, plus_x(), Alpha(a));
    EXPECT_EQ(r.checks.size(), 2u);
    EXPECT_TRUE(r.passed());
  }
  // Only populated b are checked.
  EXPECT_EQ(deterministic_reference_check(z, StateVector::basis(2, 0), Alpha()).checks.size(), 1u);
}

TEST(DeterministicReference, DegenerateAndRandom) {
  prop::for_all(30, [](oracle::Rng& rng, int) {
    const auto deg = oracle::known_observable(rng, {2, 1, 1});
    const auto gen = oracle::known_observable(rng, 4);
    const auto s = oracle::to_state(oracle::random_state(rng, 4));
    const Alpha a(oracle::random_alpha(rng));
    const auto r1 = deterministic_reference_check(spectral_decompose(oracle::to_observable(deg.matrix)), s, a);
    EXPECT_EQ(r1.checks.size(), 3u);
    EXPECT_TRUE(r1.passed()) << r1.max_deviation();
    const auto r2 = deterministic_reference_check(spectral_decompose(oracle::to_observable(gen.matrix)), s, a);
    EXPECT_EQ(r2.checks.size(), 4u);
    EXPECT_TRUE(r2.passed()) << r2.max_deviation();
  });
}

TEST(ReferenceConditionedMean, MatchesOracle) {
  prop::for_all(30, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    const auto ka = oracle::known_observable(rng, d);
    const auto kb = oracle::known_observable(rng, d);
    const CVec psi = oracle::random_state(rng, d);
    const cd a = oracle::random_alpha(rng);
    for (std::size_t ib = 0; ib < d; ++ib) {
      const double w = oracle::born(kb.projectors[ib], psi);
      if (w < 1e-6) continue;
      const cd fwd = oracle::sandwich(psi, oracle::matmul(kb.projectors[ib], ka.matrix), psi);
      const cd rev = oracle::sandwich(psi, oracle::matmul(ka.matrix, kb.projectors[ib]), psi);
      const cd expected = (a * fwd + (1.0 - a) * rev) / w;
      const cd got = reference_conditioned_mean(oracle::to_eigen(ka.matrix), oracle::to_eigen(kb.projectors[ib]),
                                                oracle::to_state(psi), Alpha(a));
      EXPECT_LE(std::abs(got - expected), 1e-9 * (1.0 + std::abs(expected)));
    }
  });
}

TEST(MixedState, PureAgreement) {
  prop::for_all(30, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 2, 5);
    const auto A = spectral_decompose(oracle::to_observable(oracle::known_observable(rng, d).matrix));
    const auto B = spectral_decompose(oracle::to_observable(oracle::known_observable(rng, d).matrix));
    const auto s = oracle::to_state(oracle::random_state(rng, d));
    const Alpha a(oracle::random_alpha(rng));
    const auto pure = joint_qp(B, A, s, a);
    const auto mixed = joint_qp(B, A, DensityOperator::pure(s), a);
    for (std::size_t i = 0; i < pure.values.size(); ++i) EXPECT_LE(std::abs(pure.values[i] - mixed.values[i]), 1e-12);
    const auto mp = marginal_qp(B, A, s, a), mm = marginal_qp(B, A, DensityOperator::pure(s), a);
    for (std::size_t i = 0; i < mp.values.size(); ++i) EXPECT_LE(std::abs(mp.values[i] - mm.values[i]), 1e-12);
  });
}

TEST(MixedState, MaximallyMixedMarginalIsRankOverDim) {
  oracle::Rng rng(7);
  const auto ka = oracle::known_observable(rng, {1, 2, 3});
  const auto kb = oracle::known_observable(rng, 6);
  const auto m = marginal_qp(spectral_decompose(oracle::to_observable(kb.matrix)),
                             spectral_decompose(oracle::to_observable(ka.matrix)),
                             DensityOperator::maximally_mixed(6), Alpha(0.1, 0.4));
  EXPECT_LE(std::abs(m.at(0) - 1.0 / 6.0), 1e-12);
  EXPECT_LE(std::abs(m.at(1) - 2.0 / 6.0), 1e-12);
  EXPECT_LE(std::abs(m.at(2) - 3.0 / 6.0), 1e-12);
}

TEST(MixedState, RankTwoTraceOracle) {
  prop::for_all(30, [](oracle::Rng& rng, int) {
    const std::size_t d = 3;
    const CVec v1 = oracle::random_state(rng, d);
    const CVec v2 = oracle::random_state(rng, d);
    const double w = rng.uniform(0.1, 0.9);
    const CMat rho = oracle::add(oracle::scale(oracle::outer(v1, v1), w), oracle::outer(v2, v2), 1.0 - w);
    const auto ka = oracle::known_observable(rng, d);
    const auto kb = oracle::known_observable(rng, d);
    const cd a = oracle::random_alpha(rng);
    const auto qp = joint_qp(spectral_decompose(oracle::to_observable(kb.matrix)),
                             spectral_decompose(oracle::to_observable(ka.matrix)),
                             DensityOperator::from_matrix(oracle::to_eigen(rho)), Alpha(a));
    for (std::size_t ib = 0; ib < d; ++ib)
      for (std::size_t ia = 0; ia < d; ++ia)
        EXPECT_LE(std::abs(qp.at(ib, ia) - oracle::joint_mixed(kb.projectors[ib], ka.projectors[ia], rho, a)), 1e-12);
    const auto born = born_distribution(spectral_decompose(oracle::to_observable(ka.matrix)),
                                        DensityOperator::from_matrix(oracle::to_eigen(rho)));
    for (std::size_t ia = 0; ia < d; ++ia)
      EXPECT_LE(std::abs(born.at(ia) - oracle::trace(oracle::matmul(ka.projectors[ia], rho))), 1e-12);
  });
}

}  // namespace
