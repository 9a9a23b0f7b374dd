// SPDX-License-Identifier: Apache-2.0

#include "oracle.hpp"
#include "property.hpp"

#include "wvqp/alpha.hpp"
#include "wvqp/errors.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace {

using namespace wvqp;
using oracle::cd;
using oracle::CMat;

const CMat kX{{0.0, 1.0}, {1.0, 0.0}};
const CMat kY{{0.0, cd(0.0, -1.0)}, {cd(0.0, 1.0), 0.0}};
const CMat kZ{{1.0, 0.0}, {0.0, -1.0}};

// Independent ∘_α: αXY + (1−α)YX with naive products.
CMat circ(const CMat& x, const CMat& y, cd a) {
  return oracle::add(oracle::scale(oracle::matmul(x, y), a), oracle::matmul(y, x), 1.0 - a);
}

double dev(const Matrix& a, const CMat& b) { return oracle::max_abs_diff(oracle::from_eigen(a), b); }

Matrix E(const CMat& m) { return oracle::to_eigen(m); }

TEST(AlphaProduct, IdentityAndSquare) {
  prop::for_all(20, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 1, 6);
    const CMat x = oracle::random_matrix(rng, d, d);
    const Alpha a(oracle::random_alpha(rng));
    EXPECT_LE(dev(alpha_product(E(x), Matrix::Identity(d, d), a), x), 1e-12);
    EXPECT_LE(dev(alpha_product(Matrix::Identity(d, d), E(x), a), x), 1e-12);
    EXPECT_LE(dev(alpha_product(E(x), E(x), a), oracle::matmul(x, x)), 1e-12);
  });
}

TEST(AlphaProduct, PauliXZAtOne) {
  // σxσz = −iσy
  EXPECT_LE(dev(alpha_product(E(kX), E(kZ), Alpha(1.0)), oracle::scale(kY, cd(0.0, -1.0))), 1e-15);
}

TEST(AlphaProduct, MatchesNaive) {
  prop::for_all(30, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 1, 6);
    const CMat x = oracle::random_matrix(rng, d, d), y = oracle::random_matrix(rng, d, d);
    const cd a = oracle::random_alpha(rng);
    EXPECT_LE(dev(alpha_product(E(x), E(y), Alpha(a)), circ(x, y, a)), 1e-12);
  });
}

TEST(AlphaProduct, DimMismatch) {
  EXPECT_THROW(alpha_product(Matrix::Identity(2, 2), Matrix::Identity(3, 3), Alpha()), DimMismatch);
  EXPECT_THROW(alpha_product(Matrix::Zero(2, 3), Matrix::Zero(2, 3), Alpha()), DimMismatch);
  EXPECT_THROW(alpha_commut_defect(Matrix::Identity(2, 2), Matrix::Identity(3, 3), Alpha()), DimMismatch);
}

TEST(AlphaParam, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Alpha{nan}, InvariantViolation);
  EXPECT_THROW((Alpha{0.0, inf}), InvariantViolation);
  const Alpha a(0.3, -1.2);
  EXPECT_EQ(a.s(), 0.3);
  EXPECT_EQ(a.t(), -1.2);
  EXPECT_EQ(a.complement(), cd(0.7, 1.2));
  EXPECT_EQ(Alpha().value(), cd(0.5));
}

TEST(CommutDefect, Examples) {
  prop::for_all(10, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 1, 5);
    const CMat x = oracle::random_matrix(rng, d, d), y = oracle::random_matrix(rng, d, d);
    EXPECT_LE(dev(alpha_commut_defect(E(x), E(y), Alpha(0.5)), oracle::zeros(d, d)), 1e-12);
    // Diagonal matrices commute.
    CMat p = oracle::zeros(d, d), q = oracle::zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      p[i][i] = rng.complex_normal();
      q[i][i] = rng.complex_normal();
    }
    EXPECT_LE(dev(alpha_commut_defect(E(p), E(q), Alpha(oracle::random_alpha(rng))), oracle::zeros(d, d)), 1e-12);
  });
  EXPECT_LE(dev(alpha_commut_defect(E(kX), E(kZ), Alpha(1.0)), oracle::scale(kY, cd(0.0, -2.0))), 1e-15);
}

// The six algebraic identities over random matrices and complex α.
TEST(AlphaIdentities, SuiteHolds) {
  prop::for_all(100, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 1, 6);
    const CMat x = oracle::random_matrix(rng, d, d), y = oracle::random_matrix(rng, d, d);
    const Matrix ex = E(x), ey = E(y);
    const cd a = oracle::random_alpha(rng);
    const CMat xy = oracle::matmul(x, y), yx = oracle::matmul(y, x);
    const CMat comm = oracle::add(xy, yx, -1.0), anti = oracle::add(xy, yx);

    EXPECT_LE(dev(alpha_product(ex, ey, Alpha(1.0)), xy), 1e-12);
    EXPECT_LE(dev(alpha_product(ex, ey, Alpha(0.0)), yx), 1e-12);
    EXPECT_LE(dev(alpha_product(ex, ey, Alpha(0.5)), oracle::scale(anti, 0.5)), 1e-12);

    const Alpha alpha(a);
    const CMat split = oracle::add(circ(x, y, alpha.s()), comm, cd(0.0, alpha.t()));
    EXPECT_LE(dev(alpha_product(ex, ey, alpha), split), 1e-12);

    const CMat half_minus_i = oracle::add(oracle::scale(anti, 0.5), comm, 1.0 / cd(0.0, 2.0));
    EXPECT_LE(dev(alpha_product(ex, ey, Alpha(0.5, -0.5)), half_minus_i), 1e-12);

    EXPECT_LE(dev(alpha_product(ex, ey, alpha) + alpha_product(ey, ex, alpha), anti), 1e-12);

    EXPECT_LE(dev(alpha_commut_defect(ex, ey, alpha), oracle::scale(comm, 2.0 * a - 1.0)), 1e-12);
    EXPECT_LE(dev(commutator(ex, ey), comm), 1e-12);
    EXPECT_LE(dev(anticommutator(ex, ey), anti), 1e-12);
  });
}

TEST(AlphaIdentities, CommutingPairsReduceToPlainProduct) {
  prop::for_all(50, [](oracle::Rng& rng, int) {
    const std::size_t d = prop::dim_between(rng, 1, 6);
    // Functions of one Hermitian matrix commute: X = U D₁ U†, Y = U D₂ U†.
    const CMat u = oracle::random_unitary(rng, d);
    CMat d1 = oracle::zeros(d, d), d2 = oracle::zeros(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      d1[i][i] = rng.complex_normal();
      d2[i][i] = rng.complex_normal();
    }
    const CMat x = oracle::matmul(oracle::matmul(u, d1), oracle::adjoint(u));
    const CMat y = oracle::matmul(oracle::matmul(u, d2), oracle::adjoint(u));
    const Matrix p = alpha_product(E(x), E(y), Alpha(oracle::random_alpha(rng)));
    EXPECT_LE(dev(p, oracle::matmul(x, y)), 1e-12);
    EXPECT_LE(dev(p, oracle::matmul(y, x)), 1e-12);
  });
}

}  // namespace
