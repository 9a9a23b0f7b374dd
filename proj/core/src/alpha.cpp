// SPDX-License-Identifier: Apache-2.0

#include "wvqp/alpha.hpp"

#include "wvqp/errors.hpp"

#include <cmath>

namespace wvqp {

namespace {

void require_same_square(const Matrix& x, const Matrix& y) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) {
    throw DimMismatch("operator product needs square operands of equal dim");
  }
}

}  // namespace

Alpha::Alpha(Complex value) : value_(value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw InvariantViolation("alpha must be finite");
  }
}

Matrix alpha_product(const Matrix& x, const Matrix& y, const Alpha& alpha) {
  require_same_square(x, y);
  return alpha.value() * (x * y) + alpha.complement() * (y * x);
}

Matrix alpha_commut_defect(const Matrix& x, const Matrix& y, const Alpha& alpha) {
  require_same_square(x, y);
  return alpha_product(x, y, alpha) - alpha_product(y, x, alpha);
}

Matrix commutator(const Matrix& x, const Matrix& y) {
  require_same_square(x, y);
  return x * y - y * x;
}

Matrix anticommutator(const Matrix& x, const Matrix& y) {
  require_same_square(x, y);
  return x * y + y * x;
}

}  // namespace wvqp
