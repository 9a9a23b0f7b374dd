// SPDX-License-Identifier: Apache-2.0
//
// The α-weighted operator product X∘_αY = αXY + (1−α)YX.

#pragma once

#include "wvqp/hilbert.hpp"

namespace wvqp {

/// Complex mixing parameter α = s + it. Any finite value is admitted.
class Alpha {
 public:
  /// α = ½, the symmetric (Jordan) choice.
  Alpha() = default;
  explicit Alpha(Complex value);
  explicit Alpha(double re, double im = 0.0) : Alpha(Complex(re, im)) {}

  Complex value() const noexcept { return value_; }
  double s() const noexcept { return value_.real(); }
  double t() const noexcept { return value_.imag(); }
  /// 1 − α.
  Complex complement() const noexcept { return Complex(1.0) - value_; }

  friend bool operator==(const Alpha&, const Alpha&) = default;

 private:
  Complex value_{0.5, 0.0};
};

/// αXY + (1−α)YX; throws DimMismatch for differently shaped operands.
Matrix alpha_product(const Matrix& x, const Matrix& y, const Alpha& alpha);

/// X∘_αY − Y∘_αX, which equals (2α−1)[X,Y].
Matrix alpha_commut_defect(const Matrix& x, const Matrix& y, const Alpha& alpha);

/// XY − YX.
Matrix commutator(const Matrix& x, const Matrix& y);

/// XY + YX.
Matrix anticommutator(const Matrix& x, const Matrix& y);

}  // namespace wvqp
