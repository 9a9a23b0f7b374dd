// SPDX-License-Identifier: Apache-2.0

#include "wvqp/random.hpp"

#include "wvqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace wvqp::random {

double uniform(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Engine& rng, double lo, double hi) { return lo + (hi - lo) * uniform(rng); }

double normal(Engine& rng) {
  const double u1 = 1.0 - uniform(rng);  // (0, 1]
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t index(Engine& rng, std::size_t n) {
  if (n == 0) throw InvariantViolation("index range must be non-empty");
  return std::min(n - 1, static_cast<std::size_t>(uniform(rng) * static_cast<double>(n)));
}

Matrix complex_matrix(Engine& rng, std::size_t rows, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal(rng);
      m(i, j) = Complex(re, normal(rng));
    }
  }
  return m;
}

StateVector state(Engine& rng, std::size_t dim) {
  return StateVector::normalized(complex_matrix(rng, dim, 1).col(0));
}

Matrix unitary(Engine& rng, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  const Matrix g = complex_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

Observable hermitian(Engine& rng, std::size_t dim) {
  const Matrix g = complex_matrix(rng, dim, dim);
  Matrix h = 0.5 * (g + g.adjoint());
  return Observable::from_matrix(0.5 * (h + h.adjoint()));
}

Observable with_spectrum(Engine& rng, const std::vector<double>& spectrum) {
  const Matrix u = unitary(rng, spectrum.size());
  Eigen::VectorXd d(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t i = 0; i < spectrum.size(); ++i) d(static_cast<Eigen::Index>(i)) = spectrum[i];
  const Matrix m = u * d.cast<Complex>().asDiagonal() * u.adjoint();
  return Observable::from_matrix(0.5 * (m + m.adjoint()));
}

DensityOperator density(Engine& rng, std::size_t dim, std::size_t rank) {
  if (rank == 0 || rank > dim) throw InvariantViolation("rank must be in [1, dim]");
  const Matrix g = complex_matrix(rng, dim, rank);
  Matrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityOperator::from_matrix(rho);
}

Alpha alpha(Engine& rng) {
  const double re = uniform(rng, -2.0, 2.0);
  return Alpha(re, uniform(rng, -2.0, 2.0));
}

std::vector<std::vector<std::size_t>> partition(Engine& rng, std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw InvariantViolation("partition needs 1 <= k <= n");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[index(rng, i)]);
  std::vector<std::vector<std::size_t>> blocks(k);
  // First k items seed the blocks so none is empty.
  for (std::size_t i = 0; i < n; ++i) blocks[i < k ? i : index(rng, k)].push_back(order[i]);
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  return blocks;
}

}  // namespace wvqp::random
