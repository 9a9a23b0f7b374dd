// SPDX-License-Identifier: Apache-2.0
//
// Finite-dimensional Hilbert-space primitives: states, observables, spectral
// decompositions, density operators and tensor products. Everything is dense.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace wvqp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;

/// Largest entry-wise modulus of `m`.
double max_abs(const Matrix& m);

/// Largest entry-wise modulus of `m - m†`.
double hermiticity_defect(const Matrix& m);

/// Unit-norm complex amplitude vector over a finite basis.
class StateVector {
 public:
  /// Takes `amplitudes` as-is; throws InvariantViolation unless the norm is 1
  /// within kNormTolerance.
  static StateVector from_amplitudes(Vector amplitudes);

  /// Rescales `amplitudes` to unit norm; throws InvariantViolation on a zero
  /// or non-finite vector.
  static StateVector normalized(Vector amplitudes);

  /// Computational basis vector |k⟩ in dimension `dim`.
  static StateVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}
  Vector amplitudes_;
};

/// Hermitian matrix.
class Observable {
 public:
  /// Throws NonHermitian when max|M − M†| exceeds kHermitianTolerance.
  static Observable from_matrix(Matrix matrix);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  explicit Observable(Matrix matrix) : matrix_(std::move(matrix)) {}
  Matrix matrix_;
};

/// Distinct eigenvalues in strictly ascending order with one orthogonal
/// projector per eigenvalue. Degenerate eigenvalues own a projector of the
/// summed rank.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Matrix> projectors;
  /// Orthonormal eigenvectors (as columns) spanning each projector's range.
  std::vector<Matrix> eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  std::size_t dim() const noexcept {
    return projectors.empty() ? 0 : static_cast<std::size_t>(projectors.front().rows());
  }
  std::size_t rank(std::size_t i) const {
    return static_cast<std::size_t>(eigenvectors.at(i).cols());
  }

  /// Σᵢ aᵢPᵢ.
  Matrix reconstruct() const;
};

/// Positive semidefinite, unit-trace Hermitian matrix.
class DensityOperator {
 public:
  /// Validates Hermiticity (1e-12), unit trace (1e-12) and eigenvalues
  /// ≥ −1e-10; throws NonHermitian or InvariantViolation.
  static DensityOperator from_matrix(Matrix matrix);

  /// |ψ⟩⟨ψ|.
  static DensityOperator pure(const StateVector& psi);

  /// I/d.
  static DensityOperator maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  explicit DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) {}
  Matrix matrix_;
};

/// Default clustering tolerance for spectral_decompose: 1e-9 times the
/// spectral radius (floored at 1e-9 for the zero matrix).
double default_degeneracy_tolerance(const Matrix& hermitian);

/// Hermitian eigendecomposition with eigenvalues closer than
/// `degeneracy_tol` (chained) merged into one projector.
SpectralDecomposition spectral_decompose(const Observable& a,
                                         std::optional<double> degeneracy_tol = std::nullopt);

/// Same, for a raw matrix; throws NonHermitian if it is not Hermitian.
SpectralDecomposition spectral_decompose(const Matrix& a,
                                         std::optional<double> degeneracy_tol = std::nullopt);

/// |χ⟩⟨χ|.
Matrix projector_onto(const StateVector& chi);

/// Σᵢ conj(φᵢ)ψᵢ; throws DimMismatch.
Complex inner(const StateVector& phi, const StateVector& psi);

/// Kronecker product with the index convention (i₁,i₂) ↦ i₁·dim₂ + i₂.
Matrix kron(const Matrix& x, const Matrix& y);
Vector kron(const Vector& x, const Vector& y);

StateVector tensor(const StateVector& x, const StateVector& y);
Observable tensor(const Observable& x, const Observable& y);

/// ⟨ψ|M|ψ⟩.
Complex expectation(const Matrix& m, const StateVector& psi);

/// Orthonormal basis (columns) of the orthogonal complement of `chi`.
Matrix orthogonal_complement(const StateVector& chi);

/// Returns true when P² = P and P = P† entrywise within `tol`.
bool is_projector(const Matrix& p, double tol = 1e-10);

}  // namespace wvqp
