// SPDX-License-Identifier: Apache-2.0

#include "wvqp/hilbert.hpp"

#include "wvqp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wvqp {

namespace {

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

// P ← (P + P†)/2 leaves P exactly Hermitian in floating point.
Matrix symmetrized(const Matrix& p) {
  Matrix out = p;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      out(i, j) = 0.5 * (p(i, j) + std::conj(p(j, i)));
    }
  }
  return out;
}

}  // namespace

double max_abs(const Matrix& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, std::abs(m(i, j)));
  }
  return best;
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

// ---------------------------------------------------------------- StateVector

StateVector StateVector::from_amplitudes(Vector amplitudes) {
  if (amplitudes.size() == 0) throw InvariantViolation("state vector must have dim > 0");
  if (!all_finite(amplitudes)) throw InvariantViolation("state vector has non-finite amplitudes");
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvariantViolation("state vector is not normalized: |psi| = " + std::to_string(norm));
  }
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::normalized(Vector amplitudes) {
  if (amplitudes.size() == 0) throw InvariantViolation("state vector must have dim > 0");
  if (!all_finite(amplitudes)) throw InvariantViolation("state vector has non-finite amplitudes");
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw InvariantViolation("cannot normalize the zero vector");
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimMismatch("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return StateVector(std::move(v));
}

// ----------------------------------------------------------------- Observable

Observable Observable::from_matrix(Matrix matrix) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw DimMismatch("observable must be a non-empty square matrix");
  }
  if (!all_finite(matrix)) throw InvariantViolation("observable has non-finite entries");
  const double defect = hermiticity_defect(matrix);
  if (defect > kHermitianTolerance) {
    throw NonHermitian("matrix is not Hermitian: max|A - A^dagger| = " + std::to_string(defect));
  }
  return Observable(std::move(matrix));
}

// ------------------------------------------------------- SpectralDecomposition

Matrix SpectralDecomposition::reconstruct() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < size(); ++i) out += eigenvalues[i] * projectors[i];
  return out;
}

// ------------------------------------------------------------ DensityOperator

DensityOperator DensityOperator::from_matrix(Matrix matrix) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
    throw DimMismatch("density operator must be a non-empty square matrix");
  }
  if (!all_finite(matrix)) throw InvariantViolation("density operator has non-finite entries");
  if (hermiticity_defect(matrix) > kHermitianTolerance) {
    throw NonHermitian("density operator is not Hermitian");
  }
  const Complex tr = matrix.trace();
  if (std::abs(tr - Complex(1.0)) > kNormTolerance) {
    throw InvariantViolation("density operator trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverFailure("density operator eigen-solve failed");
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw InvariantViolation("density operator has a negative eigenvalue");
  }
  return DensityOperator(std::move(matrix));
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return DensityOperator(symmetrized(projector_onto(psi)));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw DimMismatch("dimension must be > 0");
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(dim));
}

// ----------------------------------------------------------------- operations

double default_degeneracy_tolerance(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  return 1e-9 * std::max(radius, 1.0);
}

SpectralDecomposition spectral_decompose(const Observable& a, std::optional<double> degeneracy_tol) {
  const Matrix& m = a.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw SolverFailure("Hermitian eigen-solve failed");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Matrix& vectors = solver.eigenvectors();

  double tol = 0.0;
  if (degeneracy_tol) {
    if (!(*degeneracy_tol > 0.0)) throw InvariantViolation("degeneracy tolerance must be > 0");
    tol = *degeneracy_tol;
  } else {
    tol = 1e-9 * std::max(values.cwiseAbs().maxCoeff(), 1.0);
  }

  SpectralDecomposition out;
  const Eigen::Index d = m.rows();
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d && values(stop) - values(stop - 1) <= tol) ++stop;
    const Eigen::Index rank = stop - start;
    out.eigenvalues.push_back(values.segment(start, rank).mean());
    Matrix basis = vectors.middleCols(start, rank);
    out.projectors.push_back(symmetrized(basis * basis.adjoint()));
    out.eigenvectors.push_back(std::move(basis));
    start = stop;
  }
  return out;
}

SpectralDecomposition spectral_decompose(const Matrix& a, std::optional<double> degeneracy_tol) {
  return spectral_decompose(Observable::from_matrix(a), degeneracy_tol);
}

Matrix projector_onto(const StateVector& chi) {
  return chi.amplitudes() * chi.amplitudes().adjoint();
}

Complex inner(const StateVector& phi, const StateVector& psi) {
  if (phi.dim() != psi.dim()) throw DimMismatch("inner product of states with different dims");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < psi.dim(); ++i) acc += std::conj(phi[i]) * psi[i];
  return acc;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i1 = 0; i1 < x.rows(); ++i1) {
    for (Eigen::Index j1 = 0; j1 < x.cols(); ++j1) {
      out.block(i1 * y.rows(), j1 * y.cols(), y.rows(), y.cols()) = x(i1, j1) * y;
    }
  }
  return out;
}

Vector kron(const Vector& x, const Vector& y) {
  Vector out(x.size() * y.size());
  for (Eigen::Index i1 = 0; i1 < x.size(); ++i1) out.segment(i1 * y.size(), y.size()) = x(i1) * y;
  return out;
}

StateVector tensor(const StateVector& x, const StateVector& y) {
  return StateVector::normalized(kron(x.amplitudes(), y.amplitudes()));
}

Observable tensor(const Observable& x, const Observable& y) {
  return Observable::from_matrix(kron(x.matrix(), y.matrix()));
}

Complex expectation(const Matrix& m, const StateVector& psi) {
  if (static_cast<std::size_t>(m.cols()) != psi.dim()) throw DimMismatch("expectation: dim mismatch");
  return psi.amplitudes().dot(m * psi.amplitudes());
}

Matrix orthogonal_complement(const StateVector& chi) {
  const auto d = static_cast<Eigen::Index>(chi.dim());
  Eigen::HouseholderQR<Matrix> qr(chi.amplitudes());
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  return q.rightCols(d - 1);
}

bool is_projector(const Matrix& p, double tol) {
  if (p.rows() != p.cols()) return false;
  return max_abs(p * p - p) <= tol && hermiticity_defect(p) <= tol;
}

}  // namespace wvqp
