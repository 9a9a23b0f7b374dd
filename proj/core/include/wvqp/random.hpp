// SPDX-License-Identifier: Apache-2.0
//
// Random states, observables and α values for property checks. Everything is
// drawn from std::mt19937_64 through our own transforms so that a seed gives
// the same numbers with any standard library.

#pragma once

#include "wvqp/alpha.hpp"
#include "wvqp/hilbert.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace wvqp::random {

using Engine = std::mt19937_64;

/// Uniform in [0, 1) from the top 53 bits.
double uniform(Engine& rng);
double uniform(Engine& rng, double lo, double hi);
/// Standard normal (Box–Muller).
double normal(Engine& rng);
std::size_t index(Engine& rng, std::size_t n);

/// Haar-like random unit vector (normalized complex Gaussian).
StateVector state(Engine& rng, std::size_t dim);

/// Haar unitary: QR of a complex Ginibre matrix with the phase fix.
Matrix unitary(Engine& rng, std::size_t dim);

/// (G + G†)/2 for a complex Gaussian G.
Observable hermitian(Engine& rng, std::size_t dim);

/// U·diag(spectrum)·U† with Haar U.
Observable with_spectrum(Engine& rng, const std::vector<double>& spectrum);

/// Random mixed state of the given rank.
DensityOperator density(Engine& rng, std::size_t dim, std::size_t rank);

/// Real and imaginary parts uniform in [−2, 2].
Alpha alpha(Engine& rng);

/// Random general complex matrix.
Matrix complex_matrix(Engine& rng, std::size_t rows, std::size_t cols);

/// Assigns each of n items to one of k non-empty blocks (k ≤ n).
std::vector<std::vector<std::size_t>> partition(Engine& rng, std::size_t n, std::size_t k);

}  // namespace wvqp::random
