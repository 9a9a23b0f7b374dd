// SPDX-License-Identifier: Apache-2.0
//
// Named observables and states accepted on the command line and in scenario
// files.
//
//   pauli-x, pauli-y, pauli-z   Pauli matrices (eigenvalues ±1)
//   spin-<j>-<axis>             J_x, J_y, J_z for spin j (j = 1/2, 1, 3/2, ...),
//                               ħ = 1, basis ordered m = j, j−1, …, −j
//   0, 1                        computational basis of a qubit
//   +x, -x, +y, -y, +z, -z      Pauli eigenstates
//   basis-<k>                   |k⟩ in the dimension of the observables
//   uniform                     equal superposition in that dimension

#pragma once

#include "wvqp/hilbert.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <string>

namespace wvqp::cli {

/// Throws InvariantViolation for an unknown name.
Observable builtin_observable(const std::string& name);

/// Names that need a dimension use `dim`. Throws InvariantViolation.
StateVector builtin_state(const std::string& name, std::size_t dim);

/// A builtin name or an explicit matrix (see matrix_from_json).
Observable observable_from_json(const nlohmann::json& j);

/// A builtin name or explicit amplitudes, normalized if needed.
StateVector state_from_json(const nlohmann::json& j, std::size_t dim);

/// Spin-j component matrix for axis 'x', 'y' or 'z'.
Matrix spin_matrix(double j, char axis);

}  // namespace wvqp::cli
