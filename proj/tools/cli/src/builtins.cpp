// SPDX-License-Identifier: Apache-2.0

#include "wvqp_cli/builtins.hpp"

#include "wvqp/errors.hpp"
#include "wvqp_cli/io.hpp"

#include <charconv>
#include <cmath>

namespace wvqp::cli {

namespace {

std::size_t parse_index(std::string_view text) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvariantViolation("bad index '" + std::string(text) + "'");
  }
  return v;
}

// "1", "3/2", "2" → j.
double parse_spin(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return static_cast<double>(parse_index(text));
  const auto num = parse_index(text.substr(0, slash));
  if (text.substr(slash + 1) != "2") throw InvariantViolation("spin must be integer or half-integer");
  return static_cast<double>(num) / 2.0;
}

}  // namespace

Matrix spin_matrix(double j, char axis) {
  const double twice = 2.0 * j;
  if (!(j > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw InvariantViolation("spin must be a positive integer or half-integer");
  }
  const auto d = static_cast<Eigen::Index>(std::lround(twice) + 1);
  Matrix jz = Matrix::Zero(d, d);
  Matrix jp = Matrix::Zero(d, d);  // raising operator
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = j - static_cast<double>(k);
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  switch (axis) {
    case 'x':
      return 0.5 * (jp + jp.adjoint());
    case 'y':
      return Complex(0.0, -0.5) * (jp - jp.adjoint());
    case 'z':
      return jz;
    default:
      throw InvariantViolation(std::string("unknown spin axis '") + axis + "'");
  }
}

Observable builtin_observable(const std::string& name) {
  if (name == "pauli-x" || name == "pauli-y" || name == "pauli-z") {
    return Observable::from_matrix(2.0 * spin_matrix(0.5, name.back()));
  }
  if (name.rfind("spin-", 0) == 0) {
    const auto dash = name.rfind('-');
    if (dash > 5 && dash + 2 == name.size()) {
      return Observable::from_matrix(spin_matrix(parse_spin(std::string_view(name).substr(5, dash - 5)), name.back()));
    }
  }
  throw InvariantViolation("unknown observable '" + name + "'");
}

StateVector builtin_state(const std::string& name, std::size_t dim) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Vector v(2);
  if (name == "0" || name == "+z") {
    v << 1.0, 0.0;
  } else if (name == "1" || name == "-z") {
    v << 0.0, 1.0;
  } else if (name == "+x") {
    v << r, r;
  } else if (name == "-x") {
    v << r, -r;
  } else if (name == "+y") {
    v << r, i * r;
  } else if (name == "-y") {
    v << r, -i * r;
  } else if (name.rfind("basis-", 0) == 0) {
    return StateVector::basis(dim, parse_index(std::string_view(name).substr(6)));
  } else if (name == "uniform") {
    if (dim == 0) throw InvariantViolation("uniform state needs a dimension");
    return StateVector::normalized(Vector::Ones(static_cast<Eigen::Index>(dim)));
  } else {
    throw InvariantViolation("unknown state '" + name + "'");
  }
  return StateVector::normalized(v);
}

Observable observable_from_json(const nlohmann::json& j) {
  if (j.is_string()) return builtin_observable(j.get<std::string>());
  return Observable::from_matrix(matrix_from_json(j));
}

StateVector state_from_json(const nlohmann::json& j, std::size_t dim) {
  if (j.is_string()) return builtin_state(j.get<std::string>(), dim);
  return StateVector::normalized(vector_from_json(j));
}

}  // namespace wvqp::cli
