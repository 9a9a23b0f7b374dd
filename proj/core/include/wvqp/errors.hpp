// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wvqp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value failed the invariant of its type (normalization, trace, range...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NonHermitian : public Error {
 public:
  using Error::Error;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

/// Pre- and post-selected states are (numerically) orthogonal, so the
/// transition amplitude in the denominator vanishes.
class OrthogonalPrePost : public Error {
 public:
  using Error::Error;
};

class WrongKind : public Error {
 public:
  using Error::Error;
};

class NotProjector : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class ZeroDensityPoint : public Error {
 public:
  using Error::Error;
};

/// A Bohmian trajectory entered a region where the wave function is below the
/// node floor and the guiding velocity is undefined.
class NodeEncounter : public Error {
 public:
  NodeEncounter(std::size_t trajectory, double x, double t)
      : Error("trajectory " + std::to_string(trajectory) +
              " reached an undefined velocity region at x=" + std::to_string(x) +
              ", t=" + std::to_string(t)),
        trajectory_(trajectory),
        x_(x),
        t_(t) {}

  std::size_t trajectory() const noexcept { return trajectory_; }
  double position() const noexcept { return x_; }
  double time() const noexcept { return t_; }

 private:
  std::size_t trajectory_;
  double x_;
  double t_;
};

}  // namespace wvqp
