// SPDX-License-Identifier: Apache-2.0
//
// Randomized identity suite behind `wvqp verify`.

#pragma once

#include "wvqp/report.hpp"

#include <cstddef>
#include <cstdint>

namespace wvqp::cli {

struct VerifyOptions {
  std::size_t dim = 4;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  /// Added to every marginal value before comparing with the Born rule.
  /// Fault injection for testing the failure path.
  double perturb = 0.0;
};

/// One Check per named identity holding the worst deviation over all trials.
/// Throws InvariantViolation for dim < 2 or trials == 0.
CheckReport run_identity_suite(const VerifyOptions& options);

}  // namespace wvqp::cli
