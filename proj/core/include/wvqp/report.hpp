// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace wvqp {

/// One named numerical check: a deviation compared against a tolerance.
struct Check {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;

  bool passed() const noexcept { return deviation <= tolerance; }
};

struct CheckReport {
  std::vector<Check> checks;

  void add(std::string name, double deviation, double tolerance) {
    checks.push_back(Check{std::move(name), deviation, tolerance});
  }

  bool passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }

  double max_deviation() const noexcept {
    double worst = 0.0;
    for (const auto& c : checks) worst = std::max(worst, c.deviation);
    return worst;
  }
};

}  // namespace wvqp
