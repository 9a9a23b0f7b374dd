// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Subcommands qp, bohm, ontology and verify, each
// driven by a scenario (a JSON file and/or flags).

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wvqp::cli {

enum ExitCode : int {
  kOk = 0,
  kIdentityFailure = 1,
  kValidation = 2,
  kRuntime = 3,
};

struct Scenario {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  /// File for qp/ontology/verify (empty means stdout); directory for bohm.
  std::string out_path;
  std::string format = "csv";

  /// FNV-1a of the canonical JSON of {command, params, seed}.
  std::uint64_t hash() const;
};

/// Reads {"command", "params", "seed", "output": {"path", "format"}}.
/// Throws InvariantViolation on malformed input.
Scenario load_scenario(const std::string& path);

int run_qp(const Scenario& scenario, std::ostream& out, std::ostream& err);
int run_bohm(const Scenario& scenario, std::ostream& out, std::ostream& err, std::size_t threads);
int run_ontology(const Scenario& scenario, std::ostream& out, std::ostream& err);
int run_verify(const Scenario& scenario, std::ostream& out, std::ostream& err);

/// Parses arguments, dispatches and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wvqp::cli
