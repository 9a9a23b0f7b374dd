// SPDX-License-Identifier: Apache-2.0

#include "wvqp_cli/cli.hpp"

#include "wvqp/errors.hpp"
#include "wvqp_cli/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <typeinfo>

namespace wvqp::cli {

namespace {

using nlohmann::json;

// Name of the most derived library error, for diagnostics.
std::string error_kind(const Error& e) {
  if (dynamic_cast<const NodeEncounter*>(&e)) return "NodeEncounter";
  if (dynamic_cast<const OrthogonalPrePost*>(&e)) return "OrthogonalPrePost";
  if (dynamic_cast<const NonHermitian*>(&e)) return "NonHermitian";
  if (dynamic_cast<const DimMismatch*>(&e)) return "DimMismatch";
  if (dynamic_cast<const WrongKind*>(&e)) return "WrongKind";
  if (dynamic_cast<const NotProjector*>(&e)) return "NotProjector";
  if (dynamic_cast<const GridMismatch*>(&e)) return "GridMismatch";
  if (dynamic_cast<const SolverFailure*>(&e)) return "SolverFailure";
  if (dynamic_cast<const ZeroDensityPoint*>(&e)) return "ZeroDensityPoint";
  if (dynamic_cast<const InvariantViolation*>(&e)) return "InvariantViolation";
  return "Error";
}

bool is_runtime(const Error& e) {
  return dynamic_cast<const NodeEncounter*>(&e) || dynamic_cast<const SolverFailure*>(&e) ||
         dynamic_cast<const ZeroDensityPoint*>(&e);
}

struct CommonFlags {
  std::string scenario;
  std::string alpha;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--scenario", f.scenario, "Scenario JSON file");
  sub->add_option("--alpha", f.alpha, "Ordering parameter RE[,IM]");
  sub->add_option("--seed", f.seed, "Random seed");
  sub->add_option("--out", f.out, "Output path");
  sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

// Scenario file first, then flags on top.
Scenario assemble(const std::string& command, const CommonFlags& f) {
  Scenario s;
  if (!f.scenario.empty()) {
    s = load_scenario(f.scenario);
    if (!s.command.empty() && s.command != command) {
      throw InvariantViolation("scenario is for '" + s.command + "', not '" + command + "'");
    }
  }
  s.command = command;
  if (!f.alpha.empty()) s.params["alpha"] = to_json(parse_alpha(f.alpha));
  if (f.seed) s.seed = f.seed;
  if (!f.out.empty()) s.out_path = f.out;
  if (!f.format.empty()) s.format = f.format;
  return s;
}

}  // namespace

std::uint64_t Scenario::hash() const {
  const json canonical{{"command", command}, {"params", params}, {"seed", seed ? json(*seed) : json(nullptr)}};
  return fnv1a64(canonical.dump());
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvariantViolation("cannot read scenario '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvariantViolation("scenario '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw InvariantViolation("scenario must be a JSON object");
  Scenario s;
  if (j.contains("command")) {
    if (!j["command"].is_string()) throw InvariantViolation("scenario command must be a string");
    s.command = j["command"].get<std::string>();
    if (s.command != "qp" && s.command != "bohm" && s.command != "ontology" && s.command != "verify") {
      throw InvariantViolation("unknown scenario command '" + s.command + "'");
    }
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw InvariantViolation("scenario params must be an object");
    s.params = j["params"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InvariantViolation("scenario seed must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (o.contains("path")) s.out_path = o["path"].get<std::string>();
    if (o.contains("format")) s.format = o["format"].get<std::string>();
  }
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak values, alpha-parameterized quasiprobabilities and Bohmian trajectories", "wvqp"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonFlags qp_flags;
  auto* qp = app.add_subcommand("qp", "Conditional, joint or marginal quasiprobabilities");
  add_common(qp, qp_flags);
  bool conditional = false;
  bool joint = false;
  bool marginal = false;
  std::string obs_a;
  std::string obs_b;
  std::string pre;
  std::string post;
  auto* c_flag = qp->add_flag("--conditional", conditional, "p(a|psi,phi)");
  auto* j_flag = qp->add_flag("--joint", joint, "p(b,a|psi)");
  auto* m_flag = qp->add_flag("--marginal", marginal, "sum_b p(b,a|psi)");
  c_flag->excludes(j_flag)->excludes(m_flag);
  j_flag->excludes(m_flag);
  qp->add_option("--A", obs_a, "Measured observable (builtin name or JSON matrix)");
  qp->add_option("--B", obs_b, "Reference observable");
  qp->add_option("--pre,--state", pre, "Pre-selected state");
  qp->add_option("--post", post, "Post-selected state");

  CommonFlags bohm_flags;
  auto* bohm = app.add_subcommand("bohm", "Bohmian trajectories on a 1D grid");
  add_common(bohm, bohm_flags);
  std::size_t threads = 1;
  bohm->add_option("--threads", threads, "Worker threads for trajectory integration")->check(CLI::PositiveNumber);

  CommonFlags ont_flags;
  auto* ont = app.add_subcommand("ontology", "Synlogicality classification of an ontological model");
  add_common(ont, ont_flags);
  std::string model;
  ont->add_option("--model", model, "bohmian-grid, classical-toy or os-toy");

  CommonFlags ver_flags;
  auto* ver = app.add_subcommand("verify", "Randomized identity suite");
  add_common(ver, ver_flags);
  std::optional<long long> dim;
  std::optional<long long> trials;
  std::optional<double> perturb;
  ver->add_option("--dim", dim, "Hilbert-space dimension");
  ver->add_option("--trials", trials, "Random instances per identity");
  ver->add_option("--perturb", perturb, "Fault injection offset (testing only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  // Strings that parse as JSON (matrices, amplitude lists) are taken as JSON.
  const auto value = [](const std::string& text) {
    if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
      try {
        return json::parse(text);
      } catch (const json::parse_error&) {
        throw InvariantViolation("cannot parse '" + text + "' as JSON");
      }
    }
    return json(text);
  };

  try {
    try {
      if (*qp) {
        Scenario s = assemble("qp", qp_flags);
        if (conditional) s.params["mode"] = "conditional";
        if (joint) s.params["mode"] = "joint";
        if (marginal) s.params["mode"] = "marginal";
        if (!obs_a.empty()) s.params["A"] = value(obs_a);
        if (!obs_b.empty()) s.params["B"] = value(obs_b);
        if (!pre.empty()) s.params["pre"] = value(pre);
        if (!post.empty()) s.params["post"] = value(post);
        return run_qp(s, out, err);
      }
      if (*bohm) return run_bohm(assemble("bohm", bohm_flags), out, err, threads);
      if (*ont) {
        Scenario s = assemble("ontology", ont_flags);
        if (!model.empty()) s.params["model"] = model;
        return run_ontology(s, out, err);
      }
      Scenario s = assemble("verify", ver_flags);
      if (dim) {
        if (*dim < 2) throw InvariantViolation("--dim must be >= 2");
        s.params["dim"] = *dim;
      }
      if (trials) {
        if (*trials < 1) throw InvariantViolation("--trials must be >= 1");
        s.params["trials"] = *trials;
      }
      if (perturb) s.params["perturb"] = *perturb;
      return run_verify(s, out, err);
    } catch (const json::exception& e) {
      throw InvariantViolation(std::string("bad scenario value: ") + e.what());
    }
  } catch (const Error& e) {
    err << "error: " << error_kind(e) << ": " << e.what() << '\n';
    return is_runtime(e) ? kRuntime : kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run_cli(static_cast<int>(args.size()), argv.data(), out, err);
}

}  // namespace wvqp::cli
