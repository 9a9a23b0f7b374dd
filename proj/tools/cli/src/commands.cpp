// SPDX-License-Identifier: Apache-2.0

#include "wvqp/bohm.hpp"
#include "wvqp/errors.hpp"
#include "wvqp/ontology.hpp"
#include "wvqp/quasiprob.hpp"
#include "wvqp_cli/builtins.hpp"
#include "wvqp_cli/cli.hpp"
#include "wvqp_cli/io.hpp"
#include "wvqp_cli/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <ostream>

namespace wvqp::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Writes to a file when a path is given, otherwise to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }

  std::ostream& operator*() { return *stream_; }

  void finish() {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

double get_double(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number()) throw InvariantViolation(std::string(key) + " must be a number");
  return p[key].get<double>();
}

double require_double(const json& p, const char* key, const std::string& where) {
  if (!p.contains(key)) throw InvariantViolation(where + " needs '" + key + "'");
  return get_double(p, key, 0.0);
}

std::size_t get_size(const json& p, const char* key, std::size_t fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number_integer() || p[key].get<long long>() < 0) {
    throw InvariantViolation(std::string(key) + " must be a non-negative integer");
  }
  return p[key].get<std::size_t>();
}

Alpha alpha_of(const json& p) { return p.contains("alpha") ? alpha_from_json(p["alpha"]) : Alpha(); }

void check_format(const Scenario& s) {
  if (s.format != "csv" && s.format != "json") throw InvariantViolation("format must be csv or json");
}

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

// ------------------------------------------------------------------------ qp

void write_qp(const Scenario& s, const QPDistribution& qp, std::ostream& os) {
  const std::uint64_t hash = s.hash();
  const bool joint = qp.kind == QPKind::joint;
  if (s.format == "json") {
    json rows = json::array();
    if (joint) {
      for (std::size_t ib = 0; ib < qp.reference_outcomes.size(); ++ib) {
        for (std::size_t ia = 0; ia < qp.outcomes.size(); ++ia) {
          const Complex v = qp.at(ib, ia);
          rows.push_back({{"b", qp.reference_outcomes[ib]}, {"a", qp.outcomes[ia]}, {"re", v.real()}, {"im", v.imag()}});
        }
      }
    } else {
      for (std::size_t ia = 0; ia < qp.outcomes.size(); ++ia) {
        rows.push_back({{"outcome", qp.outcomes[ia]}, {"re", qp.at(ia).real()}, {"im", qp.at(ia).imag()}});
      }
    }
    write_json(os, json{{"_meta", meta_object(hash, qp.alpha)},
                        {"kind", to_string(qp.kind)},
                        {"context", qp.context},
                        {"rows", std::move(rows)}});
    return;
  }
  os << header_comment(hash, qp.alpha) << '\n';
  if (joint) {
    os << "b,a,re,im\n";
    for (std::size_t ib = 0; ib < qp.reference_outcomes.size(); ++ib) {
      for (std::size_t ia = 0; ia < qp.outcomes.size(); ++ia) {
        const Complex v = qp.at(ib, ia);
        os << format_double(qp.reference_outcomes[ib]) << ',' << format_double(qp.outcomes[ia]) << ','
           << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
      }
    }
  } else {
    os << "outcome,re,im\n";
    for (std::size_t ia = 0; ia < qp.outcomes.size(); ++ia) {
      os << format_double(qp.outcomes[ia]) << ',' << format_double(qp.at(ia).real()) << ','
         << format_double(qp.at(ia).imag()) << '\n';
    }
  }
}

// ---------------------------------------------------------------------- bohm

struct BohmSetup {
  bohm::Grid1D grid;
  bohm::BohmConfig cfg;
  Observable h;
  bohm::WaveFunction psi0;
};

bohm::Grid1D grid_of(const json& p) {
  if (!p.contains("grid") || !p["grid"].is_object()) throw InvariantViolation("bohm needs a 'grid' object");
  const auto& g = p["grid"];
  const std::size_t n = g.contains("n_points") ? get_size(g, "n_points", 0) : get_size(g, "n", 0);
  return bohm::Grid1D(n, require_double(g, "x_min", "grid"), require_double(g, "x_max", "grid"));
}

std::vector<double> potential_of(const json& p, const bohm::Grid1D& grid, double mass) {
  if (!p.contains("potential")) return {};
  const auto& v = p["potential"];
  const std::string kind = v.value("kind", "free");
  if (kind == "free") return {};
  if (kind == "harmonic") {
    return bohm::harmonic_potential(grid, mass, require_double(v, "omega", "harmonic potential"),
                                    get_double(v, "center", 0.0));
  }
  if (kind == "table") {
    if (!v.contains("values") || !v["values"].is_array()) throw InvariantViolation("table potential needs 'values'");
    std::vector<double> out;
    for (const auto& x : v["values"]) {
      if (!x.is_number()) throw InvariantViolation("potential values must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  throw InvariantViolation("unknown potential kind '" + kind + "'");
}

bohm::WaveFunction initial_of(const json& p, const bohm::Grid1D& grid, const Observable& h) {
  if (!p.contains("initial") || !p["initial"].is_object()) throw InvariantViolation("bohm needs an 'initial' object");
  const auto& init = p["initial"];
  const std::string kind = init.value("kind", "gaussian");
  if (kind == "gaussian") {
    return bohm::WaveFunction::gaussian(grid, get_double(init, "x0", 0.0), require_double(init, "sigma0", "gaussian"),
                                        get_double(init, "k0", 0.0));
  }
  if (kind == "eigenstate") {
    const std::size_t level = get_size(init, "level", 0);
    if (level >= grid.size()) throw InvariantViolation("eigenstate level exceeds the grid size");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw SolverFailure("Hamiltonian eigen-solve failed");
    Vector v = solver.eigenvectors().col(static_cast<Eigen::Index>(level));
    // Fix the global phase so the largest amplitude is real and positive.
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    v *= std::abs(v(peak)) / v(peak);
    return bohm::WaveFunction::normalized(grid, std::move(v));
  }
  throw InvariantViolation("unknown initial kind '" + kind + "'");
}

Observable field_observable(const std::string& name, const BohmSetup& setup) {
  if (name == "position") return bohm::position_operator(setup.grid);
  if (name == "momentum") return bohm::momentum_operator(setup.grid, setup.cfg.hbar);
  if (name == "hamiltonian") return setup.h;
  throw InvariantViolation("unknown field observable '" + name + "' (position, momentum, hamiltonian)");
}

void write_field_csv(std::ostream& os, const std::string& header, const bohm::Grid1D& grid,
                     const std::vector<Complex>& values, const std::vector<bool>& defined) {
  os << header << "\nx,re,im\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Complex v = defined[j] ? values[j] : Complex(nan, nan);
    os << format_double(grid.x(j)) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  }
}

json field_json(const json& meta, const bohm::Grid1D& grid, const std::vector<Complex>& values,
                const std::vector<bool>& defined) {
  json x = json::array();
  json re = json::array();
  json im = json::array();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    x.push_back(grid.x(j));
    // Undefined points are null.
    re.push_back(defined[j] ? json(values[j].real()) : json(nullptr));
    im.push_back(defined[j] ? json(values[j].imag()) : json(nullptr));
  }
  return json{{"_meta", meta}, {"x", std::move(x)}, {"re", std::move(re)}, {"im", std::move(im)}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

// -------------------------------------------------------------------- ontology

std::vector<Observable> observables_of(const json& p) {
  if (!p.contains("observables") || !p["observables"].is_array()) {
    throw InvariantViolation("ontology needs an 'observables' list");
  }
  std::vector<Observable> out;
  for (const auto& o : p["observables"]) out.push_back(observable_from_json(o));
  return out;
}

std::vector<StateVector> preparations_of(const json& p, std::size_t dim) {
  if (!p.contains("preparations") || !p["preparations"].is_array()) {
    throw InvariantViolation("ontology needs a 'preparations' list");
  }
  std::vector<StateVector> out;
  for (const auto& s : p["preparations"]) out.push_back(state_from_json(s, dim));
  return out;
}

}  // namespace

// ----------------------------------------------------------------------- run

int run_qp(const Scenario& s, std::ostream& out, std::ostream& /*err*/) {
  check_format(s);
  const json& p = s.params;
  const std::string mode = p.value("mode", "");
  if (mode.empty()) throw InvariantViolation("qp needs one of --conditional, --joint, --marginal");
  if (!p.contains("A")) throw InvariantViolation("qp needs an observable A (--A)");
  const Alpha alpha = alpha_of(p);
  const auto a = observable_from_json(p["A"]);
  const std::size_t dim = a.dim();

  QPDistribution qp;
  if (mode == "conditional") {
    if (!p.contains("pre")) throw InvariantViolation("conditional QP needs a pre-selected state (--pre)");
    if (!p.contains("post")) throw InvariantViolation("conditional QP needs a post-selected state (--post)");
    qp = conditional_qp(a, state_from_json(p["pre"], dim), state_from_json(p["post"], dim), alpha);
  } else if (mode == "joint" || mode == "marginal") {
    if (!p.contains("B")) throw InvariantViolation(mode + " QP needs a reference observable B (--B)");
    if (!p.contains("pre")) throw InvariantViolation(mode + " QP needs a state (--pre)");
    const auto b = observable_from_json(p["B"]);
    const auto psi = state_from_json(p["pre"], dim);
    qp = mode == "joint" ? joint_qp(b, a, psi, alpha) : marginal_qp(b, a, psi, alpha);
  } else {
    throw InvariantViolation("unknown qp mode '" + mode + "'");
  }

  Sink sink(s.out_path, out);
  write_qp(s, qp, *sink);
  sink.finish();
  return kOk;
}

int run_bohm(const Scenario& s, std::ostream& out, std::ostream& err, std::size_t threads) {
  check_format(s);
  if (s.out_path.empty()) throw InvariantViolation("bohm needs an output directory (--out)");
  const json& p = s.params;
  const Alpha alpha = alpha_of(p);

  const auto grid = grid_of(p);
  bohm::BohmConfig cfg;
  cfg.hbar = get_double(p, "hbar", 1.0);
  cfg.mass = get_double(p, "mass", 1.0);
  cfg.dt = get_double(p, "dt", 1e-3);
  cfg.potential = potential_of(p, grid, cfg.mass);
  cfg.validate(grid);
  const double t_final = require_double(p, "t_final", "bohm");
  const std::size_t n_steps = bohm::steps_for(t_final, cfg.dt);
  const std::size_t m = get_size(p, "trajectories", 1000);
  if (m == 0) throw InvariantViolation("trajectories must be >= 1");
  if (!s.seed) throw InvariantViolation("bohm samples initial positions and needs a seed (--seed)");

  const auto h = bohm::build_hamiltonian(grid, cfg);
  const BohmSetup setup{grid, cfg, h, initial_of(p, grid, h)};

  if (bohm::timestep_too_large(setup.psi0, h, cfg)) {
    err << "warning: dt*E/hbar = " << cfg.dt * bohm::populated_energy_scale(setup.psi0, h) / cfg.hbar
        << " exceeds 0.5; the time step may not resolve the dynamics\n";
  }
  if (p.contains("initial") && p["initial"].value("kind", "gaussian") == "gaussian" && cfg.potential.empty()) {
    const auto& init = p["initial"];
    const double sigma0 = init["sigma0"].get<double>();
    const double spread = cfg.hbar * t_final / (2.0 * cfg.mass * sigma0 * sigma0);
    const double sigma_t = sigma0 * std::sqrt(1.0 + spread * spread);
    const double x0 = get_double(init, "x0", 0.0);
    const double x_t = x0 + cfg.hbar * get_double(init, "k0", 0.0) * t_final / cfg.mass;
    if (std::min(x0, x_t) - 5.0 * sigma_t < grid.x_min() || std::max(x0, x_t) + 5.0 * sigma_t > grid.x_max()) {
      err << "warning: the packet comes within 5 sigma of the walls; reflections will distort the run\n";
    }
  }

  const auto starts = bohm::sample_initial_positions(setup.psi0, m, *s.seed);
  bohm::TrajectoryOptions options;
  options.seed = *s.seed;
  options.threads = threads;
  options.record_stride = get_size(p, "record_stride", std::max<std::size_t>(1, n_steps / 100));
  const auto run = bohm::integrate_trajectories(setup.psi0, h, cfg, starts, t_final, options);
  const auto& ens = run.ensemble;
  const auto& psi_t = run.final_state;

  const std::uint64_t hash = s.hash();
  const json meta = meta_object(hash, alpha);
  const std::string header = header_comment(hash, alpha);
  const fs::path dir(s.out_path);
  fs::create_directories(dir);

  // Trajectories.
  if (s.format == "csv") {
    std::string text = header + "\nt";
    for (std::size_t k = 0; k < m; ++k) text += ",x_" + std::to_string(k + 1);
    text += '\n';
    for (std::size_t j = 0; j < ens.times.size(); ++j) {
      text += format_double(ens.times[j]);
      for (std::size_t k = 0; k < m; ++k) (text += ',') += format_double(ens.positions[k][j]);
      text += '\n';
    }
    write_file(dir / "trajectories.csv", text);
  } else {
    write_file(dir / "trajectories.json",
               json{{"_meta", meta}, {"times", ens.times}, {"positions", ens.positions}}.dump() + "\n");
  }

  // Fields at the final time.
  std::vector<std::string> names{"momentum"};
  if (p.contains("fields")) {
    names.clear();
    for (const auto& f : p["fields"]) {
      if (!f.is_string()) throw InvariantViolation("fields must be observable names");
      names.push_back(f.get<std::string>());
    }
  }
  const auto velocity = bohm::velocity_field(psi_t, cfg);
  std::vector<Complex> vel(velocity.values.begin(), velocity.values.end());
  const auto emit_field = [&](const std::string& tag, const std::vector<Complex>& values, const std::vector<bool>& defined) {
    if (s.format == "csv") {
      std::ostringstream os;
      write_field_csv(os, header, grid, values, defined);
      write_file(dir / ("field_" + tag + ".csv"), os.str());
    } else {
      write_file(dir / ("field_" + tag + ".json"), field_json(meta, grid, values, defined).dump(2) + "\n");
    }
  };
  emit_field("velocity", vel, velocity.defined);

  json averages = json::object();
  for (const auto& name : names) {
    const auto obs = field_observable(name, setup);
    const auto field = bohm::local_value(obs, psi_t, alpha, name);
    emit_field(name, field.values, field.defined);
    averages[name] = {{"ensemble_average", to_json(bohm::ensemble_average(field, psi_t))},
                      {"expectation", to_json(psi_t.expectation(obs.matrix()))}};
  }

  const json summary{{"_meta", meta},
                     {"ks_statistic", bohm::equivariance_check(ens, psi_t)},
                     {"trajectories", m},
                     {"steps", n_steps},
                     {"t_final", t_final},
                     {"order_preserved", ens.order_preserved},
                     {"norm_drift", std::abs(psi_t.norm() - 1.0)},
                     {"fields", std::move(averages)}};
  write_file(dir / "equivariance.json", summary.dump(2) + "\n");
  out << "ks_statistic " << format_double(summary["ks_statistic"].get<double>()) << '\n';
  return kOk;
}

int run_ontology(const Scenario& s, std::ostream& out, std::ostream& /*err*/) {
  check_format(s);
  const json& p = s.params;
  const std::string model_name = p.value("model", "");
  const Alpha alpha = alpha_of(p);
  const auto observables = observables_of(p);
  if (observables.empty()) throw InvariantViolation("ontology needs at least two observables");
  const std::size_t dim = observables.front().dim();
  const auto preparations = preparations_of(p, dim);

  std::optional<ontology::OntModel> model;
  if (model_name == "bohmian-grid") {
    std::vector<double> positions(dim);
    for (std::size_t j = 0; j < dim; ++j) positions[j] = static_cast<double>(j);
    if (p.contains("positions")) positions = p["positions"].get<std::vector<double>>();
    model = ontology::bohmian_grid_model(std::move(positions), alpha);
  } else if (model_name == "classical-toy") {
    model = ontology::classical_toy_model(dim);
  } else if (model_name == "os-toy") {
    model = ontology::os_toy_model(dim);
  } else {
    throw InvariantViolation("unknown model '" + model_name + "' (bohmian-grid, classical-toy, os-toy)");
  }

  const auto r = ontology::classify_synlogicality(*model, observables, preparations);
  json prep_witness = nullptr;
  if (r.preparation_witness) {
    const auto& w = *r.preparation_witness;
    prep_witness = {{"ontic_index", w.ontic_index}, {"outcome_index", w.outcome_index},
                    {"observable", w.observable},   {"preparation_1", w.preparation_1},
                    {"preparation_2", w.preparation_2}, {"difference", w.difference}};
  }
  json epi_witness = nullptr;
  if (r.psi_epistemic_witness) {
    const auto& w = *r.psi_epistemic_witness;
    epi_witness = {{"preparation_1", w.preparation_1}, {"preparation_2", w.preparation_2},
                   {"ontic_index", w.ontic_index}, {"overlap", w.overlap}};
  }
  const std::string label = std::string(r.observable_synlogical ? "O-S" : "O-AS") + "," +
                            (r.preparation_synlogical ? "P-S" : "P-AS");

  Sink sink(s.out_path, out);
  if (s.format == "json") {
    write_json(*sink, json{{"_meta", meta_object(s.hash(), alpha)},
                           {"model", r.model},
                           {"classification", label},
                           {"asynlogical", r.asynlogical()},
                           {"observable_synlogical", r.observable_synlogical},
                           {"observable_deviation", r.observable_deviation},
                           {"preparation_synlogical", r.preparation_synlogical},
                           {"preparation_deviation", r.preparation_deviation},
                           {"reproduction_ok", r.reproduction_ok},
                           {"reproduction_deviation", r.reproduction_deviation},
                           {"bayes_deviation", r.bayes_deviation},
                           {"tolerance", r.tolerance},
                           {"excluded_entries", r.excluded_entries},
                           {"preparation_witness", prep_witness},
                           {"psi_epistemic_witness", epi_witness}});
  } else {
    auto& os = *sink;
    const auto b = [](bool v) { return v ? "true" : "false"; };
    os << header_comment(s.hash(), alpha) << "\nkey,value\n"
       << "model," << r.model << "\nclassification," << label << "\nasynlogical," << b(r.asynlogical())
       << "\nobservable_synlogical," << b(r.observable_synlogical) << "\nobservable_deviation,"
       << format_double(r.observable_deviation) << "\npreparation_synlogical," << b(r.preparation_synlogical)
       << "\npreparation_deviation," << format_double(r.preparation_deviation) << "\nreproduction_ok,"
       << b(r.reproduction_ok) << "\nreproduction_deviation," << format_double(r.reproduction_deviation)
       << "\nbayes_deviation," << format_double(r.bayes_deviation) << "\nexcluded_entries," << r.excluded_entries
       << '\n';
    if (r.preparation_witness) {
      os << "preparation_witness_difference," << format_double(r.preparation_witness->difference) << '\n';
    }
    if (r.psi_epistemic_witness) {
      os << "psi_epistemic_overlap," << format_double(r.psi_epistemic_witness->overlap) << '\n';
    }
  }
  sink.finish();
  return kOk;
}

int run_verify(const Scenario& s, std::ostream& out, std::ostream& err) {
  check_format(s);
  const json& p = s.params;
  VerifyOptions options;
  options.dim = get_size(p, "dim", options.dim);
  options.trials = get_size(p, "trials", options.trials);
  options.perturb = get_double(p, "perturb", 0.0);
  options.seed = s.seed.value_or(options.seed);
  const auto report = run_identity_suite(options);

  const Alpha alpha;
  Sink sink(s.out_path, out);
  if (s.format == "json") {
    json ids = json::array();
    for (const auto& c : report.checks) {
      ids.push_back({{"name", c.name}, {"max_deviation", c.deviation}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
    }
    write_json(*sink, json{{"_meta", meta_object(s.hash(), alpha)},
                           {"dim", options.dim},
                           {"trials", options.trials},
                           {"identities", std::move(ids)},
                           {"passed", report.passed()}});
  } else {
    *sink << header_comment(s.hash(), alpha) << "\nname,max_deviation,tolerance,passed\n";
    for (const auto& c : report.checks) {
      *sink << c.name << ',' << format_double(c.deviation) << ',' << format_double(c.tolerance) << ','
            << (c.passed() ? "true" : "false") << '\n';
    }
  }
  sink.finish();
  for (const auto& c : report.checks) {
    if (!c.passed()) err << "identity failed: " << c.name << " (deviation " << c.deviation << ")\n";
  }
  return report.passed() ? kOk : kIdentityFailure;
}

}  // namespace wvqp::cli
