// Command-line front end: single-point solves, 1D/2D sweeps, the finite-N
// exact-diagonalization oracle, and the invariant validation suite.
//
// Exit codes: 0 success, 1 configuration error, 2 solver/ED failure,
// 3 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jcdicke/jcdicke.hpp"

namespace {

using jcdicke::errc;
using jcdicke::Error;
using jcdicke::format_double;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::config_error:
    case errc::invalid_params:
    case errc::non_positive_omega_a:
    case errc::detuning_too_small:
    case errc::division_by_zero:
      return 1;
    default:
      return 2;
  }
}

struct CommonFlags {
  std::optional<double> omega_a, omega_b, eta, lambda, Omega, w;
  std::optional<long> n_atoms;
  std::optional<int> jobs;
  std::optional<std::string> out;
  bool plot_script = false;
  std::optional<std::string> config;
  std::vector<std::string> axes;
};

void add_param_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--omega-a", f.omega_a, "effective cavity frequency");
  cmd->add_option("--omega-b", f.omega_b, "effective atomic frequency");
  cmd->add_option("--eta", f.eta, "collective collision parameter");
  cmd->add_option("--lambda", f.lambda, "collective cavity coupling");
  cmd->add_option("--omega-mw-coupling", f.Omega, "drive amplitude Omega");
  cmd->add_option("--w", f.w, "composite coupling eta + lambda^2/omega_a");
  cmd->add_option("--n-atoms", f.n_atoms, "atom count N");
  cmd->add_option("--config", f.config, "key = value configuration file");
}

// Config file first, explicit flags override.
jcdicke::SweepSpec build_spec(const CommonFlags& f, jcdicke::SweepMode mode) {
  jcdicke::SweepSpec spec;
  if (f.config) spec = jcdicke::load_config(*f.config);
  spec.mode = mode;
  if (f.omega_a) spec.fixed.omega_a = f.omega_a;
  if (f.omega_b) spec.fixed.omega_b = f.omega_b;
  if (f.eta) spec.fixed.eta = f.eta;
  if (f.lambda) spec.fixed.lambda = f.lambda;
  if (f.Omega) spec.fixed.Omega = f.Omega;
  if (f.w) spec.fixed.w = f.w;
  if (f.n_atoms) spec.fixed.n_atoms = f.n_atoms;
  if (f.jobs) spec.jobs = *f.jobs;
  if (f.out) spec.out = *f.out;
  if (f.plot_script) spec.emit_plot_script = true;
  if (!f.axes.empty()) {
    spec.axes.clear();
    for (const auto& a : f.axes) spec.axes.push_back(jcdicke::parse_axis(a));
  }
  return spec;
}

int cmd_solve(const CommonFlags& flags) {
  const jcdicke::SweepSpec spec = build_spec(flags, jcdicke::SweepMode::point);
  jcdicke::validate_spec(spec);
  const jcdicke::ResolvedPoint rp = jcdicke::resolve_point(spec.fixed);
  const jcdicke::MeanFieldSolution sol =
      rp.params ? jcdicke::solve_model_ground_state(*rp.params)
                : jcdicke::solve_ground_state(rp.problem);
  const jcdicke::PhaseLabel label = jcdicke::classify(rp.problem, sol);

  std::printf("beta=%s\n", format_double(sol.beta).c_str());
  std::printf("beta_squared=%s\n", format_double(sol.beta * sol.beta).c_str());
  std::printf("magnetization=%s\n", format_double(sol.magnetization).c_str());
  std::printf("energy=%s\n", format_double(sol.energy).c_str());
  std::printf("alpha=%s\n",
              sol.alpha ? format_double(*sol.alpha).c_str() : "nan");
  std::printf("residual=%s\n", format_double(sol.residual).c_str());
  std::printf("degenerate=%d\n", sol.degenerate ? 1 : 0);
  std::printf("boundary=%d\n", sol.boundary ? 1 : 0);
  std::printf("label=%s\n", jcdicke::to_string(label));

  if (!spec.out.empty()) {
    nlohmann::json j;
    j["beta"] = sol.beta;
    j["beta_squared"] = sol.beta * sol.beta;
    j["magnetization"] = sol.magnetization;
    j["energy"] = sol.energy;
    if (sol.alpha) j["alpha"] = *sol.alpha;
    else j["alpha"] = nullptr;
    j["residual"] = sol.residual;
    j["degenerate"] = sol.degenerate;
    j["boundary"] = sol.boundary;
    j["label"] = jcdicke::to_string(label);
    std::ofstream out(spec.out);
    if (!out) jcdicke::fail(errc::io_error, "cannot open '" + spec.out + "'");
    out << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_sweep(const CommonFlags& flags, jcdicke::SweepMode mode) {
  const jcdicke::SweepSpec spec = build_spec(flags, mode);
  const jcdicke::SweepSummary summary = jcdicke::run_sweep(spec);
  std::printf("wrote %zu rows to %s\n", summary.rows, summary.csv_path.c_str());
  if (!summary.plot_path.empty())
    std::printf("wrote plot script to %s\n", summary.plot_path.c_str());
  if (summary.failures > 0) {
    std::fprintf(stderr, "%zu grid points failed to solve\n", summary.failures);
    return 2;
  }
  return 0;
}

// Atom count comes from --n-atoms, or from the study list when present.
jcdicke::ModelParams model_params_from(const jcdicke::SweepSpec& spec) {
  const auto& f = spec.fixed;
  if (!f.omega_a || !f.omega_b || !f.eta || !f.lambda || !f.Omega)
    jcdicke::fail(errc::config_error,
                  "ed mode needs omega-a, omega-b, eta, lambda and "
                  "omega-mw-coupling");
  if (!f.n_atoms && spec.ed_study.empty())
    jcdicke::fail(errc::config_error, "ed mode needs n-atoms");
  jcdicke::ModelParams p;
  p.omega_a = *f.omega_a;
  p.omega_b = *f.omega_b;
  p.eta = *f.eta;
  p.lambda = *f.lambda;
  p.Omega = *f.Omega;
  p.N = f.n_atoms ? *f.n_atoms : spec.ed_study.front();
  jcdicke::validate(p);
  if (f.w) {
    const double derived = jcdicke::compute_w(p).w;
    if (std::fabs(derived - *f.w) > 1e-10)
      jcdicke::fail(errc::config_error,
                    "w disagrees with eta + lambda^2/omega_a");
  }
  return p;
}

int cmd_ed(const CommonFlags& flags, const std::optional<int>& n_max,
           const std::optional<long>& dim_cap, const std::string& study,
           const std::string& dump_path) {
  jcdicke::SweepSpec spec = build_spec(flags, jcdicke::SweepMode::ed);
  if (n_max) spec.ed_n_max = n_max;
  if (dim_cap) spec.ed_dim_cap = static_cast<std::size_t>(*dim_cap);
  if (!study.empty()) {
    spec.ed_study.clear();
    std::stringstream ss(study);
    std::string tok;
    while (std::getline(ss, tok, ','))
      spec.ed_study.push_back(std::stol(tok));
  }
  if (!dump_path.empty()) spec.dump_matrix_path = dump_path;
  jcdicke::validate_spec(spec);

  const jcdicke::ModelParams p = model_params_from(spec);
  jcdicke::EDOptions opts;
  if (spec.ed_dim_cap) opts.dim_cap = *spec.ed_dim_cap;
  const int start =
      spec.ed_n_max ? *spec.ed_n_max : jcdicke::suggest_photon_cutoff(p);

  if (!spec.dump_matrix_path.empty()) {
    std::ofstream mat(spec.dump_matrix_path);
    if (!mat)
      jcdicke::fail(errc::io_error,
                    "cannot open '" + spec.dump_matrix_path + "'");
    jcdicke::dump_matrix(jcdicke::build_hamiltonian(p, start), mat);
  }

  if (!spec.ed_study.empty()) {
    const auto rows = jcdicke::convergence_study(p, spec.ed_study, opts);
    std::string csv = "N,energy_per_atom,mean_field_energy,gap,n_max_used,converged\n";
    for (const auto& r : rows) {
      csv += std::to_string(r.N) + ',' + format_double(r.energy_per_atom) + ',' +
             format_double(r.mean_field_energy) + ',' + format_double(r.gap) +
             ',' + std::to_string(r.n_max_used) + ',' +
             (r.converged ? "1" : "0") + '\n';
    }
    if (!spec.out.empty()) {
      std::ofstream out(spec.out, std::ios::binary);
      if (!out) jcdicke::fail(errc::io_error, "cannot open '" + spec.out + "'");
      out << csv;
    } else {
      std::fputs(csv.c_str(), stdout);
    }
    for (const auto& r : rows)
      if (!r.converged) return 2;
    return 0;
  }

  const jcdicke::EDResult res = jcdicke::ground_state(p, start, opts);
  const double e_mf = jcdicke::mean_field_energy_per_atom(p);
  std::printf("energy_per_atom=%s\n", format_double(res.energy_per_atom).c_str());
  std::printf("jz_per_atom=%s\n", format_double(res.jz_per_atom).c_str());
  std::printf("photons_per_atom=%s\n", format_double(res.photons_per_atom).c_str());
  std::printf("n_max_used=%d\n", res.n_max_used);
  std::printf("converged=%d\n", res.converged ? 1 : 0);
  std::printf("ground_degenerate=%d\n", res.ground_degenerate ? 1 : 0);
  std::printf("mean_field_energy=%s\n", format_double(e_mf).c_str());
  std::printf("gap=%s\n",
              format_double(std::fabs(res.energy_per_atom - e_mf)).c_str());
  if (!spec.out.empty()) {
    nlohmann::json j;
    j["energy_per_atom"] = res.energy_per_atom;
    j["jz_per_atom"] = res.jz_per_atom;
    j["photons_per_atom"] = res.photons_per_atom;
    j["n_max_used"] = res.n_max_used;
    j["converged"] = res.converged;
    j["ground_degenerate"] = res.ground_degenerate;
    j["mean_field_energy"] = e_mf;
    std::ofstream out(spec.out);
    if (!out) jcdicke::fail(errc::io_error, "cannot open '" + spec.out + "'");
    out << j.dump(2) << '\n';
  }
  return res.converged ? 0 : 2;
}

int cmd_validate(const std::optional<std::string>& out_path) {
  const jcdicke::ValidationReport report = jcdicke::run_validate();
  std::fputs(jcdicke::to_text(report).c_str(), stdout);
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) jcdicke::fail(errc::io_error, "cannot open '" + *out_path + "'");
    out << jcdicke::to_json(report);
  }
  return report.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field ground states, phase diagrams and a finite-N "
               "exact-diagonalization oracle for the driven JC-Dicke model"};
  app.require_subcommand(1);

  CommonFlags solve_flags, sweep1d_flags, sweep2d_flags, ed_flags;

  CLI::App* solve = app.add_subcommand("solve", "solve a single point");
  add_param_flags(solve, solve_flags);
  solve->add_option("--out", solve_flags.out, "write the solution as JSON");

  CLI::App* sweep1d = app.add_subcommand("sweep1d", "sweep one parameter");
  add_param_flags(sweep1d, sweep1d_flags);
  sweep1d->add_option("--axis", sweep1d_flags.axes, "axis as name:from:to:steps");
  sweep1d->add_option("--out", sweep1d_flags.out, "CSV output path");
  sweep1d->add_flag("--plot-script", sweep1d_flags.plot_script,
                    "emit a gnuplot script next to the CSV");
  sweep1d->add_option("--jobs", sweep1d_flags.jobs, "worker count");

  CLI::App* sweep2d = app.add_subcommand("sweep2d", "sweep two parameters");
  add_param_flags(sweep2d, sweep2d_flags);
  sweep2d->add_option("--axis", sweep2d_flags.axes, "axis as name:from:to:steps");
  sweep2d->add_option("--out", sweep2d_flags.out, "CSV output path");
  sweep2d->add_flag("--plot-script", sweep2d_flags.plot_script,
                    "emit a gnuplot script next to the CSV");
  sweep2d->add_option("--jobs", sweep2d_flags.jobs, "worker count");

  CLI::App* ed = app.add_subcommand("ed", "finite-N exact diagonalization");
  add_param_flags(ed, ed_flags);
  std::optional<int> ed_n_max;
  std::optional<long> ed_dim_cap;
  std::string ed_study, ed_dump;
  ed->add_option("--n-max", ed_n_max, "starting photon cutoff (default: auto)");
  ed->add_option("--dim-cap", ed_dim_cap, "basis dimension cap");
  ed->add_option("--study", ed_study, "comma-separated N list for a convergence study");
  ed->add_option("--dump-matrix", ed_dump, "write the Hamiltonian as 'row col value' lines");
  ed->add_option("--out", ed_flags.out, "JSON (single run) or CSV (study) output path");

  CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
  std::optional<std::string> validate_out;
  validate->add_option("--out", validate_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_flags);
    if (sweep1d->parsed()) return cmd_sweep(sweep1d_flags, jcdicke::SweepMode::sweep1d);
    if (sweep2d->parsed()) return cmd_sweep(sweep2d_flags, jcdicke::SweepMode::sweep2d);
    if (ed->parsed()) return cmd_ed(ed_flags, ed_n_max, ed_dim_cap, ed_study, ed_dump);
    if (validate->parsed()) return cmd_validate(validate_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
