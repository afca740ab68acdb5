#pragma once

// Self-contained invariant suite behind the `validate` CLI subcommand. Every
// check runs on fixed seeds and fixed grids so a pass/fail outcome is
// reproducible; the report is renderable as text or JSON.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jcdicke/exact_diag.hpp"
#include "jcdicke/meanfield.hpp"
#include "jcdicke/model.hpp"
#include "jcdicke/phases.hpp"
#include "jcdicke/sweep.hpp"

namespace jcdicke {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

struct CheckContext {
  bool passed = true;
  int failures = 0;
  std::string first_failure;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    passed = false;
    if (++failures == 1) first_failure = what;
  }
  CheckResult result(const std::string& name) const {
    CheckResult r{name, passed, ""};
    if (!passed)
      r.detail = first_failure +
                 (failures > 1 ? " (+" + std::to_string(failures - 1) + " more)" : "");
    return r;
  }
};

inline std::string num(double x) { return format_double(x); }

// ---- model-core ------------------------------------------------------

inline CheckResult check_model_scale_covariance() {
  CheckContext c;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    RawPhysicalParams raw;
    raw.g13 = u(rng);
    raw.Omega23 = u(rng);
    raw.Delta = 10.0 * std::max(raw.g13, raw.Omega23) * (1.0 + u(rng));
    raw.omega_cavity = 5.0 + u(rng);
    raw.omega_cl = u(rng);
    raw.omega_mw = u(rng);
    raw.Omega_mw = u(rng) - 1.0;
    raw.nu1 = u(rng);
    raw.nu2 = u(rng);
    raw.omega1 = u(rng);
    raw.omega2 = u(rng);
    raw.eta1 = 0.1 * u(rng);
    raw.eta2 = 0.1 * u(rng);
    raw.eta12 = 0.1 * u(rng);
    raw.N = 1 + static_cast<long>(100.0 * u(rng));
    const double scale = 0.5 + u(rng);
    RawPhysicalParams scaled = raw;
    for (double* f : {&scaled.g13, &scaled.Omega23, &scaled.Delta,
                      &scaled.omega_cavity, &scaled.omega_cl, &scaled.omega_mw,
                      &scaled.Omega_mw, &scaled.nu1, &scaled.nu2, &scaled.omega1,
                      &scaled.omega2, &scaled.eta1, &scaled.eta2, &scaled.eta12})
      *f *= scale;
    const ModelParams a = derive_model_params(raw);
    const ModelParams b = derive_model_params(scaled);
    const double tol = 1e-12;
    auto close = [&](double x, double y) {
      return std::fabs(x - y) <= tol * std::max(1.0, std::fabs(y));
    };
    c.require(close(b.omega_a, scale * a.omega_a) &&
                  close(b.omega_b, scale * a.omega_b) &&
                  close(b.eta, scale * a.eta) &&
                  close(b.lambda, scale * a.lambda) &&
                  close(b.Omega, scale * a.Omega),
              "derived parameters are not scale-covariant at trial " +
                  std::to_string(trial));
  }
  return c.result("model/scale-covariance");
}

inline CheckResult check_model_w_sign_invariance() {
  CheckContext c;
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    ModelParams p;
    p.omega_a = 0.1 + std::fabs(u(rng));
    p.eta = u(rng);
    p.lambda = u(rng);
    ModelParams q = p;
    q.lambda = -p.lambda;
    c.require(compute_w(p).w == compute_w(q).w,
              "w changed under lambda -> -lambda at trial " + std::to_string(trial));
  }
  return c.result("model/w-sign-invariance");
}

inline CheckResult check_model_omega0_atom_count() {
  CheckContext c;
  RawPhysicalParams raw;
  raw.g13 = 0.1;
  raw.Omega23 = 0.1;
  raw.Delta = 5.0;
  raw.omega_cavity = 10.0;
  raw.omega_cl = 2.0;
  raw.omega_mw = 3.0;
  raw.nu1 = 0.3;
  raw.nu2 = 0.7;
  raw.omega1 = 1.0;
  raw.omega2 = 4.0;
  raw.eta1 = raw.eta2 = 0.25;  // equal collision strengths
  raw.eta12 = 0.1;
  double first = 0.0;
  for (long n : {1L, 2L, 10L, 1000L}) {
    raw.N = n;
    const ModelParams p = derive_model_params(raw);
    if (n == 1)
      first = p.omega_b;
    else
      c.require(p.omega_b == first,
                "omega_b depends on N despite eta1 = eta2 (N=" + std::to_string(n) + ")");
  }
  return c.result("model/omega0-atom-count-independence");
}

// ---- meanfield -------------------------------------------------------

inline std::vector<MeanFieldProblem> sample_problems(unsigned seed, int count,
                                                     bool positive_w) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ub(-3.0, 3.0);
  std::uniform_real_distribution<double> uo(-2.0, 2.0);
  std::uniform_real_distribution<double> uw(positive_w ? 0.05 : -1.0, 3.0);
  std::vector<MeanFieldProblem> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back({ub(rng), uo(rng), uw(rng)});
  return out;
}

inline CheckResult check_meanfield_global_optimality() {
  CheckContext c;
  for (const auto& p : sample_problems(201, 200, false)) {
    const MeanFieldSolution sol = solve_ground_state(p);
    const double slack = 1e-10 * std::max(1.0, std::fabs(sol.energy));
    for (int i = 0; i <= 10000; ++i) {
      const double beta = -1.0 + 2.0 * i / 10000.0;
      c.require(energy(beta, p) >= sol.energy - slack,
                "audit grid beat the solver at beta=" + num(beta) + " for omega_b=" +
                    num(p.omega_b) + " Omega=" + num(p.Omega) + " w=" + num(p.w));
    }
  }
  return c.result("meanfield/global-optimality");
}

inline CheckResult check_meanfield_stationarity() {
  CheckContext c;
  for (const auto& p : sample_problems(202, 400, false)) {
    const MeanFieldSolution sol = solve_ground_state(p);
    if (std::fabs(sol.beta) >= 1.0 - 1e-6) continue;
    const double bound =
        1e-8 * (std::fabs(p.omega_b) + std::fabs(p.Omega) + std::fabs(p.w) + 1.0);
    c.require(sol.residual <= bound,
              "stationarity residual " + num(sol.residual) + " above " + num(bound));
  }
  return c.result("meanfield/stationarity");
}

inline CheckResult check_meanfield_drive_sign_symmetry() {
  CheckContext c;
  std::mt19937_64 rng(203);
  std::uniform_real_distribution<double> ub(-3.0, 3.0);
  std::uniform_real_distribution<double> uo(-2.0, 2.0);
  std::uniform_real_distribution<double> uw(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double omega_b = ub(rng);
    double Omega = uo(rng);
    while (Omega == 0.0) Omega = uo(rng);
    double w = uw(rng);
    while (w == 0.0) w = uw(rng);
    const MeanFieldSolution a = solve_ground_state({omega_b, Omega, w});
    const MeanFieldSolution b = solve_ground_state({omega_b, -Omega, w});
    c.require(std::fabs(b.beta + a.beta) <= 1e-8 * (1.0 + std::fabs(a.beta)),
              "beta did not flip sign under Omega -> -Omega");
    c.require(std::fabs(b.energy - a.energy) <=
                  1e-12 * std::max(1.0, std::fabs(a.energy)),
              "energy not invariant under Omega -> -Omega");
  }
  return c.result("meanfield/drive-sign-symmetry");
}

inline CheckResult check_meanfield_drive_free_closed_form() {
  CheckContext c;
  for (double w : {0.5, 1.0, 2.0, 3.0}) {
    for (int i = 0; i <= 60; ++i) {
      const double omega_b = -3.0 + 6.0 * i / 60.0;
      const MeanFieldSolution sol = solve_ground_state({omega_b, 0.0, w});
      const double b2 =
          std::clamp(0.5 * (1.0 - omega_b / w), 0.0, 1.0);
      c.require(std::fabs(sol.beta * sol.beta - b2) < 1e-8,
                "beta^2 closed form violated at omega_b=" + num(omega_b) +
                    " w=" + num(w));
      const double u = b2 - 0.5;
      const double e_ref = omega_b * u + w * u * u;
      c.require(std::fabs(sol.energy - e_ref) < 1e-10,
                "drive-free energy closed form violated at omega_b=" + num(omega_b) +
                    " w=" + num(w));
    }
  }
  return c.result("meanfield/drive-free-closed-form");
}

inline CheckResult check_meanfield_envelope_gradient() {
  CheckContext c;
  std::mt19937_64 rng(204);
  std::uniform_real_distribution<double> ub(-2.0, 2.0);
  std::uniform_real_distribution<double> uo(0.05, 2.0);
  std::uniform_real_distribution<double> uw(0.1, 3.0);
  std::uniform_int_distribution<int> sign(0, 1);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const MeanFieldProblem p{ub(rng), (sign(rng) ? 1.0 : -1.0) * uo(rng), uw(rng)};
    const MeanFieldSolution sol = solve_ground_state(p);
    if (sol.degenerate) continue;
    const double fd = (solve_ground_state({p.omega_b, p.Omega + h, p.w}).energy -
                       solve_ground_state({p.omega_b, p.Omega - h, p.w}).energy) /
                      (2.0 * h);
    c.require(std::fabs(fd - energy_gradient_wrt_Omega(sol)) < 1e-4,
              "envelope derivative mismatch at omega_b=" + num(p.omega_b) +
                  " Omega=" + num(p.Omega) + " w=" + num(p.w));
  }
  return c.result("meanfield/envelope-gradient");
}

inline CheckResult check_meanfield_magnetization_range() {
  CheckContext c;
  for (const auto& p : sample_problems(205, 300, false)) {
    const MeanFieldSolution sol = solve_ground_state(p);
    c.require(sol.magnetization >= -0.5 && sol.magnetization <= 0.5,
              "magnetization out of range");
    c.require(std::fabs(sol.beta) <= 1.0, "beta out of range");
  }
  return c.result("meanfield/magnetization-range");
}

// ---- phases ----------------------------------------------------------

inline bool table_signs_match(PhaseLabel label, const PhasePoint& pt) {
  auto sgn = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
  switch (label) {
    case PhaseLabel::P1:
      return sgn(pt.dE_dOmega) == -1 && sgn(pt.dM_dw) == 1 && sgn(pt.dM_dOmega) == 1;
    case PhaseLabel::P2:
      return sgn(pt.dE_dOmega) == 1 && sgn(pt.dM_dw) == 1 && sgn(pt.dM_dOmega) == -1;
    case PhaseLabel::P3:
      return sgn(pt.dE_dOmega) == -1 && sgn(pt.dM_dw) == -1 && sgn(pt.dM_dOmega) == -1;
    case PhaseLabel::P4:
      return sgn(pt.dE_dOmega) == 1 && sgn(pt.dM_dw) == -1 && sgn(pt.dM_dOmega) == 1;
    default:
      return false;
  }
}

inline bool table_beta_range_ok(PhaseLabel label, double beta) {
  const double r = std::sqrt(0.5);
  switch (label) {
    case PhaseLabel::P1: return beta > 0.0 && beta < r;
    case PhaseLabel::P2: return beta > -r && beta < 0.0;
    case PhaseLabel::P3: return beta > r && beta < 1.0;
    case PhaseLabel::P4: return beta > -1.0 && beta < -r;
    default: return true;
  }
}

inline CheckResult check_phases_table_signs() {
  CheckContext c;
  for (double omega_b : {1.0, -1.0, 0.5, -2.0}) {
    for (double Omega : {0.3, -0.3, 1.2, -1.2}) {
      for (double w : {0.6, 1.0, 2.5}) {
        const MeanFieldProblem p{omega_b, Omega, w};
        const PhasePoint pt = diagnose(p);
        const PhaseLabel expected =
            omega_b > 0 ? (Omega > 0 ? PhaseLabel::P1 : PhaseLabel::P2)
                        : (Omega > 0 ? PhaseLabel::P3 : PhaseLabel::P4);
        c.require(pt.label == expected, "quadrant label mismatch at omega_b=" +
                                            num(omega_b) + " Omega=" + num(Omega));
        c.require(table_signs_match(pt.label, pt),
                  "response signs disagree with the phase table at omega_b=" +
                      num(omega_b) + " Omega=" + num(Omega) + " w=" + num(w));
        c.require(table_beta_range_ok(pt.label, pt.solution.beta),
                  "beta outside the phase range at omega_b=" + num(omega_b) +
                      " Omega=" + num(Omega) + " w=" + num(w));
      }
    }
  }
  return c.result("phases/table-signs");
}

inline CheckResult check_phases_energy_continuity() {
  CheckContext c;
  const double eps = 1e-8;
  for (double omega_b : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
    for (double w : {0.3, 0.8, 1.0, 1.5, 2.5}) {
      const double gap =
          std::fabs(solve_ground_state({omega_b, eps, w}).energy -
                    solve_ground_state({omega_b, -eps, w}).energy);
      c.require(gap <= 1e-8, "energy discontinuous across Omega=0 at omega_b=" +
                                 num(omega_b) + " w=" + num(w) + ": gap=" + num(gap));
    }
  }
  return c.result("phases/energy-continuity");
}

inline CheckResult check_phases_mirror_closed_form() {
  CheckContext c;
  for (double w : {0.5, 1.0, 2.0}) {
    for (int i = 1; i <= 24; ++i) {
      const double omega_b = 0.125 * i;
      const double b2p =
          solve_ground_state({omega_b, 0.0, w}).beta *
          solve_ground_state({omega_b, 0.0, w}).beta;
      const double b2m =
          solve_ground_state({-omega_b, 0.0, w}).beta *
          solve_ground_state({-omega_b, 0.0, w}).beta;
      c.require(std::fabs(b2m - (1.0 - b2p)) < 1e-8,
                "mirror relation beta^2 -> 1 - beta^2 violated at omega_b=" +
                    num(omega_b) + " w=" + num(w));
    }
  }
  return c.result("phases/mirror-closed-form");
}

inline CheckResult check_phases_jump_detection() {
  CheckContext c;
  const JumpReport jump = detect_jump(1.0, 2.0, 1e-8);
  c.require(jump.first_order, "expected a first-order jump at omega_b=1, w=2");
  c.require(std::fabs(jump.delta_beta - 1.0) < 1e-4,
            "delta_beta should be 1, got " + num(jump.delta_beta));
  const JumpReport none = detect_jump(2.0, 1.0, 1e-8);
  c.require(!none.first_order && std::fabs(none.delta_beta) < 1e-6,
            "spurious jump in the normal regime");
  return c.result("phases/jump-detection");
}

// ---- exact diagonalization -------------------------------------------

inline CheckResult check_ed_hermiticity() {
  CheckContext c;
  ModelParams p;
  p.omega_a = 1.0;
  p.omega_b = 0.7;
  p.eta = 0.3;
  p.lambda = 1.1;
  p.Omega = 0.4;
  p.N = 5;
  const auto H = build_hamiltonian(p, 12);
  const Eigen::MatrixXd D(H);
  c.require((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0,
            "Hamiltonian is not exactly symmetric");
  return c.result("ed/hermiticity");
}

inline CheckResult check_ed_block_structure() {
  CheckContext c;
  ModelParams p;
  p.omega_a = 1.0;
  p.omega_b = 1.0;
  p.eta = 0.4;
  p.lambda = 1.3;
  p.Omega = 0.0;
  p.N = 4;
  const int n_max = 10;
  const auto H = build_hamiltonian(p, n_max);
  const EDBasis basis(p.N, n_max);
  for (int outer = 0; outer < H.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, outer); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto [nr, kr] = basis.unindex(static_cast<std::size_t>(it.row()));
      const auto [nc, kc] = basis.unindex(static_cast<std::size_t>(it.col()));
      c.require(nr + kr == nc + kc,
                "coupling across excitation sectors at Omega=0");
    }
  }
  return c.result("ed/block-structure");
}

inline CheckResult check_ed_variational_bound() {
  CheckContext c;
  for (double Omega : {0.0, 0.2, -0.5}) {
    ModelParams p;
    p.omega_a = 1.0;
    p.omega_b = 1.0;
    p.eta = 0.3;
    p.lambda = 1.0;
    p.Omega = Omega;
    p.N = 8;
    const MeanFieldSolution mf = solve_model_ground_state(p);
    const EDResult ed = ground_state(p, suggest_photon_cutoff(p));
    const double bound = coherent_state_energy(p, *mf.alpha, mf.beta);
    c.require(ed.energy_per_atom <= bound + 1e-9,
              "exact energy above the coherent-state bound at Omega=" + num(Omega));
  }
  return c.result("ed/variational-bound");
}

inline CheckResult check_ed_cutoff_monotonicity() {
  CheckContext c;
  ModelParams p;
  p.omega_a = 1.0;
  p.omega_b = 1.0;
  p.eta = 0.3;
  p.lambda = 1.0;
  p.Omega = 0.2;
  p.N = 6;
  double prev = std::numeric_limits<double>::infinity();
  for (int n_max : {2, 4, 8, 16, 32}) {
    const auto H = build_hamiltonian(p, n_max);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(H)};
    const double e0 = es.eigenvalues()(0);
    c.require(e0 <= prev + 1e-12,
              "ground energy increased when the cutoff grew to " +
                  std::to_string(n_max));
    prev = e0;
  }
  return c.result("ed/cutoff-monotonicity");
}

inline CheckResult check_ed_meanfield_gap() {
  CheckContext c;
  ModelParams p;
  p.omega_a = 1.0;
  p.omega_b = 1.0;
  p.eta = 0.3;
  p.lambda = 1.0;
  p.Omega = 0.2;
  p.N = 32;
  const EDResult r = ground_state(p, suggest_photon_cutoff(p));
  c.require(r.converged, "cutoff refinement did not converge at N=32");
  // measured 2.82e-4 on the first oracle run; bound pinned with ~3x slack
  const double gap = std::fabs(r.energy_per_atom - mean_field_energy_per_atom(p));
  c.require(gap < 1e-3, "finite-size gap " + num(gap) + " above the 1e-3 bound");
  return c.result("ed/meanfield-gap-n32");
}

// ---- sweep -----------------------------------------------------------

inline SweepSpec small_sweep_spec() {
  SweepSpec spec;
  spec.mode = SweepMode::sweep2d;
  spec.fixed.omega_b = 1.0;
  spec.axes.push_back({"omega-mw-coupling", -1.0, 1.0, 21});
  spec.axes.push_back({"w", 0.2, 2.0, 19});
  spec.out = "unused.csv";
  return spec;
}

inline CheckResult check_sweep_determinism() {
  CheckContext c;
  const SweepSpec spec = small_sweep_spec();
  c.require(render_csv(spec) == render_csv(spec), "repeated render differs");
  return c.result("sweep/determinism");
}

inline CheckResult check_sweep_parallel_equals_serial() {
  CheckContext c;
  SweepSpec serial = small_sweep_spec();
  serial.jobs = 1;
  SweepSpec parallel = small_sweep_spec();
  parallel.jobs = 4;
  c.require(render_csv(serial) == render_csv(parallel),
            "parallel sweep differs from serial sweep");
  return c.result("sweep/parallel-equals-serial");
}

inline CheckResult check_sweep_drive_free_column() {
  CheckContext c;
  SweepSpec spec;
  spec.mode = SweepMode::sweep1d;
  spec.fixed.Omega = 0.0;
  spec.fixed.w = 1.0;
  spec.axes.push_back({"omega-b", 0.0, 3.0, 61});
  spec.out = "unused.csv";
  std::stringstream csv(render_csv(spec));
  std::string line;
  std::getline(csv, line);  // header
  int row = 0;
  while (std::getline(csv, line)) {
    std::stringstream ls(line);
    std::string field;
    std::getline(ls, field, ',');
    const double omega_b = std::stod(field);
    std::getline(ls, field, ',');
    std::getline(ls, field, ',');
    const double beta2 = std::stod(field);
    const double expected = std::clamp(0.5 * (1.0 - omega_b / 1.0), 0.0, 1.0);
    c.require(std::fabs(beta2 - expected) < 1e-8,
              "drive-free beta^2 column wrong at row " + std::to_string(row));
    ++row;
  }
  c.require(row == 61, "unexpected row count");
  return c.result("sweep/drive-free-closed-form-column");
}

}  // namespace detail

inline ValidationReport run_validate() {
  ValidationReport report;
  report.checks.push_back(detail::check_model_scale_covariance());
  report.checks.push_back(detail::check_model_w_sign_invariance());
  report.checks.push_back(detail::check_model_omega0_atom_count());
  report.checks.push_back(detail::check_meanfield_global_optimality());
  report.checks.push_back(detail::check_meanfield_stationarity());
  report.checks.push_back(detail::check_meanfield_drive_sign_symmetry());
  report.checks.push_back(detail::check_meanfield_drive_free_closed_form());
  report.checks.push_back(detail::check_meanfield_envelope_gradient());
  report.checks.push_back(detail::check_meanfield_magnetization_range());
  report.checks.push_back(detail::check_phases_table_signs());
  report.checks.push_back(detail::check_phases_energy_continuity());
  report.checks.push_back(detail::check_phases_mirror_closed_form());
  report.checks.push_back(detail::check_phases_jump_detection());
  report.checks.push_back(detail::check_ed_hermiticity());
  report.checks.push_back(detail::check_ed_block_structure());
  report.checks.push_back(detail::check_ed_variational_bound());
  report.checks.push_back(detail::check_ed_cutoff_monotonicity());
  report.checks.push_back(detail::check_ed_meanfield_gap());
  report.checks.push_back(detail::check_sweep_determinism());
  report.checks.push_back(detail::check_sweep_parallel_equals_serial());
  report.checks.push_back(detail::check_sweep_drive_free_column());
  return report;
}

inline std::string to_text(const ValidationReport& report) {
  std::string out;
  int passed = 0;
  for (const auto& c : report.checks) {
    out += c.passed ? "PASS " : "FAIL ";
    out += c.name;
    if (!c.passed) out += " | " + c.detail;
    out += '\n';
    if (c.passed) ++passed;
  }
  out += std::to_string(passed) + "/" + std::to_string(report.checks.size()) +
         " checks passed\n";
  return out;
}

inline std::string to_json(const ValidationReport& report) {
  nlohmann::json j;
  j["passed"] = report.all_passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks)
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return j.dump(2) + "\n";
}

}  // namespace jcdicke
