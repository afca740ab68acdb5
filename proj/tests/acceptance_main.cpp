// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Each criterion pins its tolerances and its runtime budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jcdicke/jcdicke.hpp"

namespace {

using namespace jcdicke;

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
  double budget_seconds;
};

bool expect(bool cond, const std::string& what, std::string& why) {
  if (!cond && why.empty()) why = what;
  return cond;
}

// 1. Drive-free second-order transition at omega_b/w = 1: beta follows the
//    closed form on both sides, the energy and its first derivative are
//    continuous, and the second derivative jumps by a finite amount.
bool criterion_second_order(std::string& why) {
  const int n = 1001;
  const double w = 1.0;
  std::vector<double> s(n), beta(n), e(n);
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    s[i] = 0.5 + 1.0 * i / (n - 1);
    const MeanFieldSolution sol = solve_ground_state({s[i], 0.0, w});
    beta[i] = sol.beta;
    e[i] = sol.energy;
    if (s[i] >= 1.0) {
      ok &= expect(std::fabs(beta[i]) < 1e-8,
                   "beta not zero in the normal phase at omega_b=" + std::to_string(s[i]), why);
    } else {
      ok &= expect(std::fabs(beta[i] * beta[i] - 0.5 * (1.0 - s[i])) < 1e-8,
                   "beta^2 closed form violated at omega_b=" + std::to_string(s[i]), why);
    }
  }

  const int k = 500;  // s[k] == 1.0 exactly on this grid
  const double h = 1.0 / (n - 1);
  // second-order one-sided stencils for the left and right limits at the kink
  const double e_left = 3.0 * e[k - 1] - 3.0 * e[k - 2] + e[k - 3];
  const double e_right = 3.0 * e[k + 1] - 3.0 * e[k + 2] + e[k + 3];
  ok &= expect(std::fabs(e_left - e_right) < 1e-6, "energy discontinuous at the critical point", why);
  const double d_left = (3.0 * e[k] - 4.0 * e[k - 1] + e[k - 2]) / (2.0 * h);
  const double d_right = (-3.0 * e[k] + 4.0 * e[k + 1] - e[k + 2]) / (2.0 * h);
  ok &= expect(std::fabs(d_left - d_right) < 1e-6, "first derivative discontinuous at the critical point", why);

  auto d2_at = [&](int i) { return (e[i - 1] - 2.0 * e[i] + e[i + 1]) / (h * h); };
  const double jump = std::fabs(d2_at(k + 5) - d2_at(k - 5));
  ok &= expect(jump > 0.1, "second derivative jump too small: " + std::to_string(jump), why);

  // the scanner sees the same single second-order point
  ScanPath path{{0.0, 0.0, w}, ScanParameter::omega_b, 0.5, 1.5};
  const TransitionScan scan = scan_transition(path, n);
  ok &= expect(scan.critical_points.size() == 1, "expected exactly one critical point", why);
  if (!scan.critical_points.empty()) {
    ok &= expect(scan.critical_points[0].order == TransitionOrder::second,
                 "critical point is not second order", why);
    ok &= expect(std::fabs(scan.critical_points[0].value - 1.0) <= 2.0 * h,
                 "critical point not at omega_b/w = 1", why);
  }
  return ok;
}

// 2. First-order jump across the drive sign change for w > omega_b, absent
//    for w < omega_b.
bool criterion_first_order(std::string& why) {
  bool ok = true;
  const JumpReport jump = detect_jump(1.0, 2.0, 1e-8);
  ok &= expect(std::fabs(jump.delta_beta - 1.0) < 1e-4,
               "delta_beta != 1: " + std::to_string(jump.delta_beta), why);
  ok &= expect(jump.energy_gap < 1e-8,
               "energy gap too large: " + std::to_string(jump.energy_gap), why);
  ok &= expect(std::fabs(jump.delta_dE_dOmega - std::sqrt(3.0)) < 1e-3,
               "dE/dOmega gap != sqrt(3): " + std::to_string(jump.delta_dE_dOmega), why);
  ok &= expect(jump.first_order, "jump not flagged first order", why);

  const JumpReport none = detect_jump(2.0, 1.0, 1e-8);
  ok &= expect(std::fabs(none.delta_beta) < 1e-6,
               "spurious jump in the normal regime: " + std::to_string(none.delta_beta), why);
  ok &= expect(!none.first_order, "normal regime flagged first order", why);
  return ok;
}

// 3. Sign table at one interior point of each phase, w = 1.
bool criterion_sign_table(std::string& why) {
  struct Row {
    double omega_b, Omega;
    PhaseLabel label;
    int sE, sMw, sMo;
    double beta_lo, beta_hi, m_lo, m_hi;
  };
  const double r = std::sqrt(0.5);
  const Row rows[] = {
      {1.0, 0.3, PhaseLabel::P1, -1, 1, 1, 0.0, r, -0.5, 0.0},
      {1.0, -0.3, PhaseLabel::P2, 1, 1, -1, -r, 0.0, -0.5, 0.0},
      {-1.0, 0.3, PhaseLabel::P3, -1, -1, -1, r, 1.0, 0.0, 0.5},
      {-1.0, -0.3, PhaseLabel::P4, 1, -1, 1, -1.0, -r, 0.0, 0.5},
  };
  bool ok = true;
  for (const Row& row : rows) {
    const PhasePoint pt = diagnose({row.omega_b, row.Omega, 1.0}, 1e-5);
    const std::string at = " at (" + std::to_string(row.omega_b) + ", " +
                           std::to_string(row.Omega) + ")";
    ok &= expect(pt.label == row.label, "wrong phase label" + at, why);
    ok &= expect(pt.solution.beta > row.beta_lo && pt.solution.beta < row.beta_hi,
                 "beta outside the phase range" + at, why);
    ok &= expect(pt.solution.magnetization > row.m_lo &&
                     pt.solution.magnetization < row.m_hi,
                 "magnetization outside the phase range" + at, why);
    ok &= expect(pt.dE_dOmega * row.sE > 0.0, "dE/dOmega sign wrong" + at, why);
    ok &= expect(pt.dM_dw * row.sMw > 0.0, "dM/dw sign wrong" + at, why);
    ok &= expect(pt.dM_dOmega * row.sMo > 0.0, "dM/dOmega sign wrong" + at, why);
  }
  return ok;
}

// 4. Drive sign symmetry on 10^3 random parameter triples.
bool criterion_symmetry(std::string& why) {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> ub(-3.0, 3.0);
  std::uniform_real_distribution<double> uo(-2.0, 2.0);
  std::uniform_real_distribution<double> uw(0.0, 3.0);
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    const double omega_b = ub(rng);
    double Omega = uo(rng);
    while (Omega == 0.0) Omega = uo(rng);
    double w = uw(rng);
    while (w == 0.0) w = uw(rng);
    const MeanFieldSolution plus = solve_ground_state({omega_b, Omega, w});
    const MeanFieldSolution minus = solve_ground_state({omega_b, -Omega, w});
    ok &= expect(std::fabs(minus.beta + plus.beta) <= 1e-8 * (1.0 + std::fabs(plus.beta)),
                 "beta did not flip at trial " + std::to_string(i), why);
    ok &= expect(std::fabs(minus.energy - plus.energy) <=
                     1e-12 * std::max(1.0, std::fabs(plus.energy)),
                 "energy not symmetric at trial " + std::to_string(i), why);
    if (!ok) break;
  }
  return ok;
}

// 5. Exact-diagonalization oracle approaches the mean-field energy as N
//    grows, with auto-converged photon cutoffs.
bool criterion_ed_convergence(std::string& why) {
  ModelParams p;
  p.omega_a = 1.0;
  p.omega_b = 1.0;
  p.eta = 0.3;
  p.lambda = 1.0;
  p.Omega = 0.2;
  const auto rows = convergence_study(p, {4, 8, 16, 32});
  bool ok = expect(rows.size() == 4, "study did not produce four rows", why);
  for (const auto& row : rows)
    ok &= expect(row.converged,
                 "cutoff not converged at N=" + std::to_string(row.N), why);
  for (std::size_t i = 1; i < rows.size(); ++i)
    ok &= expect(rows[i].gap < rows[i - 1].gap,
                 "gap not strictly decreasing at N=" + std::to_string(rows[i].N), why);
  if (rows.size() == 4)
    ok &= expect(rows[3].gap < rows[0].gap / 4.0,
                 "gap(32) not below gap(4)/4: " + std::to_string(rows[3].gap) +
                     " vs " + std::to_string(rows[0].gap), why);
  return ok;
}

// 6. Exactness anchors of the decoupled limit and the drive-free block
//    structure.
bool criterion_ed_anchors(std::string& why) {
  bool ok = true;
  ModelParams p;
  p.omega_a = 1.0;
  p.omega_b = 1.0;
  p.eta = 0.3;
  p.lambda = 0.0;
  p.Omega = 0.0;
  p.N = 6;
  const EDResult res = ground_state(p, 4);
  ok &= expect(std::fabs(res.energy_per_atom - (-0.5 + 0.3 / 4.0)) < 1e-10,
               "decoupled energy anchor missed: " + std::to_string(res.energy_per_atom), why);
  ok &= expect(std::fabs(res.jz_per_atom + 0.5) < 1e-10,
               "decoupled <J_z>/N is not -1/2", why);

  ModelParams q;
  q.omega_a = 1.0;
  q.omega_b = 1.0;
  q.eta = 0.4;
  q.lambda = 1.3;
  q.Omega = 0.0;
  q.N = 4;
  const int n_max = 10;
  const auto H = build_hamiltonian(q, n_max);
  const EDBasis basis(q.N, n_max);
  for (int outer = 0; outer < H.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, outer); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto [nr, kr] = basis.unindex(static_cast<std::size_t>(it.row()));
      const auto [nc, kc] = basis.unindex(static_cast<std::size_t>(it.col()));
      ok &= expect(nr + kr == nc + kc, "coupling across excitation sectors", why);
    }
  }
  return ok;
}

// 7. Sweep determinism: a 201x201 phase-diagram sweep renders byte-identical
//    CSV for 1 and 8 workers.
bool criterion_determinism(std::string& why) {
  SweepSpec spec;
  spec.mode = SweepMode::sweep2d;
  spec.fixed.omega_b = 1.0;
  spec.axes.push_back({"omega-mw-coupling", -2.0, 2.0, 201});
  spec.axes.push_back({"w", 0.1, 3.0, 201});
  spec.out = "unused.csv";
  spec.jobs = 1;
  const std::string serial = render_csv(spec);
  spec.jobs = 8;
  const std::string parallel = render_csv(spec);
  bool ok = expect(serial == parallel, "worker count changed the CSV bytes", why);
  ok &= expect(serial == render_csv(spec), "repeated render differs", why);
  ok &= expect(serial.size() > 201u * 201u * 10u, "CSV suspiciously small", why);
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"criterion-1-second-order-transition", criterion_second_order, 2.0},
      {"criterion-2-first-order-jump", criterion_first_order, 1.0},
      {"criterion-3-phase-sign-table", criterion_sign_table, 1.0},
      {"criterion-4-drive-sign-symmetry", criterion_symmetry, 5.0},
      {"criterion-5-ed-convergence", criterion_ed_convergence, 60.0},
      {"criterion-6-ed-anchors", criterion_ed_anchors, 10.0},
      {"criterion-7-sweep-determinism", criterion_determinism, 30.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string why;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criterion.run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > criterion.budget_seconds) {
      ok = false;
      if (why.empty())
        why = "runtime " + std::to_string(elapsed) + "s exceeds budget " +
              std::to_string(criterion.budget_seconds) + "s";
    }
    std::printf("%s %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL",
                criterion.name.c_str(), elapsed, why.empty() ? "" : " | ",
                why.c_str());
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
