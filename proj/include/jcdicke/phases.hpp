#pragma once

// Phase classification and transition detection for the mean-field ground
// state. The (omega_b, Omega) quadrants carry the four phases P1-P4; the
// Omega = 0 line splits into the normal line L0 (beta = 0, w < omega_b), the
// superradiant first-order line L12 (w > omega_b), and the critical point A
// at w = omega_b, with mirrored labels L0', L34, D for omega_b < 0 where the
// drive-free closed form beta^2 = clip((1 - omega_b/w)/2, 0, 1) saturates at
// full inversion. Labels are defined for w > 0 only.

#include <cmath>
#include <limits>
#include <vector>

#include "jcdicke/errors.hpp"
#include "jcdicke/meanfield.hpp"

namespace jcdicke {

enum class PhaseLabel { P1, P2, P3, P4, L0, L12, L0prime, L34, A, D, Unclassified };

inline const char* to_string(PhaseLabel l) {
  switch (l) {
    case PhaseLabel::P1: return "P1";
    case PhaseLabel::P2: return "P2";
    case PhaseLabel::P3: return "P3";
    case PhaseLabel::P4: return "P4";
    case PhaseLabel::L0: return "L0";
    case PhaseLabel::L12: return "L12";
    case PhaseLabel::L0prime: return "L0prime";
    case PhaseLabel::L34: return "L34";
    case PhaseLabel::A: return "A";
    case PhaseLabel::D: return "D";
    case PhaseLabel::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

// A coordinate is "on" a line or point when it sits within this tolerance;
// classification is strict-quadrant otherwise.
inline double default_phase_tolerance(const MeanFieldProblem& p) {
  const double scale =
      std::max({1.0, std::fabs(p.omega_b), std::fabs(p.Omega), std::fabs(p.w)});
  return 1e-9 * scale;
}

inline PhaseLabel classify(const MeanFieldProblem& p, const MeanFieldSolution&,
                           double tol) {
  if (!(p.w > tol)) return PhaseLabel::Unclassified;
  if (std::fabs(p.omega_b) <= tol) return PhaseLabel::Unclassified;
  if (std::fabs(p.Omega) <= tol) {
    const double mag = std::fabs(p.omega_b);
    if (std::fabs(p.w - mag) <= tol)
      return p.omega_b > 0.0 ? PhaseLabel::A : PhaseLabel::D;
    if (p.omega_b > 0.0)
      return p.w < mag ? PhaseLabel::L0 : PhaseLabel::L12;
    return p.w < mag ? PhaseLabel::L0prime : PhaseLabel::L34;
  }
  if (p.omega_b > 0.0)
    return p.Omega > 0.0 ? PhaseLabel::P1 : PhaseLabel::P2;
  return p.Omega > 0.0 ? PhaseLabel::P3 : PhaseLabel::P4;
}

inline PhaseLabel classify(const MeanFieldProblem& p, const MeanFieldSolution& sol) {
  return classify(p, sol, default_phase_tolerance(p));
}

// A solved point with finite-difference response diagnostics. Interior phase
// points must reproduce the characteristic sign pattern of their phase:
//   P1: dE/dOmega < 0, dM/dw > 0, dM/dOmega > 0
//   P2: dE/dOmega > 0, dM/dw > 0, dM/dOmega < 0
//   P3: dE/dOmega < 0, dM/dw < 0, dM/dOmega < 0
//   P4: dE/dOmega > 0, dM/dw < 0, dM/dOmega > 0
struct PhasePoint {
  MeanFieldProblem problem;
  MeanFieldSolution solution;
  PhaseLabel label = PhaseLabel::Unclassified;
  double dM_dOmega = 0.0;
  double dM_dw = 0.0;
  double dE_dOmega = 0.0;
};

namespace detail {

// Central difference, falling back to a one-sided three-point stencil when a
// centered step would cross the non-analytic locus at x = 0.
template <typename F>
double crossing_aware_derivative(F f, double x, double h, bool guard_zero) {
  if (!guard_zero || std::fabs(x) > h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
  }
  const double s = x >= 0.0 ? 1.0 : -1.0;
  return s * (-3.0 * f(x) + 4.0 * f(x + s * h) - f(x + 2.0 * s * h)) / (2.0 * h);
}

}  // namespace detail

inline PhasePoint diagnose(const MeanFieldProblem& p, double step = 1e-5,
                           const SolverOptions& opts = {}) {
  PhasePoint pt;
  pt.problem = p;
  pt.solution = solve_ground_state(p, opts);
  pt.label = classify(p, pt.solution);

  const double h_Omega = step * std::max(1.0, std::fabs(p.Omega));
  const double h_w = step * std::max(1.0, std::fabs(p.w));

  auto e_of_Omega = [&](double Om) {
    return solve_ground_state({p.omega_b, Om, p.w}, opts).energy;
  };
  auto m_of_Omega = [&](double Om) {
    return solve_ground_state({p.omega_b, Om, p.w}, opts).magnetization;
  };
  auto m_of_w = [&](double w) {
    return solve_ground_state({p.omega_b, p.Omega, w}, opts).magnetization;
  };

  pt.dE_dOmega = detail::crossing_aware_derivative(e_of_Omega, p.Omega, h_Omega, true);
  pt.dM_dOmega = detail::crossing_aware_derivative(m_of_Omega, p.Omega, h_Omega, true);
  pt.dM_dw = detail::crossing_aware_derivative(m_of_w, p.w, h_w, true);
  return pt;
}

struct JumpOptions {
  double jump_threshold = 1e-4;  // |delta_beta| above this counts as a jump
  double energy_tol = 1e-8;      // continuity bound on |E(+eps) - E(-eps)|
  SolverOptions solver;
};

// Behavior of the ground state across a sign change of the drive.
struct JumpReport {
  double delta_beta = 0.0;        // beta(+eps) - beta(-eps)
  double delta_dE_dOmega = 0.0;   // |dE/dOmega(+eps) - dE/dOmega(-eps)|
  double energy_gap = 0.0;        // |E(+eps) - E(-eps)|
  bool first_order = false;       // beta jumps while the energy is continuous
};

inline JumpReport detect_jump(double omega_b, double w, double epsilon,
                              const JumpOptions& opts = {}) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    fail(errc::invalid_epsilon, "epsilon must be positive");
  const MeanFieldSolution plus =
      solve_ground_state({omega_b, epsilon, w}, opts.solver);
  const MeanFieldSolution minus =
      solve_ground_state({omega_b, -epsilon, w}, opts.solver);

  JumpReport rep;
  rep.delta_beta = plus.beta - minus.beta;
  rep.energy_gap = std::fabs(plus.energy - minus.energy);
  rep.delta_dE_dOmega = std::fabs(energy_gradient_wrt_Omega(plus) -
                                  energy_gradient_wrt_Omega(minus));
  const double e_scale =
      std::max({1.0, std::fabs(plus.energy), std::fabs(minus.energy)});
  rep.first_order = std::fabs(rep.delta_beta) > opts.jump_threshold &&
                    rep.energy_gap <= opts.energy_tol * e_scale;
  return rep;
}

inline JumpReport detect_jump(double omega_b, double w,
                              const JumpOptions& opts = {}) {
  return detect_jump(omega_b, w,
                     1e-6 * std::max(std::fabs(omega_b), std::fabs(w)), opts);
}

enum class ScanParameter { omega_b, Omega, w };

inline const char* to_string(ScanParameter s) {
  switch (s) {
    case ScanParameter::omega_b: return "omega_b";
    case ScanParameter::Omega: return "Omega";
    case ScanParameter::w: return "w";
  }
  return "?";
}

// A 1D path through parameter space varying exactly one coordinate.
struct ScanPath {
  MeanFieldProblem base;
  ScanParameter parameter = ScanParameter::omega_b;
  double from = 0.0;
  double to = 1.0;
};

struct ScanOptions {
  double beta_jump_threshold = 0.05;
  double d2_jump_threshold = 0.02;
  SolverOptions solver;
};

enum class TransitionOrder { first, second };

struct CriticalPoint {
  double value = 0.0;
  TransitionOrder order = TransitionOrder::second;
};

struct ScanSample {
  double value = 0.0;
  double beta = 0.0;
  double energy = 0.0;
  double d2E = 0.0;  // second finite difference along the path; NaN at ends
};

struct TransitionScan {
  std::vector<ScanSample> samples;
  std::vector<CriticalPoint> critical_points;
};

// Scans the path on a uniform grid, computing the discrete second derivative
// of the optimal energy, and flags transitions: first order where beta jumps
// between adjacent points while the energy stays locally continuous, second
// order where beta is continuous but the second derivative of the energy
// jumps. Detection thresholds are scale-free local outlier tests, so the
// resolution of the result is set by the grid spacing.
inline TransitionScan scan_transition(const ScanPath& path, int n_points,
                                      const ScanOptions& opts = {}) {
  validate(path.base);
  if (n_points < 16) fail(errc::path_error, "need at least 16 scan points");
  if (!std::isfinite(path.from) || !std::isfinite(path.to) ||
      path.from == path.to)
    fail(errc::path_error, "degenerate scan path");

  const int n = n_points;
  TransitionScan scan;
  scan.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    const double s = path.from + (path.to - path.from) * t;
    MeanFieldProblem p = path.base;
    switch (path.parameter) {
      case ScanParameter::omega_b: p.omega_b = s; break;
      case ScanParameter::Omega: p.Omega = s; break;
      case ScanParameter::w: p.w = s; break;
    }
    const MeanFieldSolution sol = solve_ground_state(p, opts.solver);
    scan.samples[i] = {s, sol.beta, sol.energy,
                       std::numeric_limits<double>::quiet_NaN()};
  }

  const double h = (path.to - path.from) / static_cast<double>(n - 1);
  for (int i = 1; i + 1 < n; ++i) {
    scan.samples[i].d2E = (scan.samples[i - 1].energy -
                           2.0 * scan.samples[i].energy +
                           scan.samples[i + 1].energy) /
                          (h * h);
  }

  auto dbeta = [&](int i) {
    return scan.samples[i + 1].beta - scan.samples[i].beta;
  };
  auto denergy = [&](int i) {
    return scan.samples[i + 1].energy - scan.samples[i].energy;
  };

  // first order: beta jump that is an outlier against neighboring steps,
  // with the energy step staying comparable to its neighbors
  std::vector<int> first_order_steps;
  for (int i = 0; i + 1 < n; ++i) {
    const double jump = std::fabs(dbeta(i));
    if (jump <= opts.beta_jump_threshold) continue;
    double neighbor = 0.0;
    if (i > 0) neighbor = std::max(neighbor, std::fabs(dbeta(i - 1)));
    if (i + 2 < n) neighbor = std::max(neighbor, std::fabs(dbeta(i + 1)));
    if (jump <= 5.0 * neighbor) continue;
    double e_neighbor = 0.0;
    if (i > 0) e_neighbor = std::max(e_neighbor, std::fabs(denergy(i - 1)));
    if (i + 2 < n) e_neighbor = std::max(e_neighbor, std::fabs(denergy(i + 1)));
    const double e_tol =
        5.0 * e_neighbor + 1e-12 * std::max(1.0, std::fabs(scan.samples[i].energy));
    if (std::fabs(denergy(i)) > e_tol) continue;
    first_order_steps.push_back(i);
    scan.critical_points.push_back(
        {0.5 * (scan.samples[i].value + scan.samples[i + 1].value),
         TransitionOrder::first});
  }

  // second order: jump in the discrete second derivative away from any
  // first-order step; consecutive flags are merged into one point
  std::vector<int> candidates;
  for (int i = 1; i + 2 < n; ++i) {
    const double dd2 = std::fabs(scan.samples[i + 1].d2E - scan.samples[i].d2E);
    if (dd2 <= opts.d2_jump_threshold) continue;
    bool near_first = false;
    for (int fo : first_order_steps)
      if (std::abs(i - fo) <= 2) near_first = true;
    if (!near_first) candidates.push_back(i);
  }
  for (std::size_t k = 0; k < candidates.size();) {
    std::size_t e = k;
    while (e + 1 < candidates.size() && candidates[e + 1] - candidates[e] <= 2) ++e;
    const double lo = scan.samples[candidates[k]].value;
    const double hi = scan.samples[candidates[e] + 1].value;
    scan.critical_points.push_back({0.5 * (lo + hi), TransitionOrder::second});
    k = e + 1;
  }

  std::sort(scan.critical_points.begin(), scan.critical_points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              return a.value < b.value;
            });
  return scan;
}

}  // namespace jcdicke
