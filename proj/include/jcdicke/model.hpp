#pragma once

// Parameter types for the driven JC-Dicke model of a two-component BEC in a
// cavity, and the algebra that reduces laboratory-level inputs to the five
// effective Hamiltonian parameters. All quantities are dimensionless
// frequencies in a user-chosen reference unit; nothing here attaches units.

#include <cmath>
#include <limits>

#include "jcdicke/errors.hpp"

namespace jcdicke {

// Laboratory-level inputs: couplings, detunings, level energies, collision
// strengths, atom number. Frequencies may carry either sign unless noted.
struct RawPhysicalParams {
  double g13 = 0.0;      // cavity coupling on the |1>-|3> leg
  double Omega23 = 0.0;  // classical-field coupling on the |2>-|3> leg
  double Delta = 0.0;    // single-photon detuning, must dominate both couplings
  double omega_cavity = 0.0;
  double omega_cl = 0.0;  // classical optical field frequency
  double omega_mw = 0.0;  // microwave frequency
  double Omega_mw = 0.0;  // microwave coupling amplitude (real)
  double nu1 = 0.0;       // trap frequency, state |1>
  double nu2 = 0.0;       // trap frequency, state |2>
  double omega1 = 0.0;    // internal level energy, state |1>
  double omega2 = 0.0;    // internal level energy, state |2>
  double eta1 = 0.0;      // intraspecies collision strength, |1>
  double eta2 = 0.0;      // intraspecies collision strength, |2>
  double eta12 = 0.0;     // interspecies collision strength
  long N = 1;             // atom count
};

// The five numbers the effective Hamiltonian
//   H = omega_a a^dag a + omega_b J_z + (eta/N) J_z^2
//       + (lambda/sqrt(N)) (a J_+ + a^dag J_-) + Omega (J_+ + J_-)
// is built from, plus the atom count. omega_a must be positive; lambda is
// taken real and non-negative at the public boundary (a phase on the cavity
// coupling only rotates the photon displacement, leaving beta and all
// energies unchanged).
struct ModelParams {
  double omega_a = 1.0;
  double omega_b = 0.0;
  double eta = 0.0;
  double lambda = 0.0;
  double Omega = 0.0;
  long N = 1;
};

// w = eta + lambda^2 / omega_a, the composite coupling that controls the
// normal-superradiant transition.
struct CompositeCoupling {
  double w = 0.0;
};

namespace detail {

inline bool all_finite(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

// lambda_eff = g13 * Omega23 / Delta, valid only in the large-detuning
// regime Delta >= 10 * max(g13, Omega23).
inline double derive_effective_coupling(double g13, double Omega23, double Delta) {
  if (!detail::all_finite({g13, Omega23, Delta}))
    fail(errc::invalid_params, "non-finite coupling or detuning");
  if (Delta == 0.0) fail(errc::division_by_zero, "Delta = 0");
  if (Delta < 10.0 * std::max(g13, Omega23))
    fail(errc::detuning_too_small, "Delta must be >= 10*max(g13, Omega23)");
  return g13 * Omega23 / Delta;
}

inline void validate(const RawPhysicalParams& raw) {
  if (!detail::all_finite({raw.g13, raw.Omega23, raw.Delta, raw.omega_cavity,
                           raw.omega_cl, raw.omega_mw, raw.Omega_mw, raw.nu1,
                           raw.nu2, raw.omega1, raw.omega2, raw.eta1, raw.eta2,
                           raw.eta12}))
    fail(errc::invalid_params, "non-finite raw parameter");
  if (raw.N < 1) fail(errc::invalid_params, "atom count must be >= 1");
  if (raw.Delta == 0.0) fail(errc::division_by_zero, "Delta = 0");
  if (raw.Delta < 10.0 * std::max(raw.g13, raw.Omega23))
    fail(errc::detuning_too_small, "Delta must be >= 10*max(g13, Omega23)");
}

inline void validate(const ModelParams& p) {
  if (!detail::all_finite({p.omega_a, p.omega_b, p.eta, p.lambda, p.Omega}))
    fail(errc::invalid_params, "non-finite model parameter");
  if (p.N < 1) fail(errc::invalid_params, "atom count must be >= 1");
  if (!(p.omega_a > 0.0))
    fail(errc::non_positive_omega_a, "omega_a must be positive");
  if (p.lambda < 0.0)
    fail(errc::invalid_params,
         "lambda must be >= 0 (a coupling phase is gauge-equivalent)");
}

// Reduces raw inputs to effective parameters:
//   omega_0 = nu2 + omega2 - nu1 - omega1 + (N-1)/2 * (eta2 - eta1)
//   eta     = ((eta1 + eta2)/2 - eta12) * N
//   lambda  = lambda_eff * sqrt(N)
//   omega_a = omega_cavity - omega_mw - omega_cl   (rotating frame)
//   omega_b = omega_0 - omega_mw
inline ModelParams derive_model_params(const RawPhysicalParams& raw) {
  validate(raw);
  const double lambda_eff =
      derive_effective_coupling(raw.g13, raw.Omega23, raw.Delta);
  const double n = static_cast<double>(raw.N);

  ModelParams p;
  p.omega_a = raw.omega_cavity - raw.omega_mw - raw.omega_cl;
  if (!(p.omega_a > 0.0))
    fail(errc::non_positive_omega_a,
         "omega_cavity - omega_mw - omega_cl must be positive");
  const double omega_0 = raw.nu2 + raw.omega2 - raw.nu1 - raw.omega1 +
                         0.5 * (n - 1.0) * (raw.eta2 - raw.eta1);
  p.omega_b = omega_0 - raw.omega_mw;
  p.eta = (0.5 * (raw.eta1 + raw.eta2) - raw.eta12) * n;
  p.lambda = lambda_eff * std::sqrt(n);
  p.Omega = raw.Omega_mw;
  p.N = raw.N;
  return p;
}

inline CompositeCoupling compute_w(const ModelParams& p) {
  return {p.eta + p.lambda * p.lambda / p.omega_a};
}

}  // namespace jcdicke
