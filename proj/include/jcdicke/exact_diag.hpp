#pragma once

// Finite-N oracle for the driven JC-Dicke model: builds the Hamiltonian
//
//   H = omega_a a^dag a + omega_b J_z + (eta/N) J_z^2
//       + (lambda/sqrt(N)) (a J_+ + a^dag J_-) + Omega (J_+ + J_-)
//
// in the truncated photon (x) collective-spin product basis |n, m> with
// n <= n_max, m = -j..j, j = N/2, and computes the exact ground state. The
// photon cutoff is doubled until the ground energy per atom stops moving,
// which makes the result a controlled check on the mean-field limit.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>
#include <vector>

#include "jcdicke/errors.hpp"
#include "jcdicke/lanczos.hpp"
#include "jcdicke/meanfield.hpp"
#include "jcdicke/model.hpp"

namespace jcdicke {

// Product basis |n, m> with flat index n*(N+1) + (m+j).
struct EDBasis {
  long N = 1;
  int n_max = 0;

  EDBasis(long atoms, int photon_cutoff) : N(atoms), n_max(photon_cutoff) {
    if (n_max < 0) fail(errc::cutoff_error, "photon cutoff must be >= 0");
    if (N < 1) fail(errc::invalid_params, "atom count must be >= 1");
  }

  std::size_t dimension() const {
    return static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(N + 1);
  }
  std::size_t index(int n, int k) const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(N + 1) +
           static_cast<std::size_t>(k);
  }
  std::pair<int, int> unindex(std::size_t idx) const {
    const auto span = static_cast<std::size_t>(N + 1);
    return {static_cast<int>(idx / span), static_cast<int>(idx % span)};
  }
  // m value for spin index k = 0..N; half-integer when N is odd
  double m_of(int k) const { return static_cast<double>(k) - 0.5 * static_cast<double>(N); }
  double j() const { return 0.5 * static_cast<double>(N); }
};

// Raising matrix element <j, m+1| J_+ |j, m>.
inline double spin_raise_element(double j, double m) {
  return std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + 1.0)));
}

// Sparse real symmetric Hamiltonian in the EDBasis ordering.
inline Eigen::SparseMatrix<double> build_hamiltonian(const ModelParams& p,
                                                     int n_max) {
  if (n_max < 0) fail(errc::cutoff_error, "photon cutoff must be >= 0");
  if (p.N < 1) fail(errc::invalid_params, "atom count must be >= 1");
  const EDBasis basis(p.N, n_max);
  const double j = basis.j();
  const double n_atoms = static_cast<double>(p.N);
  const double coupling = p.lambda / std::sqrt(n_atoms);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(basis.dimension() * 3);
  for (int n = 0; n <= n_max; ++n) {
    for (int k = 0; k <= p.N; ++k) {
      const double m = basis.m_of(k);
      const auto col = basis.index(n, k);
      const double diag = p.omega_a * n + p.omega_b * m + p.eta / n_atoms * m * m;
      trip.emplace_back(col, col, diag);
      if (k + 1 <= p.N) {
        const double cp = spin_raise_element(j, m);
        if (n >= 1) {
          // a J_+ : |n, m> -> |n-1, m+1>
          const double v = coupling * std::sqrt(static_cast<double>(n)) * cp;
          const auto row = basis.index(n - 1, k + 1);
          trip.emplace_back(row, col, v);
          trip.emplace_back(col, row, v);
        }
        if (p.Omega != 0.0) {
          // Omega J_+ : |n, m> -> |n, m+1>
          const double v = p.Omega * cp;
          const auto row = basis.index(n, k + 1);
          trip.emplace_back(row, col, v);
          trip.emplace_back(col, row, v);
        }
      }
    }
  }

  Eigen::SparseMatrix<double> H(static_cast<Eigen::Index>(basis.dimension()),
                                static_cast<Eigen::Index>(basis.dimension()));
  H.setFromTriplets(trip.begin(), trip.end());
  H.makeCompressed();
  return H;
}

struct EDOptions {
  std::size_t dim_cap = 20000;
  std::size_t dense_threshold = 1200;  // dense eigensolve below, Lanczos above
  double conv_tol = 1e-9;              // relative move of E0/N between doublings
  double degeneracy_rel = 1e-8;        // gap below this fraction of the width
  int lanczos_max_iter = 500;
  double lanczos_tol = 1e-11;
};

struct EDResult {
  double energy_per_atom = 0.0;
  double jz_per_atom = 0.0;       // <J_z>/N, in [-1/2, 1/2]
  double photons_per_atom = 0.0;  // <a^dag a>/N
  int n_max_used = 0;
  bool converged = false;
  bool ground_degenerate = false;
};

namespace detail {

struct EDSolve {
  double e0 = 0.0;
  double gap = 0.0;
  double width = 0.0;
  Eigen::VectorXd ground;
  bool solver_ok = true;
};

// Product of a photon coherent state (amplitude alpha sqrt(N)) and a spin
// coherent state (polar amplitude beta, relative phase sigma = +-1) in the
// EDBasis ordering. Used as the Lanczos start vector; a good guess collapses
// the iteration count at large cutoffs, where the spectral width would
// otherwise make a random start converge very slowly.
inline Eigen::VectorXd coherent_product_vector(const EDBasis& basis, double z,
                                               double beta, double sigma) {
  const long n_atoms = basis.N;
  std::vector<double> photon(static_cast<std::size_t>(basis.n_max) + 1, 0.0);
  const double z2 = z * z;
  if (std::exp(-0.5 * z2) > 0.0) {
    photon[0] = std::exp(-0.5 * z2);
    for (int n = 1; n <= basis.n_max; ++n)
      photon[n] = photon[n - 1] * z / std::sqrt(static_cast<double>(n));
  } else {
    // displaced too far for the amplitude recurrence: peak at the mean
    const int peak = std::min(basis.n_max, static_cast<int>(std::lround(z2)));
    photon[peak] = 1.0;
  }

  std::vector<double> spin(static_cast<std::size_t>(n_atoms) + 1, 0.0);
  const double c = std::sqrt(std::max(0.0, 1.0 - beta * beta));
  const double base = std::pow(c, static_cast<double>(n_atoms));
  if (c > 0.0 && base > 0.0) {
    spin[0] = base;
    for (long k = 1; k <= n_atoms; ++k)
      spin[k] = spin[k - 1] *
                std::sqrt(static_cast<double>(n_atoms - k + 1) /
                          static_cast<double>(k)) *
                (sigma * beta / c);
  } else {
    spin[n_atoms] = 1.0;  // fully inverted
  }

  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.dimension()));
  for (int n = 0; n <= basis.n_max; ++n)
    for (long k = 0; k <= n_atoms; ++k)
      v[static_cast<Eigen::Index>(basis.index(n, static_cast<int>(k)))] =
          photon[n] * spin[k];
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

inline Eigen::VectorXd coherent_guess(const ModelParams& p, const EDBasis& basis,
                                      const Eigen::SparseMatrix<double>& H) {
  const MeanFieldSolution sol = solve_model_ground_state(p);
  const double z = *sol.alpha * std::sqrt(static_cast<double>(p.N));
  const Eigen::VectorXd plus = coherent_product_vector(basis, z, sol.beta, 1.0);
  const Eigen::VectorXd minus = coherent_product_vector(basis, z, sol.beta, -1.0);
  const double e_plus = plus.dot(H * plus);
  const double e_minus = minus.dot(H * minus);
  return e_plus <= e_minus ? plus : minus;
}

// Upper bound on the largest eigenvalue by Gershgorin discs.
inline double gershgorin_upper(const Eigen::SparseMatrix<double>& H) {
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(H.rows());
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(H.rows());
  for (int outer = 0; outer < H.outerSize(); ++outer) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, outer); it; ++it) {
      if (it.row() == it.col())
        diag[it.row()] = it.value();
      else
        radius[it.row()] += std::fabs(it.value());
    }
  }
  return (diag + radius).maxCoeff();
}

inline EDSolve ed_solve_once(const ModelParams& p, int n_max,
                             const EDOptions& opts,
                             const Eigen::VectorXd* warm_start = nullptr) {
  const Eigen::SparseMatrix<double> H = build_hamiltonian(p, n_max);
  const Eigen::Index dim = H.rows();
  EDSolve out;
  if (static_cast<std::size_t>(dim) <= opts.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(H)};
    out.e0 = es.eigenvalues()(0);
    out.gap = dim > 1 ? es.eigenvalues()(1) - out.e0
                      : std::numeric_limits<double>::infinity();
    out.width = es.eigenvalues()(dim - 1) - out.e0;
    out.ground = es.eigenvectors().col(0);
    out.solver_ok = true;
    return out;
  }

  Eigen::VectorXd v0;
  if (warm_start && warm_start->size() == dim) {
    v0 = *warm_start;
  } else {
    v0 = coherent_guess(p, EDBasis(p.N, n_max), H);
  }
  const LanczosResult lr =
      lanczos_lowest(H, opts.lanczos_max_iter, opts.lanczos_tol, 0x9e3779b9u, &v0);
  out.e0 = lr.e0;
  out.ground = lr.ground;
  out.solver_ok = lr.converged;

  // next eigenvalue from a short deflated probe; width from Gershgorin
  const LanczosResult probe =
      lanczos_lowest(H, std::min<int>(160, static_cast<int>(dim)), 1e-8,
                     0x5bd1e995u, nullptr, &lr.ground);
  out.gap = std::max(0.0, probe.e0 - lr.e0);
  out.width = gershgorin_upper(H) - lr.e0;
  return out;
}

inline void fill_expectations(const EDBasis& basis, const EDSolve& s,
                              EDResult& res) {
  const double n_atoms = static_cast<double>(basis.N);
  double jz = 0.0, photons = 0.0;
  for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
    const auto [n, k] = basis.unindex(idx);
    const double p2 = s.ground[static_cast<Eigen::Index>(idx)] *
                      s.ground[static_cast<Eigen::Index>(idx)];
    jz += p2 * basis.m_of(k);
    photons += p2 * n;
  }
  res.energy_per_atom = s.e0 / n_atoms;
  res.jz_per_atom = jz / n_atoms;
  res.photons_per_atom = photons / n_atoms;
}

}  // namespace detail

// Scaled mean-field energy of the full Hamiltonian. The reduced displacement
// functional omits the constant -lambda^2/(4 omega_a) that appears when the
// photon amplitude is eliminated; finite-N ground energies converge to the
// value with that constant restored.
inline double mean_field_energy_per_atom(const ModelParams& p,
                                         const SolverOptions& opts = {}) {
  const MeanFieldSolution sol = solve_ground_state(make_problem(p), opts);
  return sol.energy - p.lambda * p.lambda / (4.0 * p.omega_a);
}

// Exact per-atom energy expectation of a product of photon and spin coherent
// states with scaled displacements (alpha, beta); an upper bound on the true
// ground energy per atom for every N.
inline double coherent_state_energy(const ModelParams& p, double alpha,
                                    double beta) {
  const double n_atoms = static_cast<double>(p.N);
  const double u = beta * beta - 0.5;
  const double s = detail::root1mb2(beta);
  return p.omega_a * alpha * alpha + p.omega_b * u + p.eta * u * u +
         p.eta / n_atoms * beta * beta * (1.0 - beta * beta) -
         2.0 * (p.lambda * alpha + p.Omega) * beta * s;
}

// Photon cutoff guess from the mean-field displacement: the displaced photon
// occupation concentrates near N alpha^2.
inline int suggest_photon_cutoff(const ModelParams& p) {
  const MeanFieldSolution sol = solve_model_ground_state(p);
  const double x = static_cast<double>(p.N) * (*sol.alpha) * (*sol.alpha);
  return static_cast<int>(std::ceil(4.0 * x + 10.0 * std::sqrt(x + 1.0) + 10.0));
}

// Ground state with automatic cutoff refinement: solve at n_max_start,
// double the cutoff, and accept once E0/N moves by less than conv_tol. If
// doubling would exceed the dimension cap the best available result is
// returned with converged = false.
inline EDResult ground_state(const ModelParams& p, int n_max_start,
                             const EDOptions& opts = {}) {
  if (n_max_start < 0)
    fail(errc::cutoff_error, "starting photon cutoff must be >= 0");
  int n = n_max_start;
  EDBasis basis(p.N, n);
  if (basis.dimension() > opts.dim_cap)
    fail(errc::dimension_cap, "basis dimension exceeds the configured cap");

  detail::EDSolve cur = detail::ed_solve_once(p, n, opts);
  const double n_atoms = static_cast<double>(p.N);
  EDResult res;
  res.n_max_used = n;
  res.converged = false;

  for (;;) {
    const int n_next = std::max(2 * n, n + 8);
    const EDBasis next_basis(p.N, n_next);
    if (next_basis.dimension() > opts.dim_cap) break;
    // the previous ground vector, zero-padded, is an excellent start: the
    // truncated basis is a prefix of the enlarged one
    Eigen::VectorXd warm =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(next_basis.dimension()));
    warm.head(cur.ground.size()) = cur.ground;
    detail::EDSolve nxt = detail::ed_solve_once(p, n_next, opts, &warm);
    const double move = std::fabs(nxt.e0 - cur.e0) / n_atoms;
    const double scale = std::max(1.0, std::fabs(nxt.e0 / n_atoms));
    const bool reliable = cur.solver_ok && nxt.solver_ok;
    n = n_next;
    cur = std::move(nxt);
    res.n_max_used = n;
    if (reliable && move < opts.conv_tol * scale) {
      res.converged = true;
      break;
    }
  }

  detail::fill_expectations(EDBasis(p.N, n), cur, res);
  res.ground_degenerate = cur.gap < opts.degeneracy_rel * std::max(cur.width, 1e-300);
  return res;
}

// Cutoff chosen automatically from the mean-field displacement.
inline EDResult ground_state_auto(const ModelParams& p,
                                  const EDOptions& opts = {}) {
  return ground_state(p, suggest_photon_cutoff(p), opts);
}

struct ConvergenceRow {
  long N = 0;
  double energy_per_atom = 0.0;
  double mean_field_energy = 0.0;
  double gap = 0.0;  // |E_ED/N - E_mf|
  int n_max_used = 0;
  bool converged = false;
};

// Finite-size trend of the exact ground energy against the mean-field value
// at fixed effective parameters.
inline std::vector<ConvergenceRow> convergence_study(
    const ModelParams& base, const std::vector<long>& atom_counts,
    const EDOptions& opts = {}) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(atom_counts.size());
  const double e_mf = mean_field_energy_per_atom(base);
  for (long n_atoms : atom_counts) {
    ModelParams p = base;
    p.N = n_atoms;
    const EDResult r = ground_state(p, suggest_photon_cutoff(p), opts);
    rows.push_back({n_atoms, r.energy_per_atom, e_mf,
                    std::fabs(r.energy_per_atom - e_mf), r.n_max_used,
                    r.converged});
  }
  return rows;
}

// Coordinate-list dump of the matrix: one "row col value" line per stored
// entry, zero-based indices in row-major order, values with 17 significant
// digits. Both triangles are written.
inline void dump_matrix(const Eigen::SparseMatrix<double>& H, std::ostream& os) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(H.nonZeros()));
  for (int outer = 0; outer < H.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, outer); it; ++it)
      entries.emplace_back(it.row(), it.col(), it.value());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
  });
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.value());
    os << e.row() << ' ' << e.col() << ' ' << buf << '\n';
  }
}

}  // namespace jcdicke
