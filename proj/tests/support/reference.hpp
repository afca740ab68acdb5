#pragma once

// Independent reference implementations used only by tests. Everything here
// is written directly from the operator and energy definitions and shares no
// code with the library paths it checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace testref {

// Scaled mean-field energy, restated locally.
inline double scaled_energy(double beta, double omega_b, double Omega, double w) {
  const double b2 = beta * beta;
  const double s = std::sqrt(std::max(0.0, 1.0 - b2));
  return omega_b * (b2 - 0.5) - 2.0 * Omega * beta * s + (b2 - 0.5) * (b2 - 0.5) * w;
}

struct BruteResult {
  double beta = 0.0;
  double energy = 0.0;
};

// Exhaustive scan of the energy on a 10^6-point grid, then refinement of the
// bracketing cell: the interval is repeatedly cut down by energy comparisons
// and the result polished with one parabolic fit. Derivative-free; shares
// nothing with the solver's analytic residual.
inline BruteResult brute_force_minimize(double omega_b, double Omega, double w,
                                        long grid = 1000000) {
  double best_beta = -1.0;
  double best_e = scaled_energy(-1.0, omega_b, Omega, w);
  for (long i = 1; i <= grid; ++i) {
    const double beta = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid);
    const double e = scaled_energy(beta, omega_b, Omega, w);
    if (e < best_e) {
      best_e = e;
      best_beta = beta;
    }
  }

  const double cell = 2.0 / static_cast<double>(grid);
  double lo = std::max(-1.0, best_beta - cell);
  double hi = std::min(1.0, best_beta + cell);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (scaled_energy(m1, omega_b, Omega, w) < scaled_energy(m2, omega_b, Omega, w))
      hi = m2;
    else
      lo = m1;
  }
  double beta = 0.5 * (lo + hi);

  // parabolic vertex through three interior points, when they fit in [-1, 1]
  const double h = 1e-5;
  if (beta - h > -1.0 && beta + h < 1.0) {
    const double fm = scaled_energy(beta - h, omega_b, Omega, w);
    const double f0 = scaled_energy(beta, omega_b, Omega, w);
    const double fp = scaled_energy(beta + h, omega_b, Omega, w);
    const double denom = fp - 2.0 * f0 + fm;
    if (denom > 0.0) {
      const double vertex = beta - 0.5 * h * (fp - fm) / denom;
      if (scaled_energy(vertex, omega_b, Omega, w) <= f0) beta = vertex;
    }
  }
  return {beta, scaled_energy(beta, omega_b, Omega, w)};
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index k = 0; k < A.cols(); ++k)
      out.block(i * B.rows(), k * B.cols(), B.rows(), B.cols()) = A(i, k) * B;
  return out;
}

// Dense Hamiltonian assembled from explicit operator matrices and Kronecker
// products; a second construction route for comparing matrix elements.
inline Eigen::MatrixXd reference_hamiltonian(double omega_a, double omega_b,
                                             double eta, double lambda,
                                             double Omega, long N, int n_max) {
  const int P = n_max + 1;
  const int S = static_cast<int>(N) + 1;
  const double j = 0.5 * static_cast<double>(N);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(P, P);
  for (int n = 1; n < P; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));

  Eigen::MatrixXd jplus = Eigen::MatrixXd::Zero(S, S);
  Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(S, S);
  for (int k = 0; k < S; ++k) {
    const double m = static_cast<double>(k) - j;
    jz(k, k) = m;
    if (k + 1 < S) jplus(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }

  const Eigen::MatrixXd idP = Eigen::MatrixXd::Identity(P, P);
  const Eigen::MatrixXd idS = Eigen::MatrixXd::Identity(S, S);
  const Eigen::MatrixXd coupling = kron(a, jplus);

  Eigen::MatrixXd H =
      omega_a * kron(a.transpose() * a, idS) + omega_b * kron(idP, jz) +
      (eta / static_cast<double>(N)) * kron(idP, jz * jz) +
      (lambda / std::sqrt(static_cast<double>(N))) *
          (coupling + coupling.transpose()) +
      Omega * (kron(idP, jplus) + kron(idP, jplus).transpose());
  return H;
}

}  // namespace testref
