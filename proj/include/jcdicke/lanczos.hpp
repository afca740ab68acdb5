#pragma once

// Lanczos iteration with full reorthogonalization for the lowest eigenpair
// of a large sparse symmetric matrix. The Krylov basis is kept so the Ritz
// vector can be assembled and so reorthogonalization stays numerically
// honest; for the matrix sizes this project reaches (a few times 10^4) the
// storage is trivial.
//
// The spectral width of these Hamiltonians grows with the photon cutoff
// while the gap does not, which makes a random start vector converge slowly
// at large cutoffs. Callers therefore pass a physically motivated start
// vector (a coherent-state guess, or the previous cutoff's ground state) and
// the iteration only has to polish it. An optional deflation vector projects
// out an already-known eigenvector so the next eigenvalue can be probed.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace jcdicke {

struct LanczosResult {
  double e0 = 0.0;  // lowest Ritz value
  Eigen::VectorXd ground;
  bool converged = false;
  int iterations = 0;
};

inline LanczosResult lanczos_lowest(const Eigen::SparseMatrix<double>& A,
                                    int max_iter = 800, double tol = 1e-11,
                                    unsigned seed = 0x9e3779b9u,
                                    const Eigen::VectorXd* start = nullptr,
                                    const Eigen::VectorXd* deflate = nullptr) {
  const Eigen::Index dim = A.rows();
  LanczosResult out;
  if (dim == 1) {
    out.e0 = A.coeff(0, 0);
    out.ground = Eigen::VectorXd::Ones(1);
    out.converged = true;
    out.iterations = 1;
    return out;
  }

  const int m_max = static_cast<int>(std::min<Eigen::Index>(max_iter, dim));
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(64);

  auto project_out = [&](Eigen::VectorXd& v) {
    if (deflate) v -= deflate->dot(v) * (*deflate);
  };

  Eigen::VectorXd v;
  if (start && start->size() == dim && start->norm() > 0.0) {
    v = *start;
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    v.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
  }
  project_out(v);
  if (v.norm() == 0.0) v = Eigen::VectorXd::Unit(dim, 0);
  v.normalize();
  basis.push_back(v);

  std::vector<double> alpha, beta;

  auto tridiagonal = [&](int m) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    return T;
  };

  auto finish = [&](bool converged) {
    const int m = static_cast<int>(alpha.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(m));
    out.e0 = es.eigenvalues()(0);
    out.ground = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < m; ++i)
      out.ground += es.eigenvectors()(i, 0) * basis[i];
    out.ground.normalize();
    out.converged = converged;
    out.iterations = m;
    return out;
  };

  for (int j = 0; j < m_max; ++j) {
    Eigen::VectorXd w = A * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    const double a = basis[j].dot(w);
    alpha.push_back(a);
    w -= a * basis[j];
    project_out(w);
    // two-pass reorthogonalization against the whole basis
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) w -= u.dot(w) * u;
    const double b = w.norm();

    const int m = static_cast<int>(alpha.size());
    const bool invariant = b < 1e-13 * std::max(1.0, std::fabs(a));
    if (invariant || static_cast<Eigen::Index>(m) == dim) return finish(true);
    if (m == m_max) break;

    if (m >= 2 && m % 5 == 0) {
      // Paige residual bound for the lowest Ritz pair: |b * s_last|
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(m));
      const double resid = b * std::fabs(es.eigenvectors()(m - 1, 0));
      if (resid <= tol * std::max(1.0, std::fabs(es.eigenvalues()(0))))
        return finish(true);
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return finish(false);
}

}  // namespace jcdicke
