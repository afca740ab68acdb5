#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "jcdicke/meanfield.hpp"
#include "support/reference.hpp"

using namespace jcdicke;

namespace {

std::vector<MeanFieldProblem> random_problems(unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ub(-3.0, 3.0);
  std::uniform_real_distribution<double> uo(-2.0, 2.0);
  std::uniform_real_distribution<double> uw(-1.0, 3.0);
  std::vector<MeanFieldProblem> out;
  for (int i = 0; i < count; ++i) out.push_back({ub(rng), uo(rng), uw(rng)});
  return out;
}

}  // namespace

TEST_CASE("scaled energy evaluation") {
  CHECK(energy(0.0, {1.0, 0.0, 1.0}) == Approx(-0.25).margin(1e-15));
  CHECK(energy(1.0, {1.0, 5.0, 1.0}) == Approx(0.75).margin(1e-15));
  // beta^2 - 1/2 = 0 kills the omega_b and w terms
  CHECK(energy(std::sqrt(2.0) / 2.0, {7.0, 1.0, -3.0}) ==
        Approx(-1.0).margin(1e-12));

  CHECK_THROWS_MATCHES(energy(1.0000001, {1.0, 0.0, 1.0}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == errc::domain_error;
                       }));
  CHECK_THROWS_AS(energy(-1.5, {1.0, 0.0, 1.0}), Error);
}

TEST_CASE("stationarity residual") {
  CHECK(stationarity_residual(0.0, {3.0, 0.0, -2.0}) == 0.0);
  CHECK(stationarity_residual(0.5, {1.0, 0.0, 2.0}) == Approx(0.0).margin(1e-15));
  CHECK(stationarity_residual(1.0, {4.0, 0.3, -1.0}) == Approx(0.3).margin(1e-15));
  CHECK_THROWS_AS(stationarity_residual(1.1, {1.0, 0.0, 1.0}), Error);
}

TEST_CASE("residual equals (1/2) sqrt(1-beta^2) dE/dbeta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ubeta(-0.95, 0.95);
  const double h = 1e-6;
  for (const auto& p : random_problems(12, 25)) {
    const double beta = ubeta(rng);
    const double dE = (energy(beta + h, p) - energy(beta - h, p)) / (2.0 * h);
    const double expected = 0.5 * std::sqrt(1.0 - beta * beta) * dE;
    CHECK(stationarity_residual(beta, p) == Approx(expected).margin(5e-8));
  }
}

TEST_CASE("residual derivative used by the Newton polish matches differences") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ubeta(-0.9, 0.9);
  const double h = 1e-6;
  for (const auto& p : random_problems(14, 25)) {
    const double beta = ubeta(rng);
    const double fd =
        (stationarity_residual(beta + h, p) - stationarity_residual(beta - h, p)) /
        (2.0 * h);
    CHECK(detail::residual_derivative(beta, p) == Approx(fd).margin(5e-7));
  }
}

TEST_CASE("normal phase ground state") {
  const MeanFieldSolution sol = solve_ground_state({2.0, 0.0, 1.0});
  CHECK(std::fabs(sol.beta) < 1e-10);
  CHECK(sol.energy == Approx(-0.75).margin(1e-12));
  CHECK(sol.magnetization == Approx(-0.5).margin(1e-10));
  CHECK_FALSE(sol.degenerate);
  CHECK_FALSE(sol.boundary);
}

TEST_CASE("drive-free superradiant ground state has the closed form") {
  const MeanFieldSolution sol = solve_ground_state({1.0, 0.0, 2.0});
  CHECK(sol.beta == Approx(0.5).margin(1e-9));  // beta^2 = (1 - omega_b/w)/2
  CHECK(sol.energy == Approx(-0.125).margin(1e-12));
  CHECK(sol.degenerate);  // +-beta tie, positive branch returned
  CHECK(sol.beta >= 0.0);
}

TEST_CASE("weak drive moves the minimizer off the symmetric branch") {
  // frozen from the brute-force oracle (1e6-point scan + bracket refinement)
  const double beta_ref = 0.524567574084838;
  const double energy_ref = -0.213052922297005;

  const MeanFieldSolution sol = solve_ground_state({1.0, 0.1, 2.0});
  CHECK(sol.beta > 0.5);
  CHECK(sol.beta < 1.0);
  CHECK_FALSE(sol.degenerate);
  CHECK(sol.beta == Approx(beta_ref).margin(1e-9));
  CHECK(sol.energy == Approx(energy_ref).margin(1e-12));

  // the oracle itself agrees, recomputed live
  const testref::BruteResult ref = testref::brute_force_minimize(1.0, 0.1, 2.0);
  CHECK(sol.beta == Approx(ref.beta).margin(1e-8));
  CHECK(sol.energy == Approx(ref.energy).margin(1e-12));

  // drive sign flip mirrors the solution
  const MeanFieldSolution neg = solve_ground_state({1.0, -0.1, 2.0});
  CHECK(neg.beta == Approx(-sol.beta).margin(1e-10));
  CHECK(neg.energy == Approx(sol.energy).margin(1e-14));
}

TEST_CASE("fully inverted boundary solution") {
  const MeanFieldSolution sol = solve_ground_state({-2.0, 0.0, 1.0});
  CHECK(sol.beta == 1.0);  // ties broken toward the positive branch
  CHECK(sol.boundary);
  CHECK(sol.degenerate);
  CHECK(sol.energy == Approx(-0.75).margin(1e-12));
  CHECK(sol.magnetization == Approx(0.5).margin(1e-12));
}

TEST_CASE("solver matches the brute-force oracle on random problems") {
  for (const auto& p : random_problems(15, 40)) {
    const MeanFieldSolution sol = solve_ground_state(p);
    const testref::BruteResult ref =
        testref::brute_force_minimize(p.omega_b, p.Omega, p.w, 200000);
    // energies must agree tightly; beta may legitimately differ by a sign
    // at drive-free degeneracy, so compare |beta|
    CHECK(sol.energy == Approx(ref.energy).margin(1e-9));
    CHECK(std::fabs(sol.beta) ==
          Approx(std::fabs(ref.beta)).margin(2e-5));
  }
}

TEST_CASE("global optimality against a dense audit grid") {
  for (const auto& p : random_problems(16, 60)) {
    const MeanFieldSolution sol = solve_ground_state(p);
    const double slack = 1e-10 * std::max(1.0, std::fabs(sol.energy));
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      const double beta = -1.0 + 2.0 * i / 10000.0;
      worst = std::max(worst, sol.energy - energy(beta, p));
    }
    CHECK(worst <= slack);
  }
}

TEST_CASE("stationarity holds at interior optima") {
  for (const auto& p : random_problems(17, 200)) {
    const MeanFieldSolution sol = solve_ground_state(p);
    if (std::fabs(sol.beta) >= 1.0 - 1e-6) continue;
    const double bound =
        1e-8 * (std::fabs(p.omega_b) + std::fabs(p.Omega) + std::fabs(p.w) + 1.0);
    CHECK(sol.residual <= bound);
  }
}

TEST_CASE("drive sign symmetry") {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> ub(-3.0, 3.0);
  std::uniform_real_distribution<double> uo(0.01, 2.0);
  std::uniform_real_distribution<double> uw(0.01, 3.0);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double omega_b = ub(rng);
    const double Omega = (sign(rng) ? 1.0 : -1.0) * uo(rng);
    const double w = uw(rng);
    const MeanFieldSolution a = solve_ground_state({omega_b, Omega, w});
    const MeanFieldSolution b = solve_ground_state({omega_b, -Omega, w});
    CHECK(b.beta == Approx(-a.beta).margin(1e-8));
    CHECK(b.energy == Approx(a.energy).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("drive-free closed forms across the transition") {
  for (double w : {0.5, 1.0, 2.0}) {
    for (int i = 0; i <= 40; ++i) {
      const double omega_b = -2.0 + 4.0 * i / 40.0;
      const MeanFieldSolution sol = solve_ground_state({omega_b, 0.0, w});
      const double b2 = std::clamp(0.5 * (1.0 - omega_b / w), 0.0, 1.0);
      CHECK(sol.beta * sol.beta == Approx(b2).margin(1e-8));
      const double u = b2 - 0.5;
      CHECK(sol.energy == Approx(omega_b * u + w * u * u).margin(1e-10));
    }
  }
}

TEST_CASE("envelope derivative of the optimal energy") {
  CHECK(energy_gradient_wrt_Omega({0.0, {}, 0, 0, 0, false, false}) == 0.0);
  MeanFieldSolution s;
  s.beta = std::sqrt(2.0) / 2.0;
  CHECK(energy_gradient_wrt_Omega(s) == Approx(-1.0).margin(1e-12));
  s.beta = 0.5;
  CHECK(energy_gradient_wrt_Omega(s) ==
        Approx(-std::sqrt(3.0) / 2.0).margin(1e-12));

  // central finite differences at non-degenerate points
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ub(-2.0, 2.0);
  std::uniform_real_distribution<double> uo(0.05, 2.0);
  std::uniform_real_distribution<double> uw(0.1, 3.0);
  const double h = 1e-5;
  for (int i = 0; i < 40; ++i) {
    const MeanFieldProblem p{ub(rng), uo(rng), uw(rng)};
    const MeanFieldSolution sol = solve_ground_state(p);
    if (sol.degenerate) continue;
    const double fd = (solve_ground_state({p.omega_b, p.Omega + h, p.w}).energy -
                       solve_ground_state({p.omega_b, p.Omega - h, p.w}).energy) /
                      (2.0 * h);
    CHECK(energy_gradient_wrt_Omega(sol) == Approx(fd).margin(1e-4));
  }
}

TEST_CASE("magnetization stays in range and beta in the domain") {
  for (const auto& p : random_problems(20, 150)) {
    const MeanFieldSolution sol = solve_ground_state(p);
    CHECK(sol.magnetization >= -0.5);
    CHECK(sol.magnetization <= 0.5);
    CHECK(std::fabs(sol.beta) <= 1.0);
    CHECK(sol.magnetization == Approx(sol.beta * sol.beta - 0.5).margin(1e-15));
  }
}

TEST_CASE("photon displacement from the full parameter set") {
  ModelParams mp;
  mp.omega_a = 2.0;
  mp.omega_b = 1.0;
  mp.eta = 0.0;
  mp.lambda = 1.5;
  mp.Omega = 0.2;
  const MeanFieldSolution sol = solve_model_ground_state(mp);
  REQUIRE(sol.alpha.has_value());
  CHECK(*sol.alpha == Approx(mp.lambda / mp.omega_a * sol.beta *
                             std::sqrt(1.0 - sol.beta * sol.beta))
                          .margin(1e-14));
  // reduced problem alone cannot supply alpha
  CHECK_FALSE(solve_ground_state(make_problem(mp)).alpha.has_value());
}

TEST_CASE("non-finite problems are rejected") {
  CHECK_THROWS_AS(
      solve_ground_state({std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0}),
      Error);
  CHECK_THROWS_AS(
      solve_ground_state({0.0, std::numeric_limits<double>::infinity(), 1.0}),
      Error);
}
