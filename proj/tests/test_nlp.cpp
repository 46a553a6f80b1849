#include <doctest.h>

#include <cmath>
#include <cstring>

#include "orcon/bench.hpp"
#include "orcon/errors.hpp"
#include "orcon/nlp.hpp"
#include "orcon/reformulate.hpp"
#include "regression_problems.hpp"

using namespace orcon;

TEST_CASE("unconstrained quadratic from a distant start") {
  NlpSpec spec;
  spec.n = 1;
  spec.name = "1d";
  spec.objective = {1,
                    [](const Eigen::VectorXd& x) { return (x[0] - 1) * (x[0] - 1); },
                    [](const Eigen::VectorXd& x) {
                      return Eigen::VectorXd{{2 * (x[0] - 1)}};
                    }};
  const NlpSolution sol = solve_nlp(spec, Eigen::VectorXd{{5.0}}, 1e-6);
  CHECK(sol.status == NlpStatus::Converged);
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.kktResidual <= 1e-6);
}

TEST_CASE("linear objective over the unit disk") {
  const auto suite = test::convex_regression_suite();
  const auto& circle = suite[2];
  const NlpSolution sol = solve_nlp(circle.spec, circle.start, 1e-8);
  CHECK(sol.status == NlpStatus::Converged);
  const double r = std::sqrt(2.0) / 2;
  CHECK(sol.x[0] == doctest::Approx(-r).epsilon(1e-6));
  CHECK(sol.x[1] == doctest::Approx(-r).epsilon(1e-6));
}

TEST_CASE("relaxed toy subproblem: symmetric KKT point identity and solve") {
  // P(phi_fb^t) for the relaxation example at t = 0.01. The point
  // (sqrt t, sqrt t) is a KKT point with multiplier 2(1 - sqrt t) = 1.8;
  // f strictly decreases along the active boundary away from it, so a
  // descent solver slides to a better KKT point instead of stopping there.
  const MpocProblem p = bench::example51();
  const NlpSpec spec = direct_relax(p, DirectVariant::Fb, 0.01);

  const Eigen::VectorXd xSym{{0.1, 0.1}};
  const Eigen::VectorXd xiSym{{1.8}};
  CHECK(kkt_residual(spec, xSym, xiSym, Eigen::VectorXd(0)) <= 1e-10);

  const NlpSolution off = solve_nlp(spec, Eigen::VectorXd{{0.11, 0.09}}, 1e-8);
  CHECK(off.status == NlpStatus::Converged);
  CHECK(off.kktResidual <= 1e-8);
  CHECK(off.fValue <= p.f.value(xSym) + 1e-10);
}

TEST_CASE("kkt_residual closed forms") {
  const auto suite = test::convex_regression_suite();
  const auto& circle = suite[2];

  const double r = std::sqrt(2.0) / 2;
  const Eigen::VectorXd xStar{{-r, -r}};
  const Eigen::VectorXd lamStar{{1 / std::sqrt(2.0)}};
  CHECK(kkt_residual(circle.spec, xStar, lamStar, Eigen::VectorXd(0)) <= 1e-12);

  // A negative multiplier is penalized by at least its magnitude.
  const Eigen::VectorXd lamBad{{-0.25}};
  CHECK(kkt_residual(circle.spec, xStar, lamBad, Eigen::VectorXd(0)) >= 0.25);

  // Zero multipliers at an unconstrained stationary point.
  const auto& unconstrained = suite[0];
  CHECK(kkt_residual(unconstrained.spec, *unconstrained.solution, Eigen::VectorXd(0),
                     Eigen::VectorXd(0)) <= 1e-12);

  CHECK_THROWS_AS(kkt_residual(circle.spec, xStar, Eigen::VectorXd(0), Eigen::VectorXd(0)),
                  DimensionMismatch);
}

TEST_CASE("convex regression suite converges within budget") {
  for (const auto& problem : test::convex_regression_suite()) {
    CAPTURE(problem.spec.name);
    const NlpSolution sol = solve_nlp(problem.spec, problem.start, 1e-6, 200);
    CHECK(sol.status == NlpStatus::Converged);
    CHECK(sol.iterations <= 200);
    CHECK(sol.kktResidual <= 1e-6);
    // Independent re-evaluation of the residual at the returned triple.
    CHECK(kkt_residual(problem.spec, sol.x, sol.lambda, sol.rho) <= 1e-6);
    if (problem.solution)
      CHECK((sol.x - *problem.solution).lpNorm<Eigen::Infinity>() <= 1e-4);
  }
}

TEST_CASE("solver determinism is bitwise") {
  const auto suite = test::convex_regression_suite();
  for (const auto& problem : {suite[2], suite[8]}) {
    const NlpSolution a = solve_nlp(problem.spec, problem.start, 1e-8);
    const NlpSolution b = solve_nlp(problem.spec, problem.start, 1e-8);
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), sizeof(double) * a.x.size()) == 0);
    CHECK(a.fValue == b.fValue);
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("evaluation failures carry the offending point") {
  NlpSpec spec;
  spec.n = 1;
  spec.name = "nan-objective";
  spec.objective = {1,
                    [](const Eigen::VectorXd& x) { return std::sqrt(x[0]); },
                    [](const Eigen::VectorXd& x) {
                      return Eigen::VectorXd{{0.5 / std::sqrt(x[0])}};
                    }};
  CHECK_THROWS_AS(solve_nlp(spec, Eigen::VectorXd{{-2.0}}, 1e-6), EvaluationFailure);
}

TEST_CASE("iteration limit is reported") {
  const auto suite = test::convex_regression_suite();
  const NlpSolution sol = solve_nlp(suite[6].spec, suite[6].start, 1e-12, 3);
  CHECK(sol.status == NlpStatus::IterationLimit);
  CHECK(sol.iterations == 3);
}
