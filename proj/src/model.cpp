#include "orcon/model.hpp"

#include <algorithm>
#include <cmath>

#include "orcon/errors.hpp"
#include "orcon/rng.hpp"

namespace orcon {

SmoothFn constant_fn(int dim, double c) {
  return {dim, [c](const Eigen::VectorXd&) { return c; },
          [dim](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(dim); }};
}

SmoothFn linear_fn(Eigen::VectorXd a, double c) {
  const int dim = static_cast<int>(a.size());
  return {dim, [a, c](const Eigen::VectorXd& x) { return a.dot(x) + c; },
          [a](const Eigen::VectorXd&) { return a; }};
}

SmoothFn quadratic_fn(Eigen::MatrixXd q, Eigen::VectorXd b, double c) {
  const int dim = static_cast<int>(b.size());
  return {dim,
          [q, b, c](const Eigen::VectorXd& x) {
            return 0.5 * x.dot(q * x) + b.dot(x) + c;
          },
          [q, b](const Eigen::VectorXd& x) -> Eigen::VectorXd { return q * x + b; }};
}

FeasibilityReport feasibility(const MpocProblem& problem, const Eigen::VectorXd& x) {
  if (x.size() != problem.n)
    throw DimensionMismatch("feasibility: point has dimension " +
                            std::to_string(x.size()) + ", problem expects " +
                            std::to_string(problem.n));
  FeasibilityReport r;
  r.gViolation.resize(problem.m());
  r.hViolation.resize(problem.p());
  r.orViolation.resize(problem.q());
  for (int i = 0; i < problem.m(); ++i)
    r.gViolation[i] = std::max(0.0, problem.g[i].value(x));
  for (int j = 0; j < problem.p(); ++j)
    r.hViolation[j] = std::abs(problem.h[j].value(x));
  for (int l = 0; l < problem.q(); ++l) {
    const double gl = problem.orPairs[l].first.value(x);
    const double hl = problem.orPairs[l].second.value(x);
    r.orViolation[l] = std::max(0.0, std::min(gl, hl));
  }
  r.maxViolation = 0;
  if (r.gViolation.size() > 0) r.maxViolation = std::max(r.maxViolation, r.gViolation.maxCoeff());
  if (r.hViolation.size() > 0) r.maxViolation = std::max(r.maxViolation, r.hViolation.maxCoeff());
  if (r.orViolation.size() > 0) r.maxViolation = std::max(r.maxViolation, r.orViolation.maxCoeff());
  return r;
}

double grad_check_fn(const SmoothFn& fn, const std::vector<Eigen::VectorXd>& probes) {
  double worst = 0;
  for (const auto& x : probes) {
    const Eigen::VectorXd ga = fn.gradient(x);
    Eigen::VectorXd gfd(fn.dim);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < fn.dim; ++i) {
      const double step = 1e-6 * std::max(1.0, std::abs(x[i]));
      xp[i] = x[i] + step;
      const double fp = fn.value(xp);
      xp[i] = x[i] - step;
      const double fm = fn.value(xp);
      xp[i] = x[i];
      gfd[i] = (fp - fm) / (2 * step);
    }
    const double scale = std::max({1.0, ga.lpNorm<Eigen::Infinity>(),
                                   gfd.lpNorm<Eigen::Infinity>()});
    worst = std::max(worst, (ga - gfd).lpNorm<Eigen::Infinity>() / scale);
  }
  return worst;
}

GradCheckReport grad_check(const MpocProblem& problem, int probes, std::uint64_t seed) {
  if (probes < 1) throw InvalidArgument("grad_check: probes must be >= 1");
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts(probes, Eigen::VectorXd(problem.n));
  for (auto& x : pts)
    for (int i = 0; i < problem.n; ++i) x[i] = rng.uniform(-2, 2);

  GradCheckReport report;
  const auto add = [&](const std::string& name, const SmoothFn& fn) {
    const double e = grad_check_fn(fn, pts);
    report.entries.push_back({name, e});
    report.worst = std::max(report.worst, e);
  };
  add("f", problem.f);
  for (int i = 0; i < problem.m(); ++i) add("g" + std::to_string(i + 1), problem.g[i]);
  for (int j = 0; j < problem.p(); ++j) add("h" + std::to_string(j + 1), problem.h[j]);
  for (int l = 0; l < problem.q(); ++l) {
    add("G" + std::to_string(l + 1), problem.orPairs[l].first);
    add("H" + std::to_string(l + 1), problem.orPairs[l].second);
  }
  return report;
}

}  // namespace orcon
