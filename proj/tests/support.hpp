#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "orcon/analysis.hpp"
#include "orcon/model.hpp"
#include "orcon/rng.hpp"

namespace orcon::test {

// Central finite differences for a scalar function of two variables.
inline Eigen::Vector2d fd_grad2(const std::function<double(double, double)>& f,
                                double a, double b, double step = 1e-6) {
  return {(f(a + step, b) - f(a - step, b)) / (2 * step),
          (f(a, b + step) - f(a, b - step)) / (2 * step)};
}

// Distance from (a, b) to the complementarity set C.
inline double dist_to_c(double a, double b) {
  const auto distRayA = a >= 0 ? std::abs(b) : std::hypot(a, b);  // {(t,0), t>=0}
  const auto distRayB = b >= 0 ? std::abs(a) : std::hypot(a, b);  // {(0,t), t>=0}
  return std::min(distRayA, distRayB);
}

enum class PairKind { I0P, IP0, I00, IMM, IMP, IPM, I0M, IM0 };

// A randomized MPOC instance built around a prescribed point and
// stationarity class: constraint values at xbar realize the requested pair
// kinds, multipliers with the class's sign pattern are drawn, and the
// objective's gradient at xbar is set to close the stationarity system
// exactly. All data functions are quadratics.
struct StationaryInstance {
  MpocProblem problem;
  Eigen::VectorXd xbar;
  StatClass cls = StatClass::W;
  std::vector<PairKind> kinds;
  std::vector<double> mu, nu;       // per or-pair (zero where absent)
  std::vector<double> lambda;       // per g constraint
  std::vector<double> rhoMult;      // per h constraint
};

// Random quadratic with prescribed value and no constraint on the gradient
// at xbar.
inline SmoothFn random_quadratic_at(Rng& rng, const Eigen::VectorXd& xbar,
                                    double valueAt) {
  const int n = static_cast<int>(xbar.size());
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) q(i, j) = q(j, i) = rng.uniform(-0.5, 0.5);
  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a[i] = rng.uniform(-2, 2);
  // f(x) = 0.5 (x-xbar)'Q(x-xbar) + a.(x-xbar) + valueAt
  return {n,
          [q, a, xbar, valueAt](const Eigen::VectorXd& x) {
            const Eigen::VectorXd d = x - xbar;
            return 0.5 * d.dot(q * d) + a.dot(d) + valueAt;
          },
          [q, a, xbar](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            return q * (x - xbar) + a;
          }};
}

inline StationaryInstance make_stationary_instance(std::uint64_t seed, StatClass cls,
                                                   bool allowZeroMinusKinds = true,
                                                   bool forceBiactive = false) {
  Rng rng(seed);
  StationaryInstance inst;
  inst.cls = cls;
  const int n = 2 + static_cast<int>(rng.index(4));  // 2..5
  const int q = 1 + static_cast<int>(rng.index(3));  // 1..3
  const int m = static_cast<int>(rng.index(3));      // 0..2
  const int p = static_cast<int>(rng.index(2));      // 0..1

  inst.xbar.resize(n);
  for (int i = 0; i < n; ++i) inst.xbar[i] = rng.uniform(-1, 1);

  MpocProblem& prob = inst.problem;
  prob.n = n;
  prob.name = "random-stationary";

  Eigen::VectorXd gradTarget = Eigen::VectorXd::Zero(n);

  for (int i = 0; i < m; ++i) {
    const bool active = rng.uniform() < 0.5;
    prob.g.push_back(random_quadratic_at(rng, inst.xbar, active ? 0.0 : -rng.uniform(0.5, 2)));
    const double lam = active ? rng.uniform(0, 2) : 0.0;
    inst.lambda.push_back(lam);
    if (lam > 0) gradTarget += lam * prob.g.back().gradient(inst.xbar);
  }
  for (int j = 0; j < p; ++j) {
    prob.h.push_back(random_quadratic_at(rng, inst.xbar, 0.0));
    const double rho = rng.uniform(-2, 2);
    inst.rhoMult.push_back(rho);
    gradTarget += rho * prob.h.back().gradient(inst.xbar);
  }

  const PairKind pool[] = {PairKind::I0P, PairKind::IP0, PairKind::I00, PairKind::IMM,
                           PairKind::IMP, PairKind::IPM, PairKind::I0M, PairKind::IM0};
  const int poolSize = allowZeroMinusKinds ? 8 : 6;
  for (int l = 0; l < q; ++l) {
    const PairKind kind =
        forceBiactive && l == 0 ? PairKind::I00 : pool[rng.index(poolSize)];
    inst.kinds.push_back(kind);
    double gVal = 0, hVal = 0;
    const double r1 = rng.uniform(0.5, 2), r2 = rng.uniform(0.5, 2);
    switch (kind) {
      case PairKind::I0P: gVal = 0; hVal = r2; break;
      case PairKind::IP0: gVal = r1; hVal = 0; break;
      case PairKind::I00: gVal = 0; hVal = 0; break;
      case PairKind::IMM: gVal = -r1; hVal = -r2; break;
      case PairKind::IMP: gVal = -r1; hVal = r2; break;
      case PairKind::IPM: gVal = r1; hVal = -r2; break;
      case PairKind::I0M: gVal = 0; hVal = -r2; break;
      case PairKind::IM0: gVal = -r1; hVal = 0; break;
    }
    prob.orPairs.emplace_back(random_quadratic_at(rng, inst.xbar, gVal),
                              random_quadratic_at(rng, inst.xbar, hVal));

    double muL = 0, nuL = 0;
    if (kind == PairKind::I0P) {
      muL = rng.uniform(0, 2);
    } else if (kind == PairKind::IP0) {
      nuL = rng.uniform(0, 2);
    } else if (kind == PairKind::I00) {
      switch (cls) {
        case StatClass::S: break;
        case StatClass::M:
          (rng.uniform() < 0.5 ? muL : nuL) = rng.uniform(0.5, 2);
          break;
        default:  // W: both strictly positive
          muL = rng.uniform(0.5, 2);
          nuL = rng.uniform(0.5, 2);
          break;
      }
    }
    inst.mu.push_back(muL);
    inst.nu.push_back(nuL);
    if (muL > 0) gradTarget += muL * prob.orPairs[l].first.gradient(inst.xbar);
    if (nuL > 0) gradTarget += nuL * prob.orPairs[l].second.gradient(inst.xbar);
  }

  // Objective: strictly convex quadratic whose gradient at xbar closes the
  // stationarity system with the drawn multipliers.
  const Eigen::VectorXd xbar = inst.xbar;
  const Eigen::VectorXd lin = -gradTarget;
  prob.f = {n,
            [xbar, lin](const Eigen::VectorXd& x) {
              const Eigen::VectorXd d = x - xbar;
              return 0.5 * d.squaredNorm() + lin.dot(d);
            },
            [xbar, lin](const Eigen::VectorXd& x) -> Eigen::VectorXd {
              return (x - xbar) + lin;
            }};
  return inst;
}

}  // namespace orcon::test
