#include "orcon/reformulate.hpp"

#include <cmath>

#include "orcon/errors.hpp"
#include "orcon/ncp.hpp"

namespace orcon {

namespace {

// Lifts a SmoothFn on R^n to R^{total} ignoring the extra coordinates.
SmoothFn lift_x(const SmoothFn& base, int total) {
  const int n = base.dim;
  return {total,
          [base, n](const Eigen::VectorXd& w) { return base.value(w.head(n)); },
          [base, n, total](const Eigen::VectorXd& w) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(total);
            g.head(n) = base.gradient(w.head(n));
            return g;
          }};
}

// w_idx <= 0 as a SmoothFn (coordinate selector with sign).
SmoothFn coord_fn(int total, int idx, double sign) {
  return {total, [idx, sign](const Eigen::VectorXd& w) { return sign * w[idx]; },
          [total, idx, sign](const Eigen::VectorXd&) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(total);
            g[idx] = sign;
            return g;
          }};
}

// G_l(x) - w_slack as a SmoothFn on the lifted space.
SmoothFn shifted_fn(const SmoothFn& base, int total, int slackIdx) {
  const int n = base.dim;
  return {total,
          [base, n, slackIdx](const Eigen::VectorXd& w) {
            return base.value(w.head(n)) - w[slackIdx];
          },
          [base, n, total, slackIdx](const Eigen::VectorXd& w) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(total);
            g.head(n) = base.gradient(w.head(n));
            g[slackIdx] -= 1.0;
            return g;
          }};
}

// phi(G_l(x), H_l(x)) with a chain-rule gradient; phiGrad must be total.
SmoothFn composed_pair(const SmoothFn& gFn, const SmoothFn& hFn,
                       std::function<double(double, double)> phi,
                       std::function<Eigen::Vector2d(double, double)> phiGrad) {
  const int n = gFn.dim;
  return {n,
          [gFn, hFn, phi](const Eigen::VectorXd& x) {
            return phi(gFn.value(x), hFn.value(x));
          },
          [gFn, hFn, phiGrad](const Eigen::VectorXd& x) -> Eigen::VectorXd {
            const Eigen::Vector2d d = phiGrad(gFn.value(x), hFn.value(x));
            return d[0] * gFn.gradient(x) + d[1] * hFn.gradient(x);
          }};
}

Eigen::Vector2d grad_fb_t_total(double a, double b, double t) {
  const double r = std::sqrt(a * a + b * b + 2 * t);
  if (r < 1e-300) return Eigen::Vector2d(1, 1);  // Clarke element at the kink
  return Eigen::Vector2d(1 - a / r, 1 - b / r);
}

}  // namespace

NlpSpec ncp_reformulate(const MpocProblem& problem) {
  NlpSpec spec;
  spec.n = problem.n;
  spec.objective = problem.f;
  spec.ineq = problem.g;
  for (const auto& [gFn, hFn] : problem.orPairs)
    spec.ineq.push_back(composed_pair(
        gFn, hFn, [](double a, double b) { return ncp::phi_ks(a, b); },
        [](double a, double b) { return ncp::grad_phi_ks(a, b); }));
  spec.eq = problem.h;
  spec.name = problem.name + "/ncp-ks";
  return spec;
}

MpscInstance to_mpsc(const MpocProblem& problem) {
  MpscInstance inst;
  inst.baseN = problem.n;
  inst.q = problem.q();
  const int total = problem.n + 2 * problem.q();
  inst.sc.n = total;
  inst.sc.name = problem.name + "/sc";
  inst.sc.f = lift_x(problem.f, total);
  for (const auto& gi : problem.g) inst.sc.g.push_back(lift_x(gi, total));
  for (int l = 0; l < problem.q(); ++l)
    inst.sc.g.push_back(coord_fn(total, problem.n + l, 1.0));  // y_l <= 0
  for (int l = 0; l < problem.q(); ++l)
    inst.sc.g.push_back(coord_fn(total, problem.n + problem.q() + l, 1.0));  // z_l <= 0
  for (const auto& hj : problem.h) inst.sc.h.push_back(lift_x(hj, total));
  for (int l = 0; l < problem.q(); ++l)
    inst.sc.pairs.emplace_back(
        shifted_fn(problem.orPairs[l].first, total, problem.n + l),
        shifted_fn(problem.orPairs[l].second, total, problem.n + problem.q() + l));
  return inst;
}

MpccInstance to_mpcc(const MpocProblem& problem) {
  MpccInstance inst;
  inst.baseN = problem.n;
  inst.q = problem.q();
  const int total = problem.n + 2 * problem.q();
  inst.cc.n = total;
  inst.cc.name = problem.name + "/cc";
  inst.cc.f = lift_x(problem.f, total);
  for (const auto& gi : problem.g) inst.cc.g.push_back(lift_x(gi, total));
  for (int l = 0; l < problem.q(); ++l)
    inst.cc.g.push_back(shifted_fn(problem.orPairs[l].first, total, problem.n + l));
  for (int l = 0; l < problem.q(); ++l)
    inst.cc.g.push_back(
        shifted_fn(problem.orPairs[l].second, total, problem.n + problem.q() + l));
  for (const auto& hj : problem.h) inst.cc.h.push_back(lift_x(hj, total));
  for (int l = 0; l < problem.q(); ++l)
    inst.cc.pairs.emplace_back(coord_fn(total, problem.n + l, 1.0),
                               coord_fn(total, problem.n + problem.q() + l, 1.0));
  return inst;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> cc_slack_lift(const MpocProblem& problem,
                                                          const Eigen::VectorXd& x,
                                                          double epsAct) {
  const OrActivePattern pat = active_pattern(problem, x, epsAct);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(problem.q());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(problem.q());
  for (int l : pat.i0M) y[l] = 1.0;
  for (int l : pat.iPM) y[l] = 2 * problem.orPairs[l].first.value(x);
  for (int l : pat.iP0) y[l] = 2 * problem.orPairs[l].first.value(x);
  for (int l : pat.iM0) z[l] = 1.0;
  for (int l : pat.iMP) z[l] = 2 * problem.orPairs[l].second.value(x);
  for (int l : pat.i0P) z[l] = 2 * problem.orPairs[l].second.value(x);
  return {y, z};
}

NlpSpec scholtes_sc_relax(const MpscInstance& inst, double t) {
  if (t < 0) throw InvalidArgument("scholtes_sc_relax: t must be nonnegative");
  NlpSpec spec;
  spec.n = inst.dim();
  spec.objective = inst.sc.f;
  spec.ineq = inst.sc.g;  // m inherited + 2q slack bounds
  const int total = inst.dim();
  for (const auto& [gt, ht] : inst.sc.pairs) {
    // (G - y)(H - z) - t <= 0 and -t - (G - y)(H - z) <= 0
    for (const double sgn : {1.0, -1.0}) {
      SmoothFn prod{total,
                    [gt, ht, t, sgn](const Eigen::VectorXd& w) {
                      return sgn * gt.value(w) * ht.value(w) - t;
                    },
                    [gt, ht, sgn](const Eigen::VectorXd& w) -> Eigen::VectorXd {
                      return sgn * (ht.value(w) * gt.gradient(w) +
                                    gt.value(w) * ht.gradient(w));
                    }};
      spec.ineq.push_back(std::move(prod));
    }
  }
  spec.eq = inst.sc.h;
  spec.name = inst.sc.name + "/scholtes(t=" + std::to_string(t) + ")";
  return spec;
}

NlpSpec scholtes_cc_relax(const MpccInstance& inst, double t) {
  if (t < 0) throw InvalidArgument("scholtes_cc_relax: t must be nonnegative");
  NlpSpec spec;
  spec.n = inst.dim();
  spec.objective = inst.cc.f;
  spec.ineq = inst.cc.g;  // m inherited + 2q shifted rows
  const int total = inst.dim();
  const int n = inst.baseN;
  const int q = inst.q;
  for (int l = 0; l < q; ++l) {
    spec.ineq.push_back(coord_fn(total, n + l, -1.0));      // -y_l <= 0
    spec.ineq.push_back(coord_fn(total, n + q + l, -1.0));  // -z_l <= 0
  }
  for (int l = 0; l < q; ++l) {
    SmoothFn prod{total,
                  [n, q, l, t](const Eigen::VectorXd& w) {
                    return w[n + l] * w[n + q + l] - t;
                  },
                  [total, n, q, l](const Eigen::VectorXd& w) {
                    Eigen::VectorXd g = Eigen::VectorXd::Zero(total);
                    g[n + l] = w[n + q + l];
                    g[n + q + l] = w[n + l];
                    return g;
                  }};
    spec.ineq.push_back(std::move(prod));
  }
  spec.eq = inst.cc.h;
  spec.name = inst.cc.name + "/scholtes(t=" + std::to_string(t) + ")";
  return spec;
}

NlpSpec direct_relax(const MpocProblem& problem, DirectVariant variant, double t) {
  if (t < 0) throw InvalidArgument("direct_relax: t must be nonnegative");
  NlpSpec spec;
  spec.n = problem.n;
  spec.objective = problem.f;
  spec.ineq = problem.g;
  for (const auto& [gFn, hFn] : problem.orPairs) {
    if (variant == DirectVariant::Fb)
      spec.ineq.push_back(composed_pair(
          gFn, hFn, [t](double a, double b) { return ncp::phi_fb_t(a, b, t); },
          [t](double a, double b) { return grad_fb_t_total(a, b, t); }));
    else
      spec.ineq.push_back(composed_pair(
          gFn, hFn, [t](double a, double b) { return ncp::phi_ks_t(a, b, t); },
          [t](double a, double b) { return ncp::grad_phi_ks_t(a, b, t); }));
  }
  spec.eq = problem.h;
  spec.name = problem.name + (variant == DirectVariant::Fb ? "/fb(t=" : "/ks(t=") +
              std::to_string(t) + ")";
  return spec;
}

Eigen::VectorXd sc_start(const MpocProblem& problem, const Eigen::VectorXd& x0) {
  const int q = problem.q();
  Eigen::VectorXd w(problem.n + 2 * q);
  w.head(problem.n) = x0;
  for (int l = 0; l < q; ++l) {
    w[problem.n + l] = std::min(0.0, problem.orPairs[l].first.value(x0));
    w[problem.n + q + l] = std::min(0.0, problem.orPairs[l].second.value(x0));
  }
  return w;
}

Eigen::VectorXd cc_start(const MpocProblem& problem, const Eigen::VectorXd& x0) {
  const int q = problem.q();
  Eigen::VectorXd w(problem.n + 2 * q);
  w.head(problem.n) = x0;
  for (int l = 0; l < q; ++l) {
    w[problem.n + l] = std::max(0.0, problem.orPairs[l].first.value(x0)) + 0.1;
    w[problem.n + q + l] = std::max(0.0, problem.orPairs[l].second.value(x0)) + 0.1;
  }
  return w;
}

}  // namespace orcon
