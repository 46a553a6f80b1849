#include "orcon/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orcon/errors.hpp"

namespace orcon {

namespace {

constexpr double kTau = 0.995;         // fraction-to-boundary
constexpr double kMuShrink = 5.0;      // monotone barrier reduction factor
constexpr double kKappaMu = 10.0;      // barrier subproblem accuracy
constexpr double kArmijo = 1e-4;
constexpr double kRegStart = 1e-8;     // diagonal regularization ladder
constexpr double kRegGrow = 10.0;

bool finite(double v) { return std::isfinite(v); }

std::string point_to_string(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

// Folded view: original inequalities first, then finite lower bounds
// lb - x <= 0, then finite upper bounds x - ub <= 0.
struct Folded {
  const NlpSpec* spec;
  std::vector<int> lbIdx, ubIdx;
  int m = 0;

  explicit Folded(const NlpSpec& s) : spec(&s) {
    if (s.lb.size() > 0)
      for (int i = 0; i < s.n; ++i)
        if (s.lb[i] > -std::numeric_limits<double>::infinity()) lbIdx.push_back(i);
    if (s.ub.size() > 0)
      for (int i = 0; i < s.n; ++i)
        if (s.ub[i] < std::numeric_limits<double>::infinity()) ubIdx.push_back(i);
    m = static_cast<int>(s.ineq.size() + lbIdx.size() + ubIdx.size());
  }

  Eigen::VectorXd values(const Eigen::VectorXd& x) const {
    Eigen::VectorXd c(m);
    int k = 0;
    for (const auto& ci : spec->ineq) c[k++] = ci.value(x);
    for (int i : lbIdx) c[k++] = spec->lb[i] - x[i];
    for (int i : ubIdx) c[k++] = x[i] - spec->ub[i];
    return c;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, spec->n);
    int k = 0;
    for (const auto& ci : spec->ineq) j.row(k++) = ci.gradient(x).transpose();
    for (int i : lbIdx) j(k++, i) = -1.0;
    for (int i : ubIdx) j(k++, i) = 1.0;
    return j;
  }
};

// Unpivoted LDL^T for symmetric quasi-definite matrices. Returns false when
// a pivot degenerates, which triggers the regularization ladder.
bool ldlt_sqd(Eigen::MatrixXd k, Eigen::MatrixXd& lower, Eigen::VectorXd& diag) {
  const int n = static_cast<int>(k.rows());
  lower = Eigen::MatrixXd::Identity(n, n);
  diag.resize(n);
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(k(i, i)));
  for (int j = 0; j < n; ++j) {
    double d = k(j, j);
    for (int r = 0; r < j; ++r) d -= lower(j, r) * lower(j, r) * diag[r];
    if (!finite(d) || std::abs(d) < 1e-14 * scale) return false;
    diag[j] = d;
    for (int i = j + 1; i < n; ++i) {
      double v = k(i, j);
      for (int r = 0; r < j; ++r) v -= lower(i, r) * lower(j, r) * diag[r];
      lower(i, j) = v / d;
    }
  }
  return true;
}

Eigen::VectorXd ldlt_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& diag,
                           Eigen::VectorXd rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) rhs[i] -= lower(i, j) * rhs[j];
  for (int i = 0; i < n; ++i) rhs[i] /= diag[i];
  for (int i = n - 1; i >= 0; --i)
    for (int j = i + 1; j < n; ++j) rhs[i] -= lower(j, i) * rhs[j];
  return rhs;
}

double kkt_error(const Eigen::VectorXd& gradF, const Eigen::MatrixXd& jIneq,
                 const Eigen::MatrixXd& jEq, const Eigen::VectorXd& cIneq,
                 const Eigen::VectorXd& cEq, const Eigen::VectorXd& lam,
                 const Eigen::VectorXd& rho) {
  Eigen::VectorXd stat = gradF;
  if (lam.size() > 0) stat += jIneq.transpose() * lam;
  if (rho.size() > 0) stat += jEq.transpose() * rho;
  double err = stat.lpNorm<Eigen::Infinity>();
  for (int i = 0; i < cIneq.size(); ++i) {
    err = std::max(err, std::max(0.0, cIneq[i]));
    err = std::max(err, std::abs(lam[i] * cIneq[i]));
    err = std::max(err, std::max(0.0, -lam[i]));
  }
  for (int j = 0; j < cEq.size(); ++j) err = std::max(err, std::abs(cEq[j]));
  return err;
}

}  // namespace

int NlpSpec::foldedIneqCount() const { return Folded(*this).m; }

const char* to_string(NlpStatus s) {
  switch (s) {
    case NlpStatus::Converged: return "converged";
    case NlpStatus::IterationLimit: return "iteration-limit";
    case NlpStatus::LineSearchFailure: return "line-search-failure";
    case NlpStatus::Diverged: return "diverged";
  }
  return "?";
}

double kkt_residual(const NlpSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda, const Eigen::VectorXd& rho) {
  const Folded folded(spec);
  if (x.size() != spec.n || lambda.size() != folded.m ||
      rho.size() != static_cast<int>(spec.eq.size()))
    throw DimensionMismatch("kkt_residual: multiplier dimensions do not match");
  const Eigen::VectorXd cI = folded.values(x);
  Eigen::VectorXd cE(spec.eq.size());
  for (std::size_t j = 0; j < spec.eq.size(); ++j) cE[j] = spec.eq[j].value(x);
  Eigen::MatrixXd jE(spec.eq.size(), spec.n);
  for (std::size_t j = 0; j < spec.eq.size(); ++j)
    jE.row(j) = spec.eq[j].gradient(x).transpose();
  return kkt_error(spec.objective.gradient(x), folded.jacobian(x), jE, cI, cE, lambda,
                   rho);
}

NlpSolution solve_nlp(const NlpSpec& spec, const Eigen::VectorXd& start, double tol,
                      int maxIter) {
  if (start.size() != spec.n)
    throw DimensionMismatch("solve_nlp: start has dimension " +
                            std::to_string(start.size()) + ", expected " +
                            std::to_string(spec.n));
  if (tol <= 0) throw InvalidArgument("solve_nlp: tol must be positive");

  const Folded folded(spec);
  const int n = spec.n;
  const int m = folded.m;
  const int p = static_cast<int>(spec.eq.size());

  Eigen::VectorXd x = start;

  struct Eval {
    double f;
    Eigen::VectorXd gradF, cI, cE;
    Eigen::MatrixXd jI, jE;
  };
  const auto evaluate = [&](const Eigen::VectorXd& at) {
    Eval e;
    e.f = spec.objective.value(at);
    e.gradF = spec.objective.gradient(at);
    e.cI = folded.values(at);
    e.jI = folded.jacobian(at);
    e.cE.resize(p);
    e.jE.resize(p, n);
    for (int j = 0; j < p; ++j) {
      e.cE[j] = spec.eq[j].value(at);
      e.jE.row(j) = spec.eq[j].gradient(at).transpose();
    }
    if (!finite(e.f) || !e.gradF.allFinite() || !e.cI.allFinite() ||
        !e.cE.allFinite() || !e.jI.allFinite() || !e.jE.allFinite())
      throw EvaluationFailure("solve_nlp: NaN/Inf while evaluating '" + spec.name +
                              "' at " + point_to_string(at));
    return e;
  };
  // Objective and constraint values only (line search).
  const auto evaluate_cheap = [&](const Eigen::VectorXd& at, double& f,
                                  Eigen::VectorXd& cI, Eigen::VectorXd& cE) {
    f = spec.objective.value(at);
    cI = folded.values(at);
    cE.resize(p);
    for (int j = 0; j < p; ++j) cE[j] = spec.eq[j].value(at);
    if (!finite(f) || !cI.allFinite() || !cE.allFinite())
      throw EvaluationFailure("solve_nlp: NaN/Inf while evaluating '" + spec.name +
                              "' at " + point_to_string(at));
  };

  Eval e = evaluate(x);

  // Slack initialization keeps the barrier problem local to the start:
  // s = -c for strictly feasible rows, with a small floor so infeasible
  // starts are allowed too.
  Eigen::VectorXd s(m), lam(m);
  for (int i = 0; i < m; ++i) {
    s[i] = std::max(-e.cI[i], 0.01 * std::max(1.0, std::abs(e.cI[i])));
    lam[i] = 1.0;
  }
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(p);
  double mu = m > 0 ? 0.1 * s.dot(lam) / m : 0.0;
  const double muMin = std::min(1e-9, tol / 100);

  Eigen::MatrixXd bfgs = Eigen::MatrixXd::Identity(n, n);
  bool bfgsScaled = false;
  double merityPenalty = 10.0;
  int lineSearchFailures = 0;
  int sinceMuChange = 0;

  NlpSolution out;
  out.status = NlpStatus::IterationLimit;

  const auto finalize = [&](NlpStatus status, int iters) {
    out.status = status;
    out.iterations = iters;
    out.x = x;
    out.lambda = lam;
    out.rho = rho;
    out.fValue = e.f;
    out.kktResidual = kkt_error(e.gradF, e.jI, e.jE, e.cI, e.cE, lam, rho);
    return out;
  };

  for (int iter = 0; iter < maxIter; ++iter) {
#ifdef ORCON_NLP_TRACE
    fprintf(stderr, "it=%d f=%.8g kkt=%.3g mu=%.3g x0=%.6g x1=%.6g\n", iter, e.f,
            kkt_error(e.gradF, e.jI, e.jE, e.cI, e.cE, lam, rho), mu, x[0],
            x.size() > 1 ? x[1] : 0.0);
#endif
    if (kkt_error(e.gradF, e.jI, e.jE, e.cI, e.cE, lam, rho) <= tol)
      return finalize(NlpStatus::Converged, iter);
    if (x.lpNorm<Eigen::Infinity>() > 1e10 || e.f < -1e18)
      return finalize(NlpStatus::Diverged, iter);

    // Barrier subproblem residuals; shrink mu once they are small enough.
    // A patience window escapes subproblems the quasi-Newton model cannot
    // finish (it also discards the model, which caused the stall).
    if (m > 0) {
      Eigen::VectorXd rd = e.gradF + e.jI.transpose() * lam;
      if (p > 0) rd += e.jE.transpose() * rho;
      const double errMu = std::max(
          {rd.lpNorm<Eigen::Infinity>(), (e.cI + s).lpNorm<Eigen::Infinity>(),
           p > 0 ? e.cE.lpNorm<Eigen::Infinity>() : 0.0,
           (s.cwiseProduct(lam).array() - mu).abs().maxCoeff()});
      if (errMu <= kKappaMu * mu) {
        mu = std::max(muMin, mu / kMuShrink);
        sinceMuChange = 0;
      } else if (++sinceMuChange >= 40) {
        mu = std::max(muMin, mu / kMuShrink);
        sinceMuChange = 0;
        bfgs = Eigen::MatrixXd::Identity(n, n);
        bfgsScaled = false;
      }
    }

    // Condensed primal-dual system on (dx, drho).
    Eigen::VectorXd rd = e.gradF + e.jI.transpose() * lam;
    if (p > 0) rd += e.jE.transpose() * rho;
    const Eigen::VectorXd rpI = e.cI + s;
    Eigen::VectorXd sigma(m), auxI(m);
    for (int i = 0; i < m; ++i) {
      sigma[i] = lam[i] / s[i];
      auxI[i] = mu / s[i] - lam[i] + sigma[i] * rpI[i];
    }

    Eigen::VectorXd dx, drho;
    double reg = 0.0;
    for (;;) {
      Eigen::MatrixXd k(n + p, n + p);
      k.topLeftCorner(n, n) = bfgs;
      if (m > 0)
        k.topLeftCorner(n, n) += e.jI.transpose() * sigma.asDiagonal() * e.jI;
      k.topLeftCorner(n, n).diagonal().array() += reg;
      if (p > 0) {
        k.topRightCorner(n, p) = e.jE.transpose();
        k.bottomLeftCorner(p, n) = e.jE;
        k.bottomRightCorner(p, p) =
            -std::max(reg, kRegStart) * Eigen::MatrixXd::Identity(p, p);
      }
      Eigen::VectorXd rhs(n + p);
      rhs.head(n) = -rd;
      if (m > 0) rhs.head(n) -= e.jI.transpose() * auxI;
      if (p > 0) rhs.tail(p) = -e.cE;

      Eigen::MatrixXd lower;
      Eigen::VectorXd diag;
      if (ldlt_sqd(k, lower, diag)) {
        const Eigen::VectorXd sol = ldlt_solve(lower, diag, rhs);
        if (sol.allFinite()) {
          dx = sol.head(n);
          drho = sol.tail(p);
          break;
        }
      }
      reg = reg == 0.0 ? kRegStart : reg * kRegGrow;
      if (reg > 1e12) return finalize(NlpStatus::LineSearchFailure, iter);
    }

    Eigen::VectorXd ds(m), dlam(m);
    for (int i = 0; i < m; ++i) {
      ds[i] = -rpI[i] - e.jI.row(i).dot(dx);
      dlam[i] = mu / s[i] - lam[i] - sigma[i] * ds[i];
    }

    // Fraction-to-boundary step caps.
    double alphaP = 1.0, alphaD = 1.0;
    for (int i = 0; i < m; ++i) {
      if (ds[i] < 0) alphaP = std::min(alphaP, -kTau * s[i] / ds[i]);
      if (dlam[i] < 0) alphaD = std::min(alphaD, -kTau * lam[i] / dlam[i]);
    }

    // l1 merit line search in the primal variables.
    const Eigen::VectorXd lamTrial = lam + alphaD * dlam;
    const Eigen::VectorXd rhoTrial = rho + alphaD * drho;
    merityPenalty =
        std::max({merityPenalty,
                  2.0 * (lamTrial.size() > 0 ? lamTrial.lpNorm<Eigen::Infinity>() : 0.0),
                  2.0 * (rhoTrial.size() > 0 ? rhoTrial.lpNorm<Eigen::Infinity>() : 0.0)});

    const auto merit = [&](double f, const Eigen::VectorXd& sv,
                           const Eigen::VectorXd& cI, const Eigen::VectorXd& cE) {
      double val = f;
      for (int i = 0; i < m; ++i) val -= mu * std::log(sv[i]);
      val += merityPenalty * ((cI + sv).lpNorm<1>() + cE.lpNorm<1>());
      return val;
    };
    const double phi0 = merit(e.f, s, e.cI, e.cE);
    double dirDeriv = e.gradF.dot(dx);
    for (int i = 0; i < m; ++i) dirDeriv -= mu * ds[i] / s[i];
    dirDeriv -= merityPenalty * (rpI.lpNorm<1>() + e.cE.lpNorm<1>());

    double alpha = alphaP;
    bool accepted = false;
    Eigen::VectorXd xNew, sNew, cINew, cENew;
    double fNew = 0;
    while (alpha > 1e-14) {
      xNew = x + alpha * dx;
      sNew = s + alpha * ds;
      evaluate_cheap(xNew, fNew, cINew, cENew);
      if (merit(fNew, sNew, cINew, cENew) <=
          phi0 + kArmijo * alpha * std::min(dirDeriv, 0.0)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (++lineSearchFailures >= 3)
        return finalize(NlpStatus::LineSearchFailure, iter);
      // Restart the Hessian model and retry from the same point.
      bfgs = Eigen::MatrixXd::Identity(n, n);
      bfgsScaled = false;
      continue;
    }
    lineSearchFailures = 0;

    const Eigen::VectorXd xOld = x;
    const Eigen::VectorXd gradLOld = [&] {
      Eigen::VectorXd g = e.gradF;
      if (m > 0) g += e.jI.transpose() * lamTrial;
      if (p > 0) g += e.jE.transpose() * rhoTrial;
      return g;
    }();

#ifdef ORCON_NLP_TRACE
    fprintf(stderr,
            "   step alpha=%.3g alphaP=%.3g alphaD=%.3g |dx|=%.3g |ds|=%.3g "
            "|dlam|=%.3g pi=%.3g lam0=%.3g s0=%.3g\n",
            alpha, alphaP, alphaD, dx.norm(), ds.norm(), dlam.norm(), merityPenalty,
            lam.size() ? lam[0] : 0.0, s.size() ? s[0] : 0.0);
#endif
    x = xNew;
    s = sNew;
    lam = lamTrial;
    rho = rhoTrial;
    e = evaluate(x);

    // Damped BFGS update of the Lagrangian Hessian model.
    const Eigen::VectorXd sBf = x - xOld;
    Eigen::VectorXd gradLNew = e.gradF;
    if (m > 0) gradLNew += e.jI.transpose() * lam;
    if (p > 0) gradLNew += e.jE.transpose() * rho;
    Eigen::VectorXd yBf = gradLNew - gradLOld;
    const double sNorm = sBf.norm();
    if (sNorm > 1e-13) {
      if (!bfgsScaled) {
        const double sy = sBf.dot(yBf);
        if (sy > 1e-12 * sNorm * yBf.norm()) {
          bfgs = (yBf.squaredNorm() / sy) * Eigen::MatrixXd::Identity(n, n);
          bfgsScaled = true;
        }
      }
      const Eigen::VectorXd bs = bfgs * sBf;
      const double sBs = sBf.dot(bs);
      double sy = sBf.dot(yBf);
      if (sBs > 1e-16) {
        if (sy < 0.2 * sBs) {
          const double theta = 0.8 * sBs / (sBs - sy);
          yBf = theta * yBf + (1 - theta) * bs;
          sy = sBf.dot(yBf);
        }
        if (sy > 1e-16)
          bfgs += yBf * yBf.transpose() / sy - bs * bs.transpose() / sBs;
      }
    }
  }
  return finalize(NlpStatus::IterationLimit, maxIter);
}

}  // namespace orcon
