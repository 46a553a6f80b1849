#pragma once

#include "orcon/analysis.hpp"
#include "orcon/model.hpp"
#include "orcon/nlp.hpp"

namespace orcon {

/// Switching-constrained lift of an MPOC over (x, y, z) in R^{n+2q}: the
/// inherited g/h plus slack bounds y_l, z_l <= 0 and switching pairs
/// (G_l(x) - y_l) (H_l(x) - z_l) = 0. The x-part of any feasible point is
/// feasible to the base problem.
struct MpscInstance {
  SwitchingProblem sc;  // g holds inherited g then y <= 0 rows then z <= 0 rows
  int baseN = 0;
  int q = 0;

  int dim() const { return sc.n; }
  Eigen::VectorXd xPart(const Eigen::VectorXd& w) const { return w.head(baseN); }
};

/// Complementarity-constrained lift over (x, y, z): inherited g/h plus
/// G_l(x) - y_l <= 0, H_l(x) - z_l <= 0 and pairs 0 <= y_l perp z_l >= 0.
struct MpccInstance {
  ComplementarityProblem cc;  // g holds inherited g then G-y rows then H-z rows
  int baseN = 0;
  int q = 0;

  int dim() const { return cc.n; }
  Eigen::VectorXd xPart(const Eigen::VectorXd& w) const { return w.head(baseN); }
};

/// Smooth inequality reformulation using the Kanzow-Schwartz function:
/// g <= 0, phi_KS(G_l(x), H_l(x)) <= 0, h = 0.
NlpSpec ncp_reformulate(const MpocProblem& problem);

MpscInstance to_mpsc(const MpocProblem& problem);
MpccInstance to_mpcc(const MpocProblem& problem);

/// The case-defined slack values that map an MPOC-feasible x to an
/// MPCC-feasible triple (x, y, z). Throws InfeasiblePoint.
std::pair<Eigen::VectorXd, Eigen::VectorXd> cc_slack_lift(const MpocProblem& problem,
                                                          const Eigen::VectorXd& x,
                                                          double epsAct = 1e-6);

/// Scholtes band relaxation -t <= (G_l - y_l)(H_l - z_l) <= t; the result
/// has m + 4q inequalities and p equalities.
NlpSpec scholtes_sc_relax(const MpscInstance& inst, double t);

/// Scholtes product relaxation y_l z_l <= t with y, z >= 0; the result has
/// m + 5q inequalities and p equalities.
NlpSpec scholtes_cc_relax(const MpccInstance& inst, double t);

enum class DirectVariant : std::uint8_t { Fb, Ks };

/// Direct relaxation g <= 0, phi^t(G_l, H_l) <= 0, h = 0 with
/// phi^t in {smoothed Fischer-Burmeister, offset Kanzow-Schwartz}.
NlpSpec direct_relax(const MpocProblem& problem, DirectVariant variant, double t);

/// Slack starting values for the homotopy drivers.
Eigen::VectorXd sc_start(const MpocProblem& problem, const Eigen::VectorXd& x0);
Eigen::VectorXd cc_start(const MpocProblem& problem, const Eigen::VectorXd& x0);

}  // namespace orcon
