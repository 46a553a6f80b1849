#include <doctest.h>

#include <cmath>

#include "orcon/bench.hpp"
#include "orcon/errors.hpp"
#include "orcon/ncp.hpp"
#include "orcon/reformulate.hpp"
#include "support.hpp"

using namespace orcon;

namespace {

bool nlp_feasible(const NlpSpec& spec, const Eigen::VectorXd& x, double tol = 0.0) {
  for (const auto& c : spec.ineq)
    if (c.value(x) > tol) return false;
  for (const auto& c : spec.eq)
    if (std::abs(c.value(x)) > tol) return false;
  return true;
}

Eigen::VectorXd random_point(Rng& rng, int n, double lo, double hi) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo, hi);
  return x;
}

}  // namespace

TEST_CASE("ncp reformulation of the toy program") {
  const MpocProblem p = bench::example41();
  const NlpSpec spec = ncp_reformulate(p);
  REQUIRE(spec.ineq.size() == 1);
  CHECK(spec.eq.empty());

  // On the branch x1 + x2 >= 0 the constraint reads x1 * x2 <= 0.
  CHECK(spec.ineq[0].value(Eigen::VectorXd{{2.0, 3.0}}) == 6);
  CHECK(spec.ineq[0].value(Eigen::VectorXd{{1.0, -0.5}}) == -0.5);

  // At a biactive point the constraint gradient vanishes.
  CHECK(spec.ineq[0].gradient(Eigen::VectorXd{{0.0, 0.0}}).norm() == 0);
}

TEST_CASE("ncp reformulation preserves the feasible set (sampling oracle)") {
  const MpocProblem p = bench::build_disjunctive().problem;
  const NlpSpec spec = ncp_reformulate(p);
  Rng rng(811);
  int feasibleSeen = 0;
  for (int k = 0; k < 10000; ++k) {
    const Eigen::VectorXd x = random_point(rng, 5, -3, 5);
    const bool mpoc = feasibility(p, x).maxViolation == 0;
    const bool nlp = nlp_feasible(spec, x);
    CHECK(mpoc == nlp);
    feasibleSeen += mpoc;
  }
  CHECK(feasibleSeen > 0);
}

TEST_CASE("switching lift shape and x-part feasibility") {
  const MpocProblem base = bench::example41();
  const MpscInstance inst = to_mpsc(base);
  CHECK(inst.dim() == base.n + 2 * base.q());
  CHECK(inst.sc.g.size() == base.g.size() + 2 * base.q());
  CHECK(inst.sc.h.size() == base.h.size());
  CHECK(inst.sc.pairs.size() == static_cast<std::size_t>(base.q()));

  // Example 4.1 lifts to the program with (x1 - y)(x2 - z) = 0; check the
  // pair values at a sample point.
  const Eigen::VectorXd w{{0.5, -1.0, -0.25, -2.0}};
  CHECK(inst.sc.pairs[0].first.value(w) == 0.75);
  CHECK(inst.sc.pairs[0].second.value(w) == 1.0);

  // Constructed switching-feasible points have MPOC-feasible x-parts.
  Rng rng(812);
  for (int trial = 0; trial < 10; ++trial) {
    const auto stat = test::make_stationary_instance(2200 + trial, StatClass::W);
    const MpscInstance lifted = to_mpsc(stat.problem);
    for (int k = 0; k < 200; ++k) {
      Eigen::VectorXd x = random_point(rng, stat.problem.n, -2, 2);
      const Eigen::VectorXd w2 = sc_start(stat.problem, x);
      bool scFeasible = true;
      for (const auto& [gt, ht] : lifted.sc.pairs)
        if (std::abs(gt.value(w2) * ht.value(w2)) > 0) scFeasible = false;
      for (std::size_t i = stat.problem.g.size(); i < lifted.sc.g.size(); ++i)
        if (lifted.sc.g[i].value(w2) > 0) scFeasible = false;
      if (scFeasible) {
        FeasibilityReport rep = feasibility(stat.problem, lifted.xPart(w2));
        CHECK(rep.orViolation.maxCoeff() <= 0);
      }
    }
  }
}

TEST_CASE("complementarity lift shape") {
  const MpocProblem base = bench::example41();
  const MpccInstance inst = to_mpcc(base);
  CHECK(inst.dim() == base.n + 2 * base.q());
  CHECK(inst.cc.g.size() == base.g.size() + 2 * base.q());
  CHECK(inst.cc.pairs.size() == static_cast<std::size_t>(base.q()));

  // Example 4.2's instance: x1 - y <= 0, x2 - z <= 0, 0 <= y perp z >= 0.
  // The point (0,0,0,1) is feasible and its x-part is biactive.
  const Eigen::VectorXd w{{0.0, 0.0, 0.0, 1.0}};
  CHECK(inst.cc.g[0].value(w) == 0);
  CHECK(inst.cc.g[1].value(w) == -1);
  CHECK(inst.cc.pairs[0].first.value(w) == 0);
  CHECK(inst.cc.pairs[0].second.value(w) == 1);
  const OrActivePattern pat = active_pattern(base, inst.xPart(w), 1e-8);
  CHECK(pat.i00 == std::vector<int>{0});
}

TEST_CASE("cc slack lift cases") {
  const MpocProblem p = bench::example41();
  {
    const auto [y, z] = cc_slack_lift(p, Eigen::VectorXd{{0.0, 0.0}});
    CHECK(y[0] == 0);
    CHECK(z[0] == 0);
  }
  {
    const auto [y, z] = cc_slack_lift(p, Eigen::VectorXd{{1.0, 0.0}});
    CHECK(y[0] == 2);  // 2 G(x)
    CHECK(z[0] == 0);
  }
  {
    const auto [y, z] = cc_slack_lift(p, Eigen::VectorXd{{0.0, 1.0}});
    CHECK(y[0] == 0);
    CHECK(z[0] == 2);  // 2 H(x)
  }
}

TEST_CASE("cc slack lift satisfies the complementarity constraints exactly") {
  Rng rng(813);
  for (int trial = 0; trial < 30; ++trial) {
    const auto stat = test::make_stationary_instance(2500 + trial, StatClass::M);
    const MpccInstance inst = to_mpcc(stat.problem);
    const auto [y, z] = cc_slack_lift(stat.problem, stat.xbar, 1e-9);
    Eigen::VectorXd w(inst.dim());
    w << stat.xbar, y, z;
    for (int l = 0; l < stat.problem.q(); ++l) {
      const double gb = inst.cc.pairs[l].first.value(w);
      const double hb = inst.cc.pairs[l].second.value(w);
      CHECK(gb >= 0);
      CHECK(hb >= 0);
      CHECK(gb * hb == 0);
      // Shifted inequality rows hold too.
      CHECK(inst.cc.g[stat.problem.g.size() + l].value(w) <= 1e-12);
      CHECK(inst.cc.g[stat.problem.g.size() + stat.problem.q() + l].value(w) <= 1e-12);
    }
  }
}

TEST_CASE("scholtes band relaxation of the switching lift") {
  const MpocProblem base = bench::example41();
  const MpscInstance inst = to_mpsc(base);
  const NlpSpec relaxed = scholtes_sc_relax(inst, 1.0);
  CHECK(relaxed.ineq.size() == base.g.size() + 4 * base.q());  // m + 4q
  CHECK(relaxed.eq.size() == base.h.size());

  // -1 <= (x1 - y)(x2 - z) <= 1 at a sample point: product = 2.
  const Eigen::VectorXd w{{1.0, 0.0, -1.0, -1.0}};
  CHECK(relaxed.ineq[base.g.size() + 2 * base.q()].value(w) == 1.0);   // 2 - 1
  CHECK(relaxed.ineq[base.g.size() + 2 * base.q() + 1].value(w) == -3.0);  // -2 - 1

  // Nesting: band feasibility at t = 0 implies it at t = 0.1.
  const NlpSpec tight = scholtes_sc_relax(inst, 0.0);
  const NlpSpec loose = scholtes_sc_relax(inst, 0.1);
  Rng rng(814);
  for (int k = 0; k < 2000; ++k) {
    const Eigen::VectorXd pt = random_point(rng, 4, -2, 2);
    if (nlp_feasible(tight, pt)) CHECK(nlp_feasible(loose, pt));
  }
}

TEST_CASE("scholtes product relaxation of the complementarity lift") {
  const MpocProblem base = bench::example41();
  const MpccInstance inst = to_mpcc(base);
  const NlpSpec relaxed = scholtes_cc_relax(inst, 1.0);
  CHECK(relaxed.ineq.size() == base.g.size() + 5 * base.q());  // m + 5q
  CHECK(relaxed.eq.size() == base.h.size());

  // t = 0 restores exact complementarity on the slack pair.
  const NlpSpec exact = scholtes_cc_relax(inst, 0.0);
  const Eigen::VectorXd wGood{{-1.0, -1.0, 0.0, 0.5}};
  const Eigen::VectorXd wBad{{-1.0, -1.0, 0.2, 0.5}};
  CHECK(nlp_feasible(exact, wGood));
  CHECK_FALSE(nlp_feasible(exact, wBad));
  CHECK(nlp_feasible(scholtes_cc_relax(inst, 0.2), wBad));
}

TEST_CASE("direct relaxation families") {
  const MpocProblem p = bench::example51();
  const NlpSpec fb = direct_relax(p, DirectVariant::Fb, 0.04);
  REQUIRE(fb.ineq.size() == 1);
  // x1 + x2 - sqrt(x1^2 + x2^2 + 0.08) at (1, 1).
  CHECK(fb.ineq[0].value(Eigen::VectorXd{{1.0, 1.0}}) ==
        doctest::Approx(2 - std::sqrt(2.08)).epsilon(1e-14));

  // X(phi^0) = X on samples.
  const NlpSpec fb0 = direct_relax(p, DirectVariant::Fb, 0.0);
  const NlpSpec ks0 = direct_relax(p, DirectVariant::Ks, 0.0);
  Rng rng(815);
  for (int k = 0; k < 10000; ++k) {
    const Eigen::VectorXd x = random_point(rng, 2, -3, 3);
    const bool mpoc = feasibility(p, x).maxViolation == 0;
    CHECK(nlp_feasible(fb0, x) == mpoc);
    CHECK(nlp_feasible(ks0, x) == mpoc);
  }

  // X(phi_fb^t) = X(phi_ks^t) for t = 0.01.
  const NlpSpec fbT = direct_relax(p, DirectVariant::Fb, 0.01);
  const NlpSpec ksT = direct_relax(p, DirectVariant::Ks, 0.01);
  for (int k = 0; k < 10000; ++k) {
    const Eigen::VectorXd x = random_point(rng, 2, -3, 3);
    CHECK(nlp_feasible(fbT, x) == nlp_feasible(ksT, x));
  }
}

TEST_CASE("relaxed feasible sets are nested and collapse to X") {
  const MpocProblem p = bench::example51();
  const double ts[] = {1.0, 1e-2, 1e-4, 1e-6, 1e-8};
  Rng rng(816);
  for (const auto variant : {DirectVariant::Fb, DirectVariant::Ks}) {
    std::vector<NlpSpec> family;
    for (const double t : ts) family.push_back(direct_relax(p, variant, t));
    for (int k = 0; k < 5000; ++k) {
      const Eigen::VectorXd x = random_point(rng, 2, -3, 3);
      // Nesting: membership at smaller t implies membership at larger t.
      for (std::size_t i = 1; i < family.size(); ++i)
        if (nlp_feasible(family[i], x)) CHECK(nlp_feasible(family[i - 1], x));
      // Intersection over the grid agrees with MPOC feasibility (up to the
      // smallest tested t).
      bool inAll = true;
      for (const auto& spec : family) inAll = inAll && nlp_feasible(spec, x);
      const bool mpoc = feasibility(p, x).maxViolation == 0;
      if (mpoc) CHECK(inAll);
      if (inAll) CHECK(feasibility(p, x).maxViolation <= 2e-4);  // sqrt(1e-8) scale
    }
  }
}

TEST_CASE("gradients of every built NlpSpec pass the finite-difference check") {
  const MpocProblem base = bench::build_disjunctive().problem;
  Rng rng(817);
  std::vector<Eigen::VectorXd> probes5, probes7;
  for (int k = 0; k < 8; ++k) {
    probes5.push_back(random_point(rng, 5, -2, 2));
    probes7.push_back(random_point(rng, 7, -2, 2));
  }
  const auto check_spec = [&](const NlpSpec& spec,
                              const std::vector<Eigen::VectorXd>& probes) {
    CHECK(grad_check_fn(spec.objective, probes) <= 1e-5);
    for (const auto& c : spec.ineq) CHECK(grad_check_fn(c, probes) <= 1e-5);
    for (const auto& c : spec.eq) CHECK(grad_check_fn(c, probes) <= 1e-5);
  };
  check_spec(ncp_reformulate(base), probes5);
  check_spec(direct_relax(base, DirectVariant::Fb, 0.01), probes5);
  check_spec(direct_relax(base, DirectVariant::Ks, 0.01), probes5);
  check_spec(scholtes_sc_relax(to_mpsc(base), 0.01), probes7);
  check_spec(scholtes_cc_relax(to_mpcc(base), 0.01), probes7);
}
