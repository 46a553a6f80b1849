#include <doctest.h>

#include <Eigen/QR>
#include <limits>

#include "orcon/analysis.hpp"
#include "orcon/bench.hpp"
#include "orcon/errors.hpp"
#include "orcon/nnls.hpp"
#include "support.hpp"

using namespace orcon;

namespace {

// Exhaustive oracle for small NNLS problems: tries every subset of columns
// as the strictly-positive set, solves the restricted least squares, and
// keeps the best feasible KKT candidate.
double nnls_bruteforce(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int nc = static_cast<int>(a.cols());
  double best = b.norm();  // empty subset
  for (std::uint32_t mask = 1; mask < (1u << nc); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < nc; ++j)
      if (mask & (1u << j)) idx.push_back(j);
    Eigen::MatrixXd sub(a.rows(), idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(k) = a.col(idx[k]);
    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    if ((z.array() < -1e-12).any()) continue;
    best = std::min(best, (sub * z - b).norm());
  }
  return best;
}

}  // namespace

TEST_CASE("nnls_residual matches the frozen examples") {
  Eigen::MatrixXd n1(2, 1);
  n1 << 1, 0;
  const Eigen::MatrixXd empty(2, 0);

  const auto exact = nnls_residual(n1, empty, Eigen::Vector2d(-2, 0));
  CHECK(exact.alpha[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(exact.residualNorm == doctest::Approx(0.0).epsilon(1e-14));

  const auto blocked = nnls_residual(n1, empty, Eigen::Vector2d(2, 0));
  CHECK(blocked.alpha[0] == 0);
  CHECK(blocked.residualNorm == doctest::Approx(2.0).epsilon(1e-14));

  Eigen::MatrixXd n2 = Eigen::MatrixXd::Identity(2, 2);
  const auto both = nnls_residual(n2, empty, Eigen::Vector2d(-1, -1));
  CHECK(both.alpha[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(both.alpha[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(both.residualNorm == doctest::Approx(0.0).epsilon(1e-14));

  // Empty column sets: residual is the target norm.
  const auto none = nnls_residual(empty, empty, Eigen::Vector2d(3, 4));
  CHECK(none.residualNorm == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("nnls_residual agrees with active-set enumeration") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + static_cast<int>(rng.index(4));
    const int cols = 1 + static_cast<int>(rng.index(5));
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd t(rows);
    for (int i = 0; i < rows; ++i) {
      t[i] = rng.uniform(-2, 2);
      for (int j = 0; j < cols; ++j) a(i, j) = rng.uniform(-2, 2);
    }
    const auto r = nnls_residual(a, Eigen::MatrixXd(rows, 0), t);
    const double oracle = nnls_bruteforce(a, -t);
    CHECK(r.residualNorm == doctest::Approx(oracle).epsilon(1e-9));
    CHECK((r.alpha.array() >= 0).all());
  }
}

TEST_CASE("nnls_residual with a free block") {
  Rng rng(405);
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = 3 + static_cast<int>(rng.index(3));
    Eigen::MatrixXd n(rows, 2), f(rows, 1);
    Eigen::VectorXd t(rows);
    for (int i = 0; i < rows; ++i) {
      t[i] = rng.uniform(-2, 2);
      f(i, 0) = rng.uniform(-2, 2);
      n(i, 0) = rng.uniform(-2, 2);
      n(i, 1) = rng.uniform(-2, 2);
    }
    const auto r = nnls_residual(n, f, t);
    // Dense scan over the free coefficient: no beta does better.
    for (double beta = -4; beta <= 4; beta += 0.05) {
      const Eigen::VectorXd shifted = t + f * Eigen::VectorXd::Constant(1, beta);
      const double alt = nnls_bruteforce(n, -shifted);
      CHECK(r.residualNorm <= alt + 1e-8);
    }
  }
}

TEST_CASE("active pattern on the worked examples") {
  const MpocProblem ex41 = bench::example41();
  const OrActivePattern atOrigin = active_pattern(ex41, Eigen::VectorXd{{0.0, 0.0}}, 1e-8);
  CHECK(atOrigin.i00 == std::vector<int>{0});
  CHECK(atOrigin.i0P.empty());
  CHECK(atOrigin.activeOr() == std::vector<int>{0});

  const OrActivePattern up = active_pattern(ex41, Eigen::VectorXd{{0.0, 1.0}}, 1e-8);
  CHECK(up.i0P == std::vector<int>{0});
  CHECK(up.i00.empty());

  const MpocProblem ex51 = bench::example51();
  const OrActivePattern right = active_pattern(ex51, Eigen::VectorXd{{1.0, 0.0}}, 1e-8);
  CHECK(right.iP0 == std::vector<int>{0});

  CHECK_THROWS_AS(active_pattern(ex41, Eigen::VectorXd{{1.0, 1.0}}, 1e-8),
                  InfeasiblePoint);
}

TEST_CASE("pattern partitions the or-pair index set") {
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = test::make_stationary_instance(9000 + trial, StatClass::M);
    const OrActivePattern pat = active_pattern(inst.problem, inst.xbar, 1e-7);
    const std::size_t total = pat.iM0.size() + pat.i0M.size() + pat.iMP.size() +
                              pat.iPM.size() + pat.i0P.size() + pat.iP0.size() +
                              pat.iMM.size() + pat.i00.size();
    CHECK(total == static_cast<std::size_t>(inst.problem.q()));
  }
}

TEST_CASE("certify_mpoc on the toy program") {
  const MpocProblem p = bench::example41();
  const Eigen::VectorXd origin{{0.0, 0.0}};

  const auto certM = certify_mpoc(p, origin, StatClass::M);
  CHECK(certM.holds);
  CHECK(certM.residualNorm <= 1e-12);
  REQUIRE(certM.mu.size() == 1);
  CHECK(certM.mu[0].second == doctest::Approx(2.0).epsilon(1e-12));
  const double nuAtOrigin = certM.nu.empty() ? 0.0 : certM.nu[0].second;
  CHECK(nuAtOrigin == doctest::Approx(0.0).epsilon(1e-12));

  const auto certS = certify_mpoc(p, origin, StatClass::S);
  CHECK_FALSE(certS.holds);
  CHECK(certS.residualNorm == doctest::Approx(2.0).epsilon(1e-12));

  const auto certW = certify_mpoc(p, origin, StatClass::W);
  CHECK(certW.holds);
}

TEST_CASE("certify_mpoc on the relaxation example") {
  const MpocProblem p = bench::example51();
  const Eigen::VectorXd origin{{0.0, 0.0}};

  const auto certW = certify_mpoc(p, origin, StatClass::W);
  CHECK(certW.holds);
  REQUIRE(certW.mu.size() == 1);
  REQUIRE(certW.nu.size() == 1);
  CHECK(certW.mu[0].second == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(certW.nu[0].second == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_FALSE(certify_mpoc(p, origin, StatClass::M).holds);
  CHECK_FALSE(certify_mpoc(p, origin, StatClass::S).holds);

  // The global minimizers are S-stationary.
  CHECK(certify_mpoc(p, Eigen::VectorXd{{1.0, 0.0}}, StatClass::S).holds);
  CHECK(certify_mpoc(p, Eigen::VectorXd{{0.0, 1.0}}, StatClass::S).holds);

  CHECK_THROWS_AS(certify_mpoc(p, Eigen::VectorXd{{0.5, 0.5}}, StatClass::W),
                  InfeasiblePoint);
}

TEST_CASE("constructed stationary instances certify their class") {
  for (int trial = 0; trial < 50; ++trial) {
    for (const StatClass cls : {StatClass::W, StatClass::M, StatClass::S}) {
      const auto inst = test::make_stationary_instance(
          3000 + 10 * trial + static_cast<int>(cls), cls);
      const auto cert = certify_mpoc(inst.problem, inst.xbar, cls, 1e-6, 1e-8);
      CHECK(cert.holds);
      CHECK(cert.residualNorm <= 1e-8);
    }
  }
}

TEST_CASE("class monotonicity S => M => W") {
  for (int trial = 0; trial < 40; ++trial) {
    const StatClass drawn =
        trial % 3 == 0 ? StatClass::S : (trial % 3 == 1 ? StatClass::M : StatClass::W);
    const auto inst = test::make_stationary_instance(7000 + trial, drawn);
    const bool s = certify_mpoc(inst.problem, inst.xbar, StatClass::S).holds;
    const bool m = certify_mpoc(inst.problem, inst.xbar, StatClass::M).holds;
    const bool w = certify_mpoc(inst.problem, inst.xbar, StatClass::W).holds;
    if (s) CHECK(m);
    if (m) CHECK(w);
  }
}

TEST_CASE("certificates are invariant under positive rescaling") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = test::make_stationary_instance(8800 + trial, StatClass::M);
    MpocProblem scaled = inst.problem;
    const double factor = 0.1 + 3.0 * (trial % 5);
    for (auto& [gFn, hFn] : scaled.orPairs) {
      const SmoothFn orig = gFn;
      gFn = {orig.dim,
             [orig, factor](const Eigen::VectorXd& x) { return factor * orig.value(x); },
             [orig, factor](const Eigen::VectorXd& x) -> Eigen::VectorXd {
               return factor * orig.gradient(x);
             }};
    }
    for (const StatClass cls : {StatClass::W, StatClass::M, StatClass::S}) {
      const bool a = certify_mpoc(inst.problem, inst.xbar, cls, 1e-6, 1e-8).holds;
      const bool b = certify_mpoc(scaled, inst.xbar, cls, 1e-6, 1e-8).holds;
      CHECK(a == b);
    }
  }
}

TEST_CASE("certify_mpsc on the switching surrogate of the toy program") {
  // Variables (x1, x2, y, z): min (x1-1)^2 s.t. y,z <= 0, (x1-y)(x2-z) = 0.
  SwitchingProblem sc;
  sc.n = 4;
  sc.name = "toy-sc";
  sc.f = {4,
          [](const Eigen::VectorXd& w) { return (w[0] - 1) * (w[0] - 1); },
          [](const Eigen::VectorXd& w) {
            return Eigen::VectorXd{{2 * (w[0] - 1), 0.0, 0.0, 0.0}};
          }};
  sc.g.push_back(linear_fn(Eigen::VectorXd{{0.0, 0.0, 1.0, 0.0}}, 0.0));
  sc.g.push_back(linear_fn(Eigen::VectorXd{{0.0, 0.0, 0.0, 1.0}}, 0.0));
  sc.pairs.emplace_back(linear_fn(Eigen::VectorXd{{1.0, 0.0, -1.0, 0.0}}, 0.0),
                        linear_fn(Eigen::VectorXd{{0.0, 1.0, 0.0, -1.0}}, 0.0));

  // The two lifted points called out in the worked example are
  // M_SC-stationary (here even S_SC: the biactive set is empty).
  for (const auto& pt : {Eigen::VectorXd{{0.0, 0.0, 0.0, -2.0}},
                         Eigen::VectorXd{{0.0, -1.0, 0.0, -2.0}}}) {
    const auto certM = certify_mpsc(sc, pt, StatClass::M);
    CHECK(certM.holds);
    CHECK(certM.residualNorm <= 1e-10);
    CHECK(certify_mpsc(sc, pt, StatClass::S).holds);
    CHECK(certify_mpsc(sc, pt, StatClass::W).holds);
  }

  CHECK_THROWS_AS(certify_mpsc(sc, Eigen::VectorXd{{1.0, 1.0, -1.0, -2.0}}, StatClass::W),
                  InfeasiblePoint);
}

TEST_CASE("LICQ and MFCQ checks") {
  const MpocProblem ex51 = bench::example51();
  const Eigen::VectorXd origin{{0.0, 0.0}};
  const CqReport licq = check_mpoc_licq(ex51, origin);
  CHECK(licq.mpocLicq);

  const CqReport mfcq = check_mpoc_mfcq(ex51, origin);
  CHECK(mfcq.mpocMfcq);

  // Duplicated or-pair at a biactive point: repeated columns defeat LICQ.
  MpocProblem dup = bench::example41();
  dup.orPairs.push_back(dup.orPairs[0]);
  CHECK_FALSE(check_mpoc_licq(dup, origin).mpocLicq);

  // Example 4.1 at the origin keeps MFCQ: (1,0) and (0,1) only cancel
  // trivially under nonnegative coefficients.
  CHECK(check_mpoc_mfcq(bench::example41(), origin).mpocMfcq);

  // A pair G = x1, H = -x1 at a biactive point puts v and -v into the
  // nonneg family: MFCQ must fail with a witness.
  MpocProblem cancel;
  cancel.n = 2;
  cancel.f = constant_fn(2, 0.0);
  cancel.orPairs.emplace_back(linear_fn(Eigen::VectorXd{{1.0, 0.0}}, 0.0),
                              linear_fn(Eigen::VectorXd{{-1.0, 0.0}}, 0.0));
  const CqReport pld = check_mpoc_mfcq(cancel, origin);
  CHECK_FALSE(pld.mpocMfcq);
  REQUIRE(pld.pldWitness.has_value());

  // Unconstrained problem: both hold vacuously.
  MpocProblem empty;
  empty.n = 3;
  empty.f = constant_fn(3, 0.0);
  const CqReport vac = check_mpoc_licq(empty, Eigen::VectorXd::Zero(3));
  CHECK(vac.mpocLicq);
  CHECK(vac.smallestSingularValue == std::numeric_limits<double>::infinity());
  CHECK(check_mpoc_mfcq(empty, Eigen::VectorXd::Zero(3)).mpocMfcq);
}

TEST_CASE("LICQ implies MFCQ on random instances") {
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = test::make_stationary_instance(6100 + trial, StatClass::W);
    const bool licq = check_mpoc_licq(inst.problem, inst.xbar, 1e-7).mpocLicq;
    const bool mfcq = check_mpoc_mfcq(inst.problem, inst.xbar, 1e-7).mpocMfcq;
    if (licq) CHECK(mfcq);
  }
}
