#include "orcon/bench.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "orcon/errors.hpp"
#include "orcon/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orcon::bench {

namespace {

SmoothFn fn(int dim, std::function<double(const Eigen::VectorXd&)> v,
            std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g) {
  return {dim, std::move(v), std::move(g)};
}

SmoothFn coord(int dim, int idx, double sign = 1.0, double offset = 0.0) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(dim);
  a[idx] = sign;
  return linear_fn(a, offset);
}

}  // namespace

MpocProblem example41() {
  MpocProblem p;
  p.n = 2;
  p.name = "example41";
  p.f = fn(2, [](const Eigen::VectorXd& x) { return (x[0] - 1) * (x[0] - 1); },
           [](const Eigen::VectorXd& x) {
             return Eigen::VectorXd{{2 * (x[0] - 1), 0.0}};
           });
  p.orPairs.emplace_back(coord(2, 0), coord(2, 1));
  p.knownOptimum = KnownOptimum{0.0, Eigen::VectorXd{{1.0, 0.0}}};
  return p;
}

MpocProblem example51() {
  MpocProblem p;
  p.n = 2;
  p.name = "example51";
  p.f = fn(2,
           [](const Eigen::VectorXd& x) {
             return 0.5 * (x[0] - 1) * (x[0] - 1) + 0.5 * (x[1] - 1) * (x[1] - 1);
           },
           [](const Eigen::VectorXd& x) {
             return Eigen::VectorXd{{x[0] - 1, x[1] - 1}};
           });
  p.orPairs.emplace_back(coord(2, 0), coord(2, 1));
  p.knownOptimum = KnownOptimum{0.5, Eigen::VectorXd{{1.0, 0.0}}};
  return p;
}

BenchmarkInstance build_disjunctive() {
  MpocProblem p;
  p.n = 5;  // (x1, x2, x3, u, v)
  p.name = "disjunctive";
  p.f = fn(5,
           [](const Eigen::VectorXd& x) {
             return (x[0] - 1) * (x[0] - 1) + (x[1] - 2) * (x[1] - 2) +
                    (x[2] + 2) * (x[2] + 2);
           },
           [](const Eigen::VectorXd& x) {
             return Eigen::VectorXd{
                 {2 * (x[0] - 1), 2 * (x[1] - 2), 2 * (x[2] + 2), 0.0, 0.0}};
           });
  p.g.push_back(fn(5,
                   [](const Eigen::VectorXd& x) { return 4 - x[0] - x[3]; },
                   [](const Eigen::VectorXd&) {
                     return Eigen::VectorXd{{-1.0, 0.0, 0.0, -1.0, 0.0}};
                   }));
  p.g.push_back(fn(5,
                   [](const Eigen::VectorXd& x) {
                     return 5 - x[0] - (x[1] - 2) * (x[1] - 2) -
                            (x[2] + 2) * (x[2] + 2) - x[3];
                   },
                   [](const Eigen::VectorXd& x) {
                     return Eigen::VectorXd{
                         {-1.0, -2 * (x[1] - 2), -2 * (x[2] + 2), -1.0, 0.0}};
                   }));
  p.g.push_back(fn(5,
                   [](const Eigen::VectorXd& x) {
                     return x[0] * x[0] + x[1] * x[1] - x[2] - x[4];
                   },
                   [](const Eigen::VectorXd& x) {
                     return Eigen::VectorXd{{2 * x[0], 2 * x[1], -1.0, 0.0, -1.0}};
                   }));
  p.g.push_back(fn(5,
                   [](const Eigen::VectorXd& x) {
                     return 1 - (x[0] - 1) * (x[0] - 1) - x[1] * x[1] - x[2] - x[4];
                   },
                   [](const Eigen::VectorXd& x) {
                     return Eigen::VectorXd{
                         {-2 * (x[0] - 1), -2 * x[1], -1.0, 0.0, -1.0}};
                   }));
  p.g.push_back(fn(5, [](const Eigen::VectorXd& x) { return x[1] - x[4]; },
                   [](const Eigen::VectorXd&) {
                     return Eigen::VectorXd{{0.0, 1.0, 0.0, 0.0, -1.0}};
                   }));
  p.orPairs.emplace_back(coord(5, 3), coord(5, 4));
  p.knownOptimum = KnownOptimum{9.0, Eigen::VectorXd{{0.0, 0.0, 0.0, 4.0, 0.0}}};

  BenchmarkInstance inst;
  inst.problem = std::move(p);
  inst.sampleStart = [](std::uint64_t seed, int index) {
    Rng rng(mix_seed(seed, index));
    Eigen::VectorXd x(5);
    for (int i = 0; i < 3; ++i) x[i] = rng.uniform(0, 4);
    x[3] = rng.uniform(-1, 0);
    x[4] = rng.uniform(-1, 0);
    return x;
  };
  return inst;
}

BenchmarkInstance build_gap_domain(int n, double budget, const Eigen::VectorXd& a) {
  if (n <= 0 || n % 2 != 0)
    throw InvalidArgument("build_gap_domain: n must be a positive even integer");
  if (a.size() != n) throw InvalidArgument("build_gap_domain: a has wrong length");
  for (int l = 0; l < n; ++l) {
    if (a[l] < 0 || a[l] > 1)
      throw InvalidArgument("build_gap_domain: invalid-a (entry out of [0,1])");
    if (l > 0 && a[l] < a[l - 1])
      throw InvalidArgument("build_gap_domain: invalid-a (not ascending)");
  }

  MpocProblem p;
  p.n = n;
  p.name = "gap_domain";
  const Eigen::VectorXd aCopy = a;
  p.f = fn(n,
           [aCopy](const Eigen::VectorXd& x) { return (x - aCopy).squaredNorm(); },
           [aCopy](const Eigen::VectorXd& x) -> Eigen::VectorXd {
             return 2 * (x - aCopy);
           });
  p.g.push_back(linear_fn(Eigen::VectorXd::Ones(n), -budget));
  for (int l = 0; l < n; ++l)
    p.orPairs.emplace_back(coord(n, l), coord(n, l, -1.0, 1.0));  // (x_l, 1 - x_l)

  const int k = static_cast<int>(std::llround(budget));
  int above = 0;
  for (int l = 0; l < n; ++l)
    if (a[l] > 0.5) ++above;
  if (std::abs(budget - k) < 1e-12 && k >= 0 && k <= n && above == k) {
    double fMin = 0;
    Eigen::VectorXd xOpt = Eigen::VectorXd::Zero(n);
    for (int l = 0; l < n - k; ++l) fMin += a[l] * a[l];
    for (int l = n - k; l < n; ++l) {
      fMin += (1 - a[l]) * (1 - a[l]);
      xOpt[l] = 1.0;
    }
    p.knownOptimum = KnownOptimum{fMin, xOpt};
  }

  BenchmarkInstance inst;
  inst.problem = std::move(p);
  inst.sampleStart = [n](std::uint64_t seed, int index) {
    Rng rng(mix_seed(seed, index));
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1, 2);
    return x;
  };
  return inst;
}

Eigen::VectorXd gap_domain_vector(int n, int k, std::uint64_t seed) {
  if (k < 0 || k > n) throw InvalidArgument("gap_domain_vector: bad k");
  Rng rng(seed);
  std::vector<double> v(n);
  for (int i = 0; i < n - k; ++i) v[i] = 0.5 * rng.uniform();
  for (int i = n - k; i < n; ++i) {
    double u;
    do {
      u = 0.5 + 0.5 * rng.uniform();
    } while (u <= 0.5);
    v[i] = u;
  }
  std::sort(v.begin(), v.end());
  return Eigen::Map<Eigen::VectorXd>(v.data(), n);
}

namespace {

// Separable clamped quadratic over one branch pattern: minimize
// sum (x_l - a_l)^2 subject to sum x <= budget and x_l in its half-line.
// theta is the budget multiplier; x_l(theta) clamps a_l - theta to the
// branch.
double pattern_value(const Eigen::VectorXd& a, double budget, std::uint32_t pattern,
                     Eigen::VectorXd& x) {
  const int n = static_cast<int>(a.size());
  const auto xOf = [&](double theta) {
    Eigen::VectorXd xv(n);
    for (int l = 0; l < n; ++l) {
      const double t = a[l] - theta;
      xv[l] = (pattern >> l) & 1u ? std::max(t, 1.0) : std::min(t, 0.0);
    }
    return xv;
  };
  x = xOf(0.0);
  if (x.sum() <= budget + 1e-14) return (x - a).squaredNorm();
  double lo = 0.0, hi = a.cwiseAbs().maxCoeff() + std::abs(budget) + n + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (xOf(mid).sum() > budget ? lo : hi) = mid;
  }
  x = xOf(hi);
  return (x - a).squaredNorm();
}

}  // namespace

BruteForceResult gap_domain_bruteforce(int n, double budget, const Eigen::VectorXd& a) {
  if (n > 12) throw TooLarge("gap_domain_bruteforce: n must be <= 12");
  if (a.size() != n) throw InvalidArgument("gap_domain_bruteforce: a has wrong length");
  BruteForceResult best;
  best.fMin = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x(n);
  for (std::uint32_t pattern = 0; pattern < (1u << n); ++pattern) {
    const double f = pattern_value(a, budget, pattern, x);
    if (f < best.fMin) {
      best.fMin = f;
      best.minimizer = x;
    }
  }
  return best;
}

namespace {

struct HeatDiscretization {
  int nx, nCells, nt;
  double dx, dt;
  Eigen::LLT<Eigen::MatrixXd> stepFactor;  // I - dt*Laplacian
  Eigen::VectorXd chiU, chiV;              // source shapes including the 1/10 factor

  explicit HeatDiscretization(const HeatGridConfig& cfg) {
    nx = cfg.gridNodes;
    nCells = nx * nx;
    nt = cfg.timeSteps;
    dx = 2.0 / nx;
    dt = cfg.dt();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(nCells, nCells);
    const auto id = [this](int i, int j) { return j * nx + i; };
    for (int j = 0; j < nx; ++j)
      for (int i = 0; i < nx; ++i) {
        const int c = id(i, j);
        // Neumann ghost reflection: a missing neighbor contributes nothing.
        const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
        for (const auto& [ni, nj] : nb)
          if (ni >= 0 && ni < nx && nj >= 0 && nj < nx) {
            lap(c, id(ni, nj)) += 1.0 / (dx * dx);
            lap(c, c) -= 1.0 / (dx * dx);
          }
      }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(nCells, nCells) - dt * lap;
    stepFactor.compute(a);
    chiU = Eigen::VectorXd::Zero(nCells);
    chiV = Eigen::VectorXd::Zero(nCells);
    for (int j = 0; j < nx; ++j)
      for (int i = 0; i < nx; ++i) {
        const double cx = -1 + (i + 0.5) * dx;
        (cx <= 0 ? chiU : chiV)[id(i, j)] = 0.1;
      }
  }

  // States after steps 1..nt for nodal controls (u, v); the initial state
  // is zero and the implicit step uses the control at the new time node.
  Eigen::MatrixXd simulate(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    Eigen::MatrixXd traj(nCells, nt);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(nCells);
    for (int m = 0; m < nt; ++m) {
      y = stepFactor.solve(y + dt * (chiU * u[m + 1] + chiV * v[m + 1]));
      traj.col(m) = y;
    }
    return traj;
  }
};

Eigen::VectorXd heat_time_weights(const HeatGridConfig& cfg) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(cfg.timeNodes(), cfg.dt());
  w[0] *= 0.5;
  w[cfg.timeNodes() - 1] *= 0.5;
  return w;
}

}  // namespace

Eigen::VectorXd heat_desired_controls(const HeatGridConfig& cfg) {
  const int nodes = cfg.timeNodes();
  Eigen::VectorXd c(2 * nodes);
  for (int i = 0; i < nodes; ++i) {
    const double t = i * cfg.dt();
    c[i] = -20 * std::sin(M_PI * t / 3);
    c[nodes + i] = 10 * std::cos(M_PI * t / 2);
  }
  return c;
}

Eigen::MatrixXd heat_simulate(const HeatGridConfig& cfg, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v) {
  return HeatDiscretization(cfg).simulate(u, v);
}

double heat_objective_direct(const HeatGridConfig& cfg, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v) {
  const HeatDiscretization disc(cfg);
  const int nodes = cfg.timeNodes();
  const Eigen::VectorXd des = heat_desired_controls(cfg);
  const Eigen::MatrixXd yd = disc.simulate(des.head(nodes), des.tail(nodes));
  const Eigen::MatrixXd y = disc.simulate(u, v);
  const Eigen::VectorXd w = heat_time_weights(cfg);
  const double cell = disc.dx * disc.dx;

  double track = 0;  // step index m corresponds to time node m+1
  for (int m = 0; m < disc.nt; ++m)
    track += w[m + 1] * cell * (y.col(m) - yd.col(m)).squaredNorm();

  double tikhonov = 0;
  for (int i = 0; i < nodes; ++i) tikhonov += w[i] * (u[i] * u[i] + v[i] * v[i]);

  double smooth = 0;
  for (int i = 0; i + 1 < nodes; ++i) {
    const double du = u[i + 1] - u[i], dv = v[i + 1] - v[i];
    smooth += (du * du + dv * dv) / disc.dt;
  }
  return 0.5 * track + 0.5 * cfg.alpha * tikhonov + 0.5 * cfg.beta * smooth;
}

HeatQuadratic build_heat_quadratic(const HeatGridConfig& cfg, bool parallel) {
  if (cfg.gridNodes < 3 || cfg.timeSteps < 4 || cfg.alpha <= 0 || cfg.beta <= 0)
    throw InvalidArgument("build_heat_quadratic: invalid configuration");
  const HeatDiscretization disc(cfg);
  const int nodes = cfg.timeNodes();
  const int dim = 2 * nodes;
  const Eigen::VectorXd w = heat_time_weights(cfg);
  const double cell = disc.dx * disc.dx;

  // Weighted unit-response matrix: column j holds sqrt(w_m * cell) * y^m for
  // the j-th control basis vector, stacked over steps m = 1..nt.
  const int rows = disc.nCells * disc.nt;
  Eigen::MatrixXd resp(rows, dim);
  Eigen::VectorXd sqrtW(disc.nt);
  for (int m = 0; m < disc.nt; ++m) sqrtW[m] = std::sqrt(w[m + 1] * cell);

  const auto fillColumn = [&](int j) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(nodes), v = Eigen::VectorXd::Zero(nodes);
    (j < nodes ? u[j] : v[j - nodes]) = 1.0;
    const Eigen::MatrixXd traj = disc.simulate(u, v);
    for (int m = 0; m < disc.nt; ++m)
      resp.col(j).segment(m * disc.nCells, disc.nCells) = sqrtW[m] * traj.col(m);
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < dim; ++j) fillColumn(j);
  } else {
    for (int j = 0; j < dim; ++j) fillColumn(j);
  }

  const Eigen::VectorXd des = heat_desired_controls(cfg);
  const Eigen::MatrixXd ydTraj = disc.simulate(des.head(nodes), des.tail(nodes));
  Eigen::VectorXd yd(rows);
  for (int m = 0; m < disc.nt; ++m)
    yd.segment(m * disc.nCells, disc.nCells) = sqrtW[m] * ydTraj.col(m);

  HeatQuadratic quad;
  quad.Q = resp.transpose() * resp;
  quad.b = -resp.transpose() * yd;
  quad.c0 = 0.5 * yd.squaredNorm();

  // Tikhonov block (trapezoid in time) on both control groups.
  for (int i = 0; i < nodes; ++i) {
    quad.Q(i, i) += cfg.alpha * w[i];
    quad.Q(nodes + i, nodes + i) += cfg.alpha * w[i];
  }
  // Difference-quotient smoothing block.
  for (int off : {0, nodes})
    for (int i = 0; i + 1 < nodes; ++i) {
      const double c = cfg.beta / disc.dt;
      quad.Q(off + i, off + i) += c;
      quad.Q(off + i + 1, off + i + 1) += c;
      quad.Q(off + i, off + i + 1) -= c;
      quad.Q(off + i + 1, off + i) -= c;
    }
  return quad;
}

BenchmarkInstance build_heat_control(const HeatGridConfig& cfg) {
  const HeatQuadratic quad = build_heat_quadratic(cfg);
  const int nodes = cfg.timeNodes();
  const int dim = 2 * nodes;

  MpocProblem p;
  p.n = dim;
  p.name = "heat_control";
  p.f = quadratic_fn(quad.Q, quad.b, quad.c0);
  for (int i = 0; i < nodes; ++i)
    p.orPairs.emplace_back(coord(dim, i, -1.0), coord(dim, nodes + i, -1.0));

  BenchmarkInstance inst;
  inst.problem = std::move(p);
  inst.sampleStart = [dim](std::uint64_t seed, int index) {
    Rng rng(mix_seed(seed, index));
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.uniform(-10, 10);
    return x;
  };
  return inst;
}

HeatCoarseEstimate heat_coarse_global_estimate(const HeatGridConfig& coarse,
                                               const HeatGridConfig& fine,
                                               std::uint64_t capPatterns) {
  const int nodes = coarse.timeNodes();
  if (nodes > 62 || (1ULL << nodes) > capPatterns)
    throw TooLarge("heat_coarse_global_estimate: 2^" + std::to_string(nodes) +
                   " patterns exceed the cap");
  const HeatQuadratic quad = build_heat_quadratic(coarse);
  const int dim = 2 * nodes;

  double bestF = std::numeric_limits<double>::infinity();
  Eigen::VectorXd bestC;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim);
  for (std::uint64_t pattern = 0; pattern < (1ULL << nodes); ++pattern) {
    NlpSpec spec;
    spec.n = dim;
    spec.objective = quadratic_fn(quad.Q, quad.b, quad.c0);
    for (int i = 0; i < nodes; ++i) {
      const int idx = (pattern >> i) & 1u ? i : nodes + i;
      spec.ineq.push_back(coord(dim, idx, -1.0));  // u_i >= 0 or v_i >= 0
    }
    spec.name = "heat-coarse-branch";
    const NlpSolution sol = solve_nlp(spec, zero, 1e-8, 300);
    if (sol.status == NlpStatus::Converged && sol.fValue < bestF) {
      bestF = sol.fValue;
      bestC = sol.x;
    }
  }

  // Lift nodal values by linear interpolation in time, then clamp the
  // smaller-magnitude control at any fine node the interpolation left with
  // both controls negative.
  const int fineNodes = fine.timeNodes();
  Eigen::VectorXd fineC(2 * fineNodes);
  const auto interp = [&](const Eigen::VectorXd& nodal, double t) {
    const double pos = t / coarse.dt();
    const int i0 = std::min(static_cast<int>(pos), nodes - 2);
    const double s = pos - i0;
    return (1 - s) * nodal[i0] + s * nodal[i0 + 1];
  };
  const Eigen::VectorXd uC = bestC.head(nodes), vC = bestC.tail(nodes);
  for (int i = 0; i < fineNodes; ++i) {
    const double t = i * fine.dt();
    double u = interp(uC, t), v = interp(vC, t);
    if (u < 0 && v < 0) {
      (std::abs(u) <= std::abs(v) ? u : v) = 0.0;
    }
    fineC[i] = u;
    fineC[fineNodes + i] = v;
  }
  return {bestF, fineC};
}

}  // namespace orcon::bench
