#pragma once

#include <cstdint>
#include <functional>

#include "orcon/model.hpp"
#include "orcon/nlp.hpp"

namespace orcon::bench {

/// A benchmark problem together with its seeded starting-point sampler
/// (start index -> point, independent of evaluation order).
struct BenchmarkInstance {
  MpocProblem problem;
  std::function<Eigen::VectorXd(std::uint64_t seed, int index)> sampleStart;
};

/// min (x1-1)^2 s.t. x1 <= 0 or x2 <= 0.
MpocProblem example41();
/// min 0.5 (x1-1)^2 + 0.5 (x2-1)^2 s.t. x1 <= 0 or x2 <= 0.
MpocProblem example51();

/// The five-variable disjunctive program: quadratic objective, five
/// inequalities and the single or-pair (u, v); minimum value 9 at
/// x = (0,0,0) (with u >= 4, v = 0). Starts: x in [0,4]^3, u,v in [-1,0].
BenchmarkInstance build_disjunctive();

/// Gap-domain program: sum (x_l - a_l)^2, sum x_l <= budget, and
/// x_l <= 0 or x_l >= 1 per variable (or-pair (x_l, 1 - x_l)). a must be
/// ascending in [0,1]. knownOptimum is filled from the top-k closed form
/// only when exactly round(budget) entries of a exceed 0.5, which makes
/// the formula provably optimal. Starts: [-1,2]^n.
BenchmarkInstance build_gap_domain(int n, double budget, const Eigen::VectorXd& a);

/// Ascending random vector in [0,1]^n with exactly k entries above 0.5.
Eigen::VectorXd gap_domain_vector(int n, int k, std::uint64_t seed);

struct BruteForceResult {
  double fMin = 0;
  Eigen::VectorXd minimizer;
};

/// Enumerates all 2^n branch patterns and solves each separable clamped
/// quadratic exactly (water-filling on the budget constraint). n <= 12.
BruteForceResult gap_domain_bruteforce(int n, double budget, const Eigen::VectorXd& a);

struct HeatGridConfig {
  int gridNodes = 8;   // cell-centered nodes per axis on (-1,1)^2
  int timeSteps = 24;  // implicit Euler steps on (0,6)
  double alpha = 1e-6;
  double beta = 1e-5;
  std::uint64_t seed = 0;

  int timeNodes() const { return timeSteps + 1; }
  int controlDim() const { return 2 * timeNodes(); }
  double dt() const { return 6.0 / timeSteps; }
};

/// The state-eliminated objective 0.5 c'Qc + b'c + c0 over stacked controls
/// c = (u_0..u_nt, v_0..v_nt).
struct HeatQuadratic {
  Eigen::MatrixXd Q;
  Eigen::VectorXd b;
  double c0 = 0;
};

/// Assembles the heat-control objective by simulating the unit response of
/// each control basis vector (OpenMP across columns when parallel is true;
/// the result is identical either way).
HeatQuadratic build_heat_quadratic(const HeatGridConfig& cfg, bool parallel = true);

/// Or-constrained heat control benchmark: tracking + Tikhonov + smoothing
/// objective as an explicit convex quadratic, one or-pair (-u_i, -v_i) per
/// time node (u >= 0 or v >= 0). Starts: [-10,10]^dim.
BenchmarkInstance build_heat_control(const HeatGridConfig& cfg);

/// Simulate-then-evaluate objective oracle (independent of the assembled
/// quadratic): runs the implicit Euler scheme on the given controls and
/// integrates tracking and regularization terms directly.
double heat_objective_direct(const HeatGridConfig& cfg, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v);

/// Nodal samples of the desired controls on the cfg time grid, stacked
/// (u_d, v_d).
Eigen::VectorXd heat_desired_controls(const HeatGridConfig& cfg);

/// Discrete state trajectory (column m = state after step m, m = 1..nt).
Eigen::MatrixXd heat_simulate(const HeatGridConfig& cfg, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v);

struct HeatCoarseEstimate {
  double fEstimate = 0;           // best coarse objective value
  Eigen::VectorXd fineControls;   // interpolated onto the fine grid
};

/// Enumerates all or-branch sign patterns of a coarse time grid, solves the
/// convex quadratic per pattern, and lifts the best solution to the fine
/// grid by linear interpolation (clamping any fine node the interpolation
/// left infeasible). Throws TooLarge when 2^timeNodes exceeds capPatterns.
HeatCoarseEstimate heat_coarse_global_estimate(const HeatGridConfig& coarse,
                                               const HeatGridConfig& fine,
                                               std::uint64_t capPatterns = 1u << 17);

}  // namespace orcon::bench
