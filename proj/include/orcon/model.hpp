#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orcon {

/// A continuously differentiable function R^n -> R with a user-supplied
/// analytic gradient. Evaluators must be pure; the library may call them
/// from several threads at once.
struct SmoothFn {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

/// Builds a SmoothFn for x -> c (zero gradient).
SmoothFn constant_fn(int dim, double c);

/// Builds a SmoothFn for x -> a.x + c.
SmoothFn linear_fn(Eigen::VectorXd a, double c);

/// Builds a SmoothFn for x -> 0.5 x'Qx + b.x + c with Q symmetric.
SmoothFn quadratic_fn(Eigen::MatrixXd q, Eigen::VectorXd b, double c);

struct KnownOptimum {
  double fMin = 0;
  std::optional<Eigen::VectorXd> minimizer;
};

/// An or-constrained program: min f s.t. g <= 0, h = 0 and, for every pair
/// (G_l, H_l), G_l(x) <= 0 or H_l(x) <= 0.
struct MpocProblem {
  int n = 0;
  SmoothFn f;
  std::vector<SmoothFn> g;
  std::vector<SmoothFn> h;
  std::vector<std::pair<SmoothFn, SmoothFn>> orPairs;
  std::string name;
  std::optional<KnownOptimum> knownOptimum;

  int m() const { return static_cast<int>(g.size()); }
  int p() const { return static_cast<int>(h.size()); }
  int q() const { return static_cast<int>(orPairs.size()); }
};

struct FeasibilityReport {
  Eigen::VectorXd gViolation;   // max(0, g_i(x))
  Eigen::VectorXd hViolation;   // |h_j(x)|
  Eigen::VectorXd orViolation;  // max(0, min(G_l(x), H_l(x)))
  double maxViolation = 0;

  bool feasible(double eps) const { return maxViolation <= eps; }
};

/// Componentwise constraint violations at x. Throws DimensionMismatch.
FeasibilityReport feasibility(const MpocProblem& problem, const Eigen::VectorXd& x);

struct GradCheckEntry {
  std::string name;
  double worstRelError = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double worst = 0;
};

/// Compares every analytic gradient of the problem against central finite
/// differences (step 1e-6 * max(1,|x_i|)) at seeded random probes in [-2,2]^n.
GradCheckReport grad_check(const MpocProblem& problem, int probes, std::uint64_t seed);

/// Worst relative FD error of a single function at the given probe points.
double grad_check_fn(const SmoothFn& fn, const std::vector<Eigen::VectorXd>& probes);

}  // namespace orcon
