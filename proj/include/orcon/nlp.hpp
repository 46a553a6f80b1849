#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orcon/model.hpp"

namespace orcon {

/// A smooth nonlinear program: min f s.t. ineq <= 0, eq = 0, lb <= x <= ub.
/// Bounds are optional (size 0 disables them; +-inf entries allowed) and are
/// folded into the inequality list internally, lower bounds first.
struct NlpSpec {
  int n = 0;
  SmoothFn objective;
  std::vector<SmoothFn> ineq;
  std::vector<SmoothFn> eq;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;
  std::string name;

  /// Number of inequality rows after bound folding.
  int foldedIneqCount() const;
};

enum class NlpStatus : std::uint8_t {
  Converged,
  IterationLimit,
  LineSearchFailure,
  Diverged,
};

const char* to_string(NlpStatus s);

struct NlpSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;  // one entry per folded inequality row, >= 0
  Eigen::VectorXd rho;     // equality multipliers
  double kktResidual = 0;
  NlpStatus status = NlpStatus::IterationLimit;
  int iterations = 0;
  double fValue = 0;
};

/// Dense primal-dual interior-point solver with slack variables, a damped
/// BFGS Lagrangian Hessian, symmetric quasi-definite KKT factorization,
/// fraction-to-boundary rule (tau = 0.995), monotone barrier reduction
/// (mu <- mu/5) and a backtracking l1 merit line search. Deterministic for
/// fixed inputs. Throws EvaluationFailure when a user function returns
/// NaN/Inf.
NlpSolution solve_nlp(const NlpSpec& spec, const Eigen::VectorXd& start, double tol,
                      int maxIter = 500);

/// Sup-norm KKT error at (x, lambda, rho): max of the stationarity residual,
/// max(0, c_ineq), |c_eq|, |lambda_i c_i| and max(0, -lambda_i). lambda is
/// indexed by folded inequality rows.
double kkt_residual(const NlpSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda, const Eigen::VectorXd& rho);

}  // namespace orcon
