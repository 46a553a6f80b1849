#include "orcon/homotopy.hpp"

#include <chrono>
#include <cmath>

#include "orcon/errors.hpp"
#include "orcon/reformulate.hpp"

namespace orcon {

const char* to_string(MethodId m) {
  switch (m) {
    case MethodId::DirectNcpKS: return "DirectNcpKS";
    case MethodId::RelaxSC: return "RelaxSC";
    case MethodId::RelaxCC: return "RelaxCC";
    case MethodId::RelaxFB: return "RelaxFB";
    case MethodId::RelaxKS: return "RelaxKS";
  }
  return "?";
}

std::optional<MethodId> method_from_string(const std::string& s) {
  for (MethodId m : all_methods())
    if (s == to_string(m)) return m;
  return std::nullopt;
}

std::vector<MethodId> all_methods() {
  return {MethodId::DirectNcpKS, MethodId::RelaxSC, MethodId::RelaxCC,
          MethodId::RelaxFB, MethodId::RelaxKS};
}

namespace {

void finalize(RunResult& result, const MpocProblem& problem, const Eigen::VectorXd& x,
              const HomotopyConfig& cfg) {
  result.finalX = x;
  result.fValue = problem.f.value(x);
  const FeasibilityReport rep = feasibility(problem, x);
  result.maxOrViolation = rep.orViolation.size() > 0 ? rep.orViolation.maxCoeff() : 0.0;
  double gh = 0;
  if (rep.gViolation.size() > 0) gh = std::max(gh, rep.gViolation.maxCoeff());
  if (rep.hViolation.size() > 0) gh = std::max(gh, rep.hViolation.maxCoeff());
  result.maxGhViolation = gh;
  result.feasible = result.maxOrViolation <= cfg.orTol;
}

}  // namespace

RunResult run_method(const MpocProblem& problem, MethodId method,
                     const Eigen::VectorXd& start, const HomotopyConfig& cfg) {
  if (start.size() != problem.n)
    throw DimensionMismatch("run_method: start has dimension " +
                            std::to_string(start.size()) + ", problem expects " +
                            std::to_string(problem.n));
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  result.method = method;
  result.start = start;

  if (method == MethodId::DirectNcpKS) {
    const NlpSpec spec = ncp_reformulate(problem);
    NlpSolution sol;
    try {
      sol = solve_nlp(spec, start, cfg.orTol, cfg.maxInnerIter);
    } catch (const EvaluationFailure& e) {
      throw Error(std::string("run_method: inner solver failure at stage 1: ") +
                  e.what());
    }
    result.stages.push_back({0.0, sol.status, sol.iterations, sol.fValue});
    finalize(result, problem, sol.x, cfg);
    result.wallTimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }

  // Relaxation homotopies share the stage loop; they differ only in the
  // lifted space and the per-stage NlpSpec builder.
  const bool lifted = method == MethodId::RelaxSC || method == MethodId::RelaxCC;
  MpscInstance mpsc;
  MpccInstance mpcc;
  Eigen::VectorXd w;
  if (method == MethodId::RelaxSC) {
    mpsc = to_mpsc(problem);
    w = sc_start(problem, start);
  } else if (method == MethodId::RelaxCC) {
    mpcc = to_mpcc(problem);
    w = cc_start(problem, start);
  } else {
    w = start;
  }

  const auto stage_spec = [&](double t) {
    switch (method) {
      case MethodId::RelaxSC: return scholtes_sc_relax(mpsc, t);
      case MethodId::RelaxCC: return scholtes_cc_relax(mpcc, t);
      case MethodId::RelaxFB: return direct_relax(problem, DirectVariant::Fb, t);
      default: return direct_relax(problem, DirectVariant::Ks, t);
    }
  };

  int consecutiveFailures = 0;
  for (int stage = 1; stage <= cfg.maxStages; ++stage) {
    // t_k = tInitial * tFactor^(k-1), evaluated from k so that the schedule
    // stays exact; the tMin comparison tolerates one ulp of pow noise.
    const double t = cfg.tInitial * std::pow(cfg.tFactor, stage - 1);
    if (t < cfg.tMin * (1 - 1e-9)) break;
    const NlpSpec spec = stage_spec(t);
    NlpSolution sol;
    try {
      sol = solve_nlp(spec, w, cfg.innerTol, cfg.maxInnerIter);
    } catch (const EvaluationFailure& e) {
      throw Error("run_method: inner solver failure at stage " +
                  std::to_string(stage) + ": " + e.what());
    }
    result.stages.push_back({t, sol.status, sol.iterations, sol.fValue});
    w = sol.x;  // next stage warm-starts from this solution, bitwise

    const Eigen::VectorXd x = lifted ? w.head(problem.n).eval() : w;
    const FeasibilityReport rep = feasibility(problem, x);
    const double orViol =
        rep.orViolation.size() > 0 ? rep.orViolation.maxCoeff() : 0.0;
    if (orViol <= cfg.orTol) break;

    consecutiveFailures = sol.status == NlpStatus::Converged ? 0 : consecutiveFailures + 1;
    if (consecutiveFailures >= 2) break;
  }

  finalize(result, problem, lifted ? w.head(problem.n).eval() : w, cfg);
  result.wallTimeSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

RunCertification certify_run(const MpocProblem& problem, const RunResult& result) {
  if (!result.feasible)
    throw InfeasiblePoint("certify_run: result is infeasible (maxOrViolation " +
                          std::to_string(result.maxOrViolation) + ")");
  RunCertification out;
  // Both tolerances follow the global 1e-4 stopping regime: the final x of
  // a run is only accurate to that scale, so a tighter stationarity
  // residual would reject genuine limits.
  constexpr double epsAct = 1e-4;
  const double epsStat =
      1e-4 * std::max(1.0, problem.f.gradient(result.finalX).norm());
  for (StatClass cls : {StatClass::S, StatClass::M, StatClass::W}) {
    out.certificates.push_back(
        certify_mpoc(problem, result.finalX, cls, epsAct, epsStat));
    if (out.certificates.back().holds && !out.strongest) out.strongest = cls;
  }
  return out;
}

}  // namespace orcon
