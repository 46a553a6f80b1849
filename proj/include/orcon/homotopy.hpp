#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orcon/analysis.hpp"
#include "orcon/model.hpp"
#include "orcon/nlp.hpp"

namespace orcon {

/// The five solution pipelines compared by the benchmark suite.
enum class MethodId : std::uint8_t {
  DirectNcpKS,  // single NLP solve of the Kanzow-Schwartz reformulation
  RelaxSC,      // Scholtes homotopy on the switching lift
  RelaxCC,      // Scholtes homotopy on the complementarity lift
  RelaxFB,      // direct homotopy with the smoothed Fischer-Burmeister function
  RelaxKS,      // direct homotopy with the offset Kanzow-Schwartz function
};

const char* to_string(MethodId m);
std::optional<MethodId> method_from_string(const std::string& s);
std::vector<MethodId> all_methods();

struct HomotopyConfig {
  double tInitial = 0.01;  // t_k = tInitial * tFactor^(k-1) = 0.01^k
  double tFactor = 0.01;
  double tMin = 1e-8;      // stop once t_k would drop below this
  double orTol = 1e-4;     // global or-violation stopping tolerance
  double innerTol = 1e-6;  // inner NLP tolerance for relaxation stages
  int maxStages = 16;
  int maxInnerIter = 500;
};

struct StageTrace {
  double t = 0;  // 0 for the direct single-solve method
  NlpStatus innerStatus = NlpStatus::IterationLimit;
  int innerIterations = 0;
  double fValue = 0;
};

struct RunResult {
  MethodId method = MethodId::DirectNcpKS;
  Eigen::VectorXd start;   // in the base variable space
  Eigen::VectorXd finalX;  // x-part only
  double fValue = 0;
  double maxOrViolation = 0;
  double maxGhViolation = 0;  // worst g/h violation at finalX
  bool feasible = false;      // maxOrViolation <= cfg.orTol
  std::vector<StageTrace> stages;
  double wallTimeSeconds = 0;
};

/// Runs one method from one start. Relaxation methods loop over the
/// schedule t_k = 0.01^k, warm-starting each stage from the previous
/// solution, and stop with success once the x-part or-violation drops to
/// cfg.orTol (failure once t_k < tMin or the inner solver fails twice in a
/// row). The direct method solves the Kanzow-Schwartz reformulation once at
/// tolerance cfg.orTol.
RunResult run_method(const MpocProblem& problem, MethodId method,
                     const Eigen::VectorXd& start, const HomotopyConfig& cfg = {});

struct RunCertification {
  std::optional<StatClass> strongest;  // strongest class that holds
  std::vector<StationarityCertificate> certificates;  // S, M, W order
};

/// Certifies a feasible run result at its final x (classes tried in the
/// order S, M, W with eps_act = 1e-4). Throws InfeasiblePoint when the
/// result is marked infeasible.
RunCertification certify_run(const MpocProblem& problem, const RunResult& result);

}  // namespace orcon
