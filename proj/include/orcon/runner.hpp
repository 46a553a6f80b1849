#pragma once

#include <string>
#include <vector>

#include "orcon/homotopy.hpp"

namespace orcon {

/// Outcome of a (method x start) experiment. results[a][s] is the run of
/// methods[a] from starts[s]; strongest[a][s] is the strongest certified
/// stationarity class ("" for infeasible runs or when certification was
/// skipped). Row/column order is fixed by the inputs, never by scheduling.
struct RunMatrix {
  std::vector<MethodId> methods;
  std::vector<Eigen::VectorXd> starts;
  std::vector<std::vector<RunResult>> results;
  std::vector<std::vector<std::string>> strongest;
};

/// Parallel map over the run matrix (OpenMP, dynamic schedule). threads = 0
/// picks the OpenMP default; the ORCON_THREADS environment variable
/// overrides any value. Per-run state is isolated, so results are identical
/// to the serial reference for every thread count. recordTiming = false
/// zeroes wall times so emitted bytes are reproducible.
RunMatrix run_matrix(const MpocProblem& problem, const std::vector<MethodId>& methods,
                     const std::vector<Eigen::VectorXd>& starts,
                     const HomotopyConfig& cfg, int threads = 0, bool certify = true,
                     bool recordTiming = false);

/// Single-threaded reference implementation with identical semantics.
RunMatrix run_matrix_serial(const MpocProblem& problem,
                            const std::vector<MethodId>& methods,
                            const std::vector<Eigen::VectorXd>& starts,
                            const HomotopyConfig& cfg, bool certify = true,
                            bool recordTiming = false);

/// Effective thread count: ORCON_THREADS env var if set, else `requested`,
/// else the OpenMP default.
int effective_threads(int requested);

}  // namespace orcon
