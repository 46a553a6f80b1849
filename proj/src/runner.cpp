#include "orcon/runner.hpp"

#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orcon {

int effective_threads(int requested) {
  if (const char* env = std::getenv("ORCON_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (requested > 0) return requested;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

void run_cell(const MpocProblem& problem, const HomotopyConfig& cfg, bool certify,
              bool recordTiming, MethodId method, const Eigen::VectorXd& start,
              RunResult& slotResult, std::string& slotStrongest) {
  RunResult r = run_method(problem, method, start, cfg);
  if (!recordTiming) r.wallTimeSeconds = 0.0;
  if (certify && r.feasible) {
    const RunCertification cert = certify_run(problem, r);
    if (cert.strongest) slotStrongest = to_string(*cert.strongest);
  }
  slotResult = std::move(r);
}

RunMatrix make_skeleton(const std::vector<MethodId>& methods,
                        const std::vector<Eigen::VectorXd>& starts) {
  RunMatrix m;
  m.methods = methods;
  m.starts = starts;
  m.results.assign(methods.size(), std::vector<RunResult>(starts.size()));
  m.strongest.assign(methods.size(), std::vector<std::string>(starts.size()));
  return m;
}

}  // namespace

RunMatrix run_matrix_serial(const MpocProblem& problem,
                            const std::vector<MethodId>& methods,
                            const std::vector<Eigen::VectorXd>& starts,
                            const HomotopyConfig& cfg, bool certify, bool recordTiming) {
  RunMatrix m = make_skeleton(methods, starts);
  for (std::size_t a = 0; a < methods.size(); ++a)
    for (std::size_t s = 0; s < starts.size(); ++s)
      run_cell(problem, cfg, certify, recordTiming, methods[a], starts[s],
               m.results[a][s], m.strongest[a][s]);
  return m;
}

RunMatrix run_matrix(const MpocProblem& problem, const std::vector<MethodId>& methods,
                     const std::vector<Eigen::VectorXd>& starts,
                     const HomotopyConfig& cfg, int threads, bool certify,
                     bool recordTiming) {
  RunMatrix m = make_skeleton(methods, starts);
  const int total = static_cast<int>(methods.size() * starts.size());
  const int nThreads = effective_threads(threads);
  std::exception_ptr firstError;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nThreads)
#endif
  for (int cell = 0; cell < total; ++cell) {
    const std::size_t a = cell / starts.size();
    const std::size_t s = cell % starts.size();
    try {
      run_cell(problem, cfg, certify, recordTiming, methods[a], starts[s],
               m.results[a][s], m.strongest[a][s]);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!firstError) firstError = std::current_exception();
      }
    }
  }
  if (firstError) std::rethrow_exception(firstError);
  return m;
}

}  // namespace orcon
