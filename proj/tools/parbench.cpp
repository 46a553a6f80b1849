// Compares the OpenMP run-matrix / heat-assembly kernels against their
// serial reference implementations: verifies identical results and reports
// wall-time speedups.
#include <chrono>
#include <cstring>
#include <iostream>

#include "orcon/bench.hpp"
#include "orcon/runner.hpp"

using namespace orcon;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_matrix(const RunMatrix& a, const RunMatrix& b) {
  for (std::size_t i = 0; i < a.results.size(); ++i)
    for (std::size_t s = 0; s < a.results[i].size(); ++s) {
      const RunResult& r1 = a.results[i][s];
      const RunResult& r2 = b.results[i][s];
      if (r1.fValue != r2.fValue || r1.feasible != r2.feasible) return false;
      if (std::memcmp(r1.finalX.data(), r2.finalX.data(),
                      sizeof(double) * r1.finalX.size()) != 0)
        return false;
    }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int starts = argc > 1 ? std::atoi(argv[1]) : 24;

  const bench::BenchmarkInstance inst = bench::build_disjunctive();
  std::vector<Eigen::VectorXd> startPoints;
  for (int s = 0; s < starts; ++s) startPoints.push_back(inst.sampleStart(7, s));
  const std::vector<MethodId> methods = all_methods();
  const HomotopyConfig cfg;

  auto t0 = std::chrono::steady_clock::now();
  const RunMatrix serial =
      run_matrix_serial(inst.problem, methods, startPoints, cfg, false);
  const double serialTime = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const RunMatrix parallel =
      run_matrix(inst.problem, methods, startPoints, cfg, 0, false);
  const double parallelTime = seconds_since(t0);

  std::cout << "run matrix (" << methods.size() << " methods x " << starts
            << " starts)\n";
  std::cout << "  serial:   " << serialTime << " s\n";
  std::cout << "  parallel: " << parallelTime << " s ("
            << effective_threads(0) << " threads, speedup "
            << serialTime / parallelTime << "x)\n";
  if (!same_matrix(serial, parallel)) {
    std::cerr << "MISMATCH between serial and parallel run matrices\n";
    return 1;
  }
  std::cout << "  results identical: yes\n";

  bench::HeatGridConfig heat;
  t0 = std::chrono::steady_clock::now();
  const bench::HeatQuadratic qSerial = bench::build_heat_quadratic(heat, false);
  const double heatSerial = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const bench::HeatQuadratic qParallel = bench::build_heat_quadratic(heat, true);
  const double heatParallel = seconds_since(t0);
  std::cout << "heat assembly (" << heat.gridNodes << "x" << heat.gridNodes << " grid, "
            << heat.timeSteps << " steps)\n";
  std::cout << "  serial:   " << heatSerial << " s\n";
  std::cout << "  parallel: " << heatParallel << " s (speedup "
            << heatSerial / heatParallel << "x)\n";
  if (qSerial.Q != qParallel.Q || qSerial.b != qParallel.b ||
      qSerial.c0 != qParallel.c0) {
    std::cerr << "MISMATCH between serial and parallel heat assembly\n";
    return 1;
  }
  std::cout << "  results identical: yes\n";
  return 0;
}
