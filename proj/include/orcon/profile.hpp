#pragma once

#include <string>
#include <vector>

#include "orcon/homotopy.hpp"

namespace orcon::profile {

/// Per-(start, method) Q_delta values; +inf marks infeasible runs.
struct ProfileTable {
  std::vector<MethodId> methods;
  int numStarts = 0;
  Eigen::MatrixXd qValues;  // numStarts x methods
  double delta = 1.0;
  double fMin = 0;
  double feasTol = 1e-4;
};

/// Q_delta(x) = f(x) - fMin + delta when the run is feasible within feasTol
/// (or-pairs and g/h both), +inf otherwise.
double q_metric(const RunResult& result, double fMin, double delta, double feasTol);

ProfileTable build_table(const std::vector<std::vector<RunResult>>& results,
                         const std::vector<MethodId>& methods, double delta,
                         double fMin, double feasTol);

/// Performance ratios r_{s,a} = Q(s,a) / min_a Q(s,a); rows whose minimum is
/// +inf become all +inf.
Eigen::MatrixXd ratios(const ProfileTable& table);

/// rho_a(tau) = |{s : r_{s,a} <= tau}| / |S| on the given grid.
Eigen::VectorXd rho_curve(const Eigen::MatrixXd& r, int methodColumn,
                          const Eigen::VectorXd& tauGrid);

/// Geometric grid of `points` values from 1 to the largest finite ratio
/// (capped at 1e6).
Eigen::VectorXd default_tau_grid(const Eigen::MatrixXd& r, int points = 200);

struct Curves {
  Eigen::VectorXd tauGrid;
  Eigen::MatrixXd rho;  // tauGrid.size() x methods
};

Curves build_curves(const ProfileTable& table, int points = 200);

struct EmitPaths {
  std::string resultsCsv;  // empty = skip
  std::string profileCsv;
  std::string svg;
};

/// Writes the raw-results CSV (one row per method x start), the profile CSV
/// (tau grid x methods) and an optional SVG line chart. Output is
/// byte-stable for identical inputs; floats use shortest round-trip
/// formatting. `strongest` may be empty or hold one label per (method,
/// start). Throws IoFailure.
void emit(const std::vector<std::vector<RunResult>>& results,
          const std::vector<std::vector<std::string>>& strongest,
          const ProfileTable& table, const Curves& curves, const EmitPaths& paths);

/// Minimal RunResult rows parsed back from a raw-results CSV (enough to
/// recompute profiles).
struct ParsedResults {
  std::vector<MethodId> methods;
  std::vector<std::vector<RunResult>> results;
  std::vector<std::vector<std::string>> strongest;
};

ParsedResults read_results_csv(const std::string& path);

/// Formats a double with the shortest representation that round-trips.
std::string format_double(double v);

}  // namespace orcon::profile
