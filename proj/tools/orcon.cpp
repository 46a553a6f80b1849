// Command-line front end: batch benchmark runs with performance profiles,
// stationarity verification of a point, gradient checking, and profile
// recomputation from a results CSV.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "orcon/analysis.hpp"
#include "orcon/bench.hpp"
#include "orcon/errors.hpp"
#include "orcon/homotopy.hpp"
#include "orcon/profile.hpp"
#include "orcon/reformulate.hpp"
#include "orcon/rng.hpp"
#include "orcon/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace orcon;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

const std::vector<std::string> kBenchmarkIds = {"disjunctive", "gap_domain",
                                                "heat_control", "example41",
                                                "example51"};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

struct ExperimentConfig {
  std::string benchmark;
  json params = json::object();
  std::vector<MethodId> methods = all_methods();
  int numStarts = 100;
  std::uint64_t seed = 1;
  std::optional<double> delta;
  std::string outDir = "out";
  HomotopyConfig homotopy;
  int threads = 0;
  bool timing = false;
};

ExperimentConfig parse_config(const json& j) {
  require_keys(j,
               {"schema", "benchmark", "params", "methods", "numStarts", "seed",
                "delta", "outDir", "homotopy", "threads", "timing"},
               "config");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"] != 1)
    throw ConfigError("config must carry \"schema\": 1");
  ExperimentConfig cfg;
  if (!j.contains("benchmark")) throw ConfigError("config needs a \"benchmark\" id");
  cfg.benchmark = j["benchmark"].get<std::string>();
  if (j.contains("params")) cfg.params = j["params"];
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : j["methods"]) {
      const auto m = method_from_string(name.get<std::string>());
      if (!m) throw ConfigError("unknown method '" + name.get<std::string>() + "'");
      cfg.methods.push_back(*m);
    }
    if (cfg.methods.empty()) throw ConfigError("methods must be nonempty");
  }
  if (j.contains("numStarts")) cfg.numStarts = j["numStarts"].get<int>();
  if (cfg.numStarts < 1) throw ConfigError("numStarts must be >= 1");
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("outDir")) cfg.outDir = j["outDir"].get<std::string>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("timing")) cfg.timing = j["timing"].get<bool>();
  if (j.contains("homotopy")) {
    const json& h = j["homotopy"];
    require_keys(h, {"orTol", "innerTol", "tMin", "maxStages", "maxInnerIter"},
                 "homotopy");
    if (h.contains("orTol")) cfg.homotopy.orTol = h["orTol"].get<double>();
    if (h.contains("innerTol")) cfg.homotopy.innerTol = h["innerTol"].get<double>();
    if (h.contains("tMin")) cfg.homotopy.tMin = h["tMin"].get<double>();
    if (h.contains("maxStages")) cfg.homotopy.maxStages = h["maxStages"].get<int>();
    if (h.contains("maxInnerIter"))
      cfg.homotopy.maxInnerIter = h["maxInnerIter"].get<int>();
  }
  return cfg;
}

bench::BenchmarkInstance build_benchmark(const std::string& id, const json& params) {
  if (id == "disjunctive") {
    require_keys(params, {}, "params(disjunctive)");
    return bench::build_disjunctive();
  }
  if (id == "gap_domain") {
    require_keys(params, {"n", "budget", "aSeed"}, "params(gap_domain)");
    const int n = params.contains("n") ? params["n"].get<int>() : 50;
    const double budget =
        params.contains("budget") ? params["budget"].get<double>() : 15.0;
    const std::uint64_t aSeed =
        params.contains("aSeed") ? params["aSeed"].get<std::uint64_t>() : 2024;
    const Eigen::VectorXd a =
        bench::gap_domain_vector(n, static_cast<int>(std::llround(budget)), aSeed);
    return bench::build_gap_domain(n, budget, a);
  }
  if (id == "heat_control") {
    require_keys(params, {"gridNodes", "timeSteps", "alpha", "beta"},
                 "params(heat_control)");
    bench::HeatGridConfig cfg;
    if (params.contains("gridNodes")) cfg.gridNodes = params["gridNodes"].get<int>();
    if (params.contains("timeSteps")) cfg.timeSteps = params["timeSteps"].get<int>();
    if (params.contains("alpha")) cfg.alpha = params["alpha"].get<double>();
    if (params.contains("beta")) cfg.beta = params["beta"].get<double>();
    return bench::build_heat_control(cfg);
  }
  if (id == "example41" || id == "example51") {
    require_keys(params, {}, "params(" + id + ")");
    bench::BenchmarkInstance inst;
    inst.problem = id == "example41" ? bench::example41() : bench::example51();
    inst.sampleStart = [](std::uint64_t seed, int index) -> Eigen::VectorXd {
      Rng rng(mix_seed(seed, index));
      Eigen::VectorXd x(2);
      x << rng.uniform(-2, 2), rng.uniform(-2, 2);
      return x;
    };
    return inst;
  }
  std::string ids;
  for (const auto& known : kBenchmarkIds) ids += (ids.empty() ? "" : ", ") + known;
  throw ConfigError("unknown benchmark '" + id + "' (valid ids: " + ids + ")");
}

double default_delta(const std::string& benchmark) {
  return benchmark == "heat_control" ? 0.0 : 1.0;
}

int cmd_bench(const std::string& configPath, const std::string& outOverride,
              std::optional<std::uint64_t> seedOverride,
              std::optional<int> startsOverride, const std::string& methodsOverride,
              std::optional<int> threadsOverride) {
  ExperimentConfig cfg;
  try {
    std::ifstream in(configPath);
    if (!in) {
      std::cerr << "error: cannot open config '" << configPath << "'\n";
      return kExitConfigError;
    }
    cfg = parse_config(json::parse(in));
    if (!outOverride.empty()) cfg.outDir = outOverride;
    if (seedOverride) cfg.seed = *seedOverride;
    if (startsOverride) cfg.numStarts = *startsOverride;
    if (threadsOverride) cfg.threads = *threadsOverride;
    if (!methodsOverride.empty()) {
      cfg.methods.clear();
      std::stringstream ss(methodsOverride);
      std::string name;
      while (std::getline(ss, name, ',')) {
        const auto m = method_from_string(name);
        if (!m) throw ConfigError("unknown method '" + name + "'");
        cfg.methods.push_back(*m);
      }
      if (cfg.methods.empty()) throw ConfigError("methods must be nonempty");
    }
  } catch (const json::exception& e) {
    std::cerr << "error: config parse failure: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  bench::BenchmarkInstance inst;
  try {
    inst = build_benchmark(cfg.benchmark, cfg.params);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::vector<Eigen::VectorXd> starts;
  starts.reserve(cfg.numStarts);
  for (int s = 0; s < cfg.numStarts; ++s) starts.push_back(inst.sampleStart(cfg.seed, s));

  const RunMatrix matrix = run_matrix(inst.problem, cfg.methods, starts, cfg.homotopy,
                                      cfg.threads, /*certify=*/true, cfg.timing);

  // fMin: the benchmark's known optimum, else the best feasible value seen.
  double fMin;
  std::string fMinSource;
  if (inst.problem.knownOptimum) {
    fMin = inst.problem.knownOptimum->fMin;
    fMinSource = "knownOptimum";
  } else {
    fMin = std::numeric_limits<double>::infinity();
    for (const auto& row : matrix.results)
      for (const RunResult& r : row)
        if (r.feasible && r.maxGhViolation <= cfg.homotopy.orTol)
          fMin = std::min(fMin, r.fValue);
    fMinSource = "bestFeasibleRun";
    if (!std::isfinite(fMin)) fMin = 0;
  }
  const double delta = cfg.delta ? *cfg.delta : default_delta(cfg.benchmark);

  const profile::ProfileTable table = profile::build_table(
      matrix.results, cfg.methods, delta, fMin, cfg.homotopy.orTol);
  const profile::Curves curves = profile::build_curves(table);

  try {
    fs::create_directories(cfg.outDir);
    profile::EmitPaths paths{(fs::path(cfg.outDir) / "results.csv").string(),
                             (fs::path(cfg.outDir) / "profile.csv").string(),
                             (fs::path(cfg.outDir) / "profile.svg").string()};
    profile::emit(matrix.results, matrix.strongest, table, curves, paths);

    json meta;
    meta["benchmark"] = cfg.benchmark;
    meta["seed"] = cfg.seed;
    meta["numStarts"] = cfg.numStarts;
    meta["delta"] = delta;
    meta["fMin"] = fMin;
    meta["fMinSource"] = fMinSource;
    meta["feasTol"] = cfg.homotopy.orTol;
    std::ofstream metaOut(fs::path(cfg.outDir) / "meta.json");
    if (!metaOut) throw IoFailure("cannot write meta.json");
    metaOut << meta.dump(2) << "\n";
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }

  for (std::size_t a = 0; a < cfg.methods.size(); ++a) {
    int feasible = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const RunResult& r : matrix.results[a]) {
      feasible += r.feasible;
      if (r.feasible) best = std::min(best, r.fValue);
    }
    std::cout << to_string(cfg.methods[a]) << ": " << feasible << "/" << cfg.numStarts
              << " feasible, best f = " << (feasible ? profile::format_double(best) : "-")
              << "\n";
  }
  std::cout << "wrote " << cfg.outDir << "/{results.csv, profile.csv, profile.svg, meta.json}"
            << "\n";
  return 0;
}

int cmd_verify(const std::string& problemId, const std::string& pointFile,
               const std::string& className) {
  bench::BenchmarkInstance inst;
  try {
    inst = build_benchmark(problemId, json::object());
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const auto cls = stat_class_from_string(className);
  if (!cls || *cls == StatClass::C) {
    std::cerr << "error: class must be one of W, M, S\n";
    return kExitConfigError;
  }

  Eigen::VectorXd x(inst.problem.n);
  {
    std::ifstream in(pointFile);
    if (!in) {
      std::cerr << "error: cannot open point file '" << pointFile << "'\n";
      return kExitConfigError;
    }
    for (int i = 0; i < x.size(); ++i)
      if (!(in >> x[i])) {
        std::cerr << "error: malformed point file (expected " << x.size()
                  << " decimals)\n";
        return kExitConfigError;
      }
    double extra;
    if (in >> extra) {
      std::cerr << "error: malformed point file (too many values)\n";
      return kExitConfigError;
    }
  }

  try {
    const OrActivePattern pat = active_pattern(inst.problem, x, 1e-6);
    const auto printSet = [](const char* name, const std::vector<int>& v) {
      std::cout << "  " << name << " = {";
      for (std::size_t i = 0; i < v.size(); ++i)
        std::cout << (i ? ", " : "") << v[i] + 1;
      std::cout << "}\n";
    };
    std::cout << "active pattern (1-based indices):\n";
    printSet("I-0", pat.iM0);
    printSet("I0-", pat.i0M);
    printSet("I-+", pat.iMP);
    printSet("I+-", pat.iPM);
    printSet("I0+", pat.i0P);
    printSet("I+0", pat.iP0);
    printSet("I--", pat.iMM);
    printSet("I00", pat.i00);
    printSet("Ig ", pat.activeG);

    const CqReport licq = check_mpoc_licq(inst.problem, x);
    const CqReport mfcq = check_mpoc_mfcq(inst.problem, x);
    std::cout << "MPOC-LICQ: " << (licq.mpocLicq ? "holds" : "fails")
              << " (smallest singular value " << licq.smallestSingularValue << ")\n";
    std::cout << "MPOC-MFCQ: " << (mfcq.mpocMfcq ? "holds" : "fails") << "\n";

    const StationarityCertificate cert = certify_mpoc(inst.problem, x, *cls);
    std::cout << className << "-stationarity: " << (cert.holds ? "holds" : "fails")
              << " (residual " << cert.residualNorm << ")\n";
    if (cert.holds) {
      for (const auto& [i, v] : cert.lambda)
        std::cout << "  lambda[" << i + 1 << "] = " << v << "\n";
      for (int j = 0; j < cert.rho.size(); ++j)
        std::cout << "  rho[" << j + 1 << "] = " << cert.rho[j] << "\n";
      for (const auto& [l, v] : cert.mu) std::cout << "  mu[" << l + 1 << "] = " << v << "\n";
      for (const auto& [l, v] : cert.nu) std::cout << "  nu[" << l + 1 << "] = " << v << "\n";
    }
    return cert.holds ? 0 : kExitCheckFailure;
  } catch (const InfeasiblePoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
}

int cmd_gradcheck(const std::string& benchmarkId) {
  MpocProblem problem;
  if (benchmarkId == "corrupted") {
    // Negative-control fixture: a deliberately wrong gradient.
    problem = bench::example41();
    problem.name = "corrupted";
    problem.f.gradient = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd{{2 * (x[0] - 1) + 0.25, 0.0}};
    };
  } else {
    try {
      json params = json::object();
      if (benchmarkId == "gap_domain") params["n"] = 10, params["budget"] = 3;
      if (benchmarkId == "heat_control")
        params["gridNodes"] = 5, params["timeSteps"] = 8;
      problem = build_benchmark(benchmarkId, params).problem;
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << " (or 'corrupted')\n";
      return kExitConfigError;
    }
  }
  const GradCheckReport report = grad_check(problem, 20, 424242);
  for (const auto& entry : report.entries)
    if (entry.worstRelError > 1e-5)
      std::cout << entry.name << ": worst relative error " << entry.worstRelError
                << "\n";
  std::cout << "worst relative error: " << report.worst << " over "
            << report.entries.size() << " functions\n";
  return report.worst <= 1e-5 ? 0 : kExitCheckFailure;
}

int cmd_profile(const std::string& resultsCsv, const std::string& outDir, double delta,
                std::optional<double> fMinOpt, double feasTol) {
  try {
    const profile::ParsedResults parsed = profile::read_results_csv(resultsCsv);
    if (parsed.methods.empty()) {
      std::cerr << "error: results CSV holds no rows\n";
      return kExitConfigError;
    }
    double fMin;
    if (fMinOpt) {
      fMin = *fMinOpt;
    } else {
      fMin = std::numeric_limits<double>::infinity();
      for (const auto& row : parsed.results)
        for (const RunResult& r : row)
          if (r.maxOrViolation <= feasTol && r.maxGhViolation <= feasTol)
            fMin = std::min(fMin, r.fValue);
      if (!std::isfinite(fMin)) fMin = 0;
    }
    const profile::ProfileTable table =
        profile::build_table(parsed.results, parsed.methods, delta, fMin, feasTol);
    const profile::Curves curves = profile::build_curves(table);
    fs::create_directories(outDir);
    profile::EmitPaths paths{"", (fs::path(outDir) / "profile.csv").string(),
                             (fs::path(outDir) / "profile.svg").string()};
    profile::emit(parsed.results, parsed.strongest, table, curves, paths);
    std::cout << "wrote " << outDir << "/{profile.csv, profile.svg} (fMin = " << fMin
              << ")\n";
    return 0;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"or-constrained program solvers, certification and benchmarks"};
  app.require_subcommand(1);

  std::string configPath, outDir, methodsCsv;
  std::uint64_t seedFlag = 0;
  int startsFlag = 0, threadsFlag = -1;
  bool seedSet = false, startsSet = false, threadsSet = false;

  CLI::App* benchCmd = app.add_subcommand("bench", "run a benchmark experiment");
  benchCmd->add_option("--config", configPath, "JSON experiment config")->required();
  benchCmd->add_option("--out", outDir, "output directory override");
  benchCmd->add_option("--seed", seedFlag, "seed override")->each([&](const std::string&) {
    seedSet = true;
  });
  benchCmd->add_option("--starts", startsFlag, "number of starts override")
      ->each([&](const std::string&) { startsSet = true; });
  benchCmd->add_option("--methods", methodsCsv, "comma-separated method subset");
  benchCmd->add_option("--threads", threadsFlag, "worker thread count (0 = auto)")
      ->each([&](const std::string&) { threadsSet = true; });

  std::string problemId, pointFile, className;
  CLI::App* verifyCmd =
      app.add_subcommand("verify", "certify stationarity of a point");
  verifyCmd->add_option("problem", problemId, "problem id")->required();
  verifyCmd->add_option("point", pointFile, "point file (one row of decimals)")
      ->required();
  verifyCmd->add_option("class", className, "stationarity class W|M|S")->required();

  std::string gradcheckId;
  CLI::App* gradCmd = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gradCmd->add_option("benchmark", gradcheckId, "benchmark id")->required();

  std::string resultsCsv;
  double deltaFlag = 1.0, feasTolFlag = 1e-4, fminFlag = 0.0;
  bool fminSet = false;
  CLI::App* profCmd =
      app.add_subcommand("profile", "recompute profiles from a results CSV");
  profCmd->add_option("--results", resultsCsv, "raw results CSV")->required();
  profCmd->add_option("--out", outDir, "output directory")->required();
  profCmd->add_option("--delta", deltaFlag, "profile shift delta");
  profCmd->add_option("--fmin", fminFlag, "reference minimal value")
      ->each([&](const std::string&) { fminSet = true; });
  profCmd->add_option("--feas-tol", feasTolFlag, "feasibility tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (benchCmd->parsed())
      return cmd_bench(configPath, outDir,
                       seedSet ? std::optional<std::uint64_t>(seedFlag) : std::nullopt,
                       startsSet ? std::optional<int>(startsFlag) : std::nullopt,
                       methodsCsv,
                       threadsSet ? std::optional<int>(threadsFlag) : std::nullopt);
    if (verifyCmd->parsed()) return cmd_verify(problemId, pointFile, className);
    if (gradCmd->parsed()) return cmd_gradcheck(gradcheckId);
    if (profCmd->parsed())
      return cmd_profile(resultsCsv, outDir, deltaFlag,
                         fminSet ? std::optional<double>(fminFlag) : std::nullopt,
                         feasTolFlag);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return 0;
}
