#include "orcon/analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "orcon/errors.hpp"
#include "orcon/nnls.hpp"

namespace orcon {

namespace {

// Column roles for multiplier recovery. MuG/NuH carry or-pair multipliers,
// Lam carries active inequality multipliers.
enum class Role : std::uint8_t { Lam, MuG, NuH };

struct LabeledColumn {
  Role role;
  int index;    // constraint / or-pair index
  double sign;  // +1, or -1 for the minus-convention MPCC columns
  Eigen::VectorXd col;
};

struct RecoverySystem {
  Eigen::VectorXd target;
  std::vector<LabeledColumn> nonneg;
  std::vector<LabeledColumn> freeCols;  // mu/nu columns with free sign
  Eigen::MatrixXd eqCols;               // equality gradients (free rho)
};

struct RecoveryOutcome {
  double residual;
  std::vector<std::pair<int, double>> lambda, mu, nu;
  Eigen::VectorXd rho;
};

RecoveryOutcome solve_recovery(const RecoverySystem& sys) {
  const auto n = sys.target.size();
  Eigen::MatrixXd nMat(n, sys.nonneg.size());
  for (std::size_t j = 0; j < sys.nonneg.size(); ++j) nMat.col(j) = sys.nonneg[j].col;
  Eigen::MatrixXd fMat(n, sys.freeCols.size() + sys.eqCols.cols());
  for (std::size_t j = 0; j < sys.freeCols.size(); ++j) fMat.col(j) = sys.freeCols[j].col;
  fMat.rightCols(sys.eqCols.cols()) = sys.eqCols;

  const NnlsResult r = nnls_residual(nMat, fMat, sys.target);

  RecoveryOutcome out;
  out.residual = r.residualNorm;
  out.rho = r.beta.tail(sys.eqCols.cols());
  const auto record = [&](const LabeledColumn& lc, double coeff) {
    const double value = lc.sign * coeff;
    switch (lc.role) {
      case Role::Lam: out.lambda.emplace_back(lc.index, value); break;
      case Role::MuG: out.mu.emplace_back(lc.index, value); break;
      case Role::NuH: out.nu.emplace_back(lc.index, value); break;
    }
  };
  for (std::size_t j = 0; j < sys.nonneg.size(); ++j) record(sys.nonneg[j], r.alpha[j]);
  for (std::size_t j = 0; j < sys.freeCols.size(); ++j) record(sys.freeCols[j], r.beta[j]);
  return out;
}

void sort_pairs(std::vector<std::pair<int, double>>& v) {
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

void fill_certificate(StationarityCertificate& cert, const RecoveryOutcome& best) {
  cert.lambda = best.lambda;
  cert.mu = best.mu;
  cert.nu = best.nu;
  cert.rho = best.rho;
  cert.residualNorm = best.residual;
  sort_pairs(cert.lambda);
  sort_pairs(cert.mu);
  sort_pairs(cert.nu);
}

double default_eps_stat(const Eigen::VectorXd& gradF, double epsStat) {
  if (epsStat > 0) return epsStat;
  return 1e-6 * std::max(1.0, gradF.norm());
}

constexpr int kBiactiveCap = 20;

}  // namespace

std::vector<int> OrActivePattern::activeOr() const {
  std::vector<int> all;
  all.insert(all.end(), i0P.begin(), i0P.end());
  all.insert(all.end(), iP0.begin(), iP0.end());
  all.insert(all.end(), i00.begin(), i00.end());
  std::sort(all.begin(), all.end());
  return all;
}

OrActivePattern active_pattern(const MpocProblem& problem, const Eigen::VectorXd& x,
                               double eps) {
  const FeasibilityReport rep = feasibility(problem, x);
  if (!rep.feasible(eps))
    throw InfeasiblePoint("active_pattern: point infeasible (maxViolation " +
                          std::to_string(rep.maxViolation) + " > " + std::to_string(eps) +
                          ")");
  OrActivePattern pat;
  pat.tolerance = eps;
  for (int l = 0; l < problem.q(); ++l) {
    const double gl = problem.orPairs[l].first.value(x);
    const double hl = problem.orPairs[l].second.value(x);
    const int sg = std::abs(gl) <= eps ? 0 : (gl > 0 ? 1 : -1);
    const int sh = std::abs(hl) <= eps ? 0 : (hl > 0 ? 1 : -1);
    if (sg < 0 && sh == 0) pat.iM0.push_back(l);
    else if (sg == 0 && sh < 0) pat.i0M.push_back(l);
    else if (sg < 0 && sh > 0) pat.iMP.push_back(l);
    else if (sg > 0 && sh < 0) pat.iPM.push_back(l);
    else if (sg == 0 && sh > 0) pat.i0P.push_back(l);
    else if (sg > 0 && sh == 0) pat.iP0.push_back(l);
    else if (sg < 0 && sh < 0) pat.iMM.push_back(l);
    else if (sg == 0 && sh == 0) pat.i00.push_back(l);
    else
      throw InfeasiblePoint("active_pattern: pair " + std::to_string(l) +
                            " has both components positive");
  }
  for (int i = 0; i < problem.m(); ++i)
    if (std::abs(problem.g[i].value(x)) <= eps) pat.activeG.push_back(i);
  return pat;
}

const char* to_string(StatClass c) {
  switch (c) {
    case StatClass::W: return "W";
    case StatClass::C: return "C";
    case StatClass::M: return "M";
    case StatClass::S: return "S";
  }
  return "?";
}

std::optional<StatClass> stat_class_from_string(const std::string& s) {
  if (s == "W" || s == "w") return StatClass::W;
  if (s == "C" || s == "c") return StatClass::C;
  if (s == "M" || s == "m") return StatClass::M;
  if (s == "S" || s == "s") return StatClass::S;
  return std::nullopt;
}

StationarityCertificate certify_mpoc(const MpocProblem& problem, const Eigen::VectorXd& x,
                                     StatClass cls, double epsAct, double epsStat) {
  if (cls == StatClass::C)
    throw InvalidArgument("certify_mpoc: class C is MPCC-specific");
  const OrActivePattern pat = active_pattern(problem, x, epsAct);
  const Eigen::VectorXd gradF = problem.f.gradient(x);
  const double tol = default_eps_stat(gradF, epsStat);

  StationarityCertificate cert;
  cert.problemClass = "MPOC";
  cert.claimedClass = cls;
  cert.biactive = pat.i00;

  RecoverySystem base;
  base.target = gradF;
  for (int i : pat.activeG)
    base.nonneg.push_back({Role::Lam, i, 1.0, problem.g[i].gradient(x)});
  for (int l : pat.i0P)
    base.nonneg.push_back({Role::MuG, l, 1.0, problem.orPairs[l].first.gradient(x)});
  for (int l : pat.iP0)
    base.nonneg.push_back({Role::NuH, l, 1.0, problem.orPairs[l].second.gradient(x)});
  base.eqCols.resize(problem.n, problem.p());
  for (int j = 0; j < problem.p(); ++j) base.eqCols.col(j) = problem.h[j].gradient(x);

  const auto& bi = pat.i00;
  if (cls == StatClass::S || bi.empty()) {
    // S drops both biactive columns; with an empty biactive set all three
    // classes reduce to the same system (for W/M add nothing either).
    RecoverySystem sys = base;
    if (cls == StatClass::W || cls == StatClass::M) {
      for (int l : bi) {
        sys.nonneg.push_back({Role::MuG, l, 1.0, problem.orPairs[l].first.gradient(x)});
        sys.nonneg.push_back({Role::NuH, l, 1.0, problem.orPairs[l].second.gradient(x)});
      }
    }
    const RecoveryOutcome out = solve_recovery(sys);
    fill_certificate(cert, out);
    cert.holds = out.residual <= tol;
    return cert;
  }

  if (cls == StatClass::W) {
    RecoverySystem sys = base;
    for (int l : bi) {
      sys.nonneg.push_back({Role::MuG, l, 1.0, problem.orPairs[l].first.gradient(x)});
      sys.nonneg.push_back({Role::NuH, l, 1.0, problem.orPairs[l].second.gradient(x)});
    }
    const RecoveryOutcome out = solve_recovery(sys);
    fill_certificate(cert, out);
    cert.holds = out.residual <= tol;
    return cert;
  }

  // M: enumerate branches; bit set means the G-column is kept (nu_l = 0).
  if (static_cast<int>(bi.size()) > kBiactiveCap)
    throw BiactiveOverflow("certify_mpoc: |I00| = " + std::to_string(bi.size()) +
                           " exceeds the enumeration cap");
  double bestResidual = std::numeric_limits<double>::infinity();
  RecoveryOutcome best;
  std::vector<std::int8_t> bestBranch;
  const std::uint32_t nBranches = 1u << bi.size();
  for (std::uint32_t mask = 0; mask < nBranches; ++mask) {
    RecoverySystem sys = base;
    std::vector<std::int8_t> branch(bi.size());
    for (std::size_t k = 0; k < bi.size(); ++k) {
      const int l = bi[k];
      if (mask & (1u << k)) {
        sys.nonneg.push_back({Role::MuG, l, 1.0, problem.orPairs[l].first.gradient(x)});
        branch[k] = 1;
      } else {
        sys.nonneg.push_back({Role::NuH, l, 1.0, problem.orPairs[l].second.gradient(x)});
        branch[k] = 0;
      }
    }
    const RecoveryOutcome out = solve_recovery(sys);
    if (out.residual < bestResidual) {
      bestResidual = out.residual;
      best = out;
      bestBranch = branch;
    }
    if (bestResidual <= 1e-15) break;
  }
  fill_certificate(cert, best);
  cert.branch = bestBranch;
  cert.holds = bestResidual <= tol;
  return cert;
}

namespace {

// Shared scaffolding for the MPSC/MPCC certifiers: active inequality and
// equality columns plus the pairwise pattern on (first, second).
struct PairPattern {
  std::vector<int> firstActive;   // first = 0, second != 0
  std::vector<int> secondActive;  // second = 0, first != 0
  std::vector<int> biactive;      // both = 0
};

template <typename Problem>
RecoverySystem smooth_part(const Problem& problem, const Eigen::VectorXd& x,
                           double epsAct) {
  RecoverySystem sys;
  sys.target = problem.f.gradient(x);
  for (int i = 0; i < static_cast<int>(problem.g.size()); ++i)
    if (std::abs(problem.g[i].value(x)) <= epsAct)
      sys.nonneg.push_back({Role::Lam, i, 1.0, problem.g[i].gradient(x)});
  sys.eqCols.resize(problem.n, static_cast<int>(problem.h.size()));
  for (int j = 0; j < static_cast<int>(problem.h.size()); ++j)
    sys.eqCols.col(j) = problem.h[j].gradient(x);
  return sys;
}

template <typename Problem>
PairPattern pair_pattern(const Problem& problem, const Eigen::VectorXd& x, double epsAct) {
  PairPattern pat;
  for (int l = 0; l < static_cast<int>(problem.pairs.size()); ++l) {
    const bool gZero = std::abs(problem.pairs[l].first.value(x)) <= epsAct;
    const bool hZero = std::abs(problem.pairs[l].second.value(x)) <= epsAct;
    if (gZero && hZero) pat.biactive.push_back(l);
    else if (gZero) pat.firstActive.push_back(l);
    else if (hZero) pat.secondActive.push_back(l);
  }
  return pat;
}

template <typename Problem>
void check_smooth_feasible(const Problem& problem, const Eigen::VectorXd& x,
                           double epsAct, const char* who) {
  if (x.size() != problem.n) throw DimensionMismatch(std::string(who) + ": bad dimension");
  for (const auto& gi : problem.g)
    if (gi.value(x) > epsAct) throw InfeasiblePoint(std::string(who) + ": g constraint violated");
  for (const auto& hj : problem.h)
    if (std::abs(hj.value(x)) > epsAct)
      throw InfeasiblePoint(std::string(who) + ": h constraint violated");
}

}  // namespace

StationarityCertificate certify_mpsc(const SwitchingProblem& problem,
                                     const Eigen::VectorXd& x, StatClass cls,
                                     double epsAct, double epsStat) {
  if (cls == StatClass::C)
    throw InvalidArgument("certify_mpsc: class C is MPCC-specific");
  check_smooth_feasible(problem, x, epsAct, "certify_mpsc");
  for (const auto& [gt, ht] : problem.pairs)
    if (std::min(std::abs(gt.value(x)), std::abs(ht.value(x))) > epsAct)
      throw InfeasiblePoint("certify_mpsc: switching constraint violated");

  const PairPattern pat = pair_pattern(problem, x, epsAct);
  const Eigen::VectorXd gradF = problem.f.gradient(x);
  const double tol = default_eps_stat(gradF, epsStat);

  StationarityCertificate cert;
  cert.problemClass = "MPSC";
  cert.claimedClass = cls;
  cert.biactive = pat.biactive;

  RecoverySystem base = smooth_part(problem, x, epsAct);
  for (int l : pat.firstActive)
    base.freeCols.push_back({Role::MuG, l, 1.0, problem.pairs[l].first.gradient(x)});
  for (int l : pat.secondActive)
    base.freeCols.push_back({Role::NuH, l, 1.0, problem.pairs[l].second.gradient(x)});

  const auto& bi = pat.biactive;
  if (cls == StatClass::S || bi.empty()) {
    RecoverySystem sys = base;
    if (cls == StatClass::W) {
      for (int l : bi) {
        sys.freeCols.push_back({Role::MuG, l, 1.0, problem.pairs[l].first.gradient(x)});
        sys.freeCols.push_back({Role::NuH, l, 1.0, problem.pairs[l].second.gradient(x)});
      }
    }
    const RecoveryOutcome out = solve_recovery(sys);
    fill_certificate(cert, out);
    cert.holds = out.residual <= tol;
    return cert;
  }

  if (cls == StatClass::W) {
    RecoverySystem sys = base;
    for (int l : bi) {
      sys.freeCols.push_back({Role::MuG, l, 1.0, problem.pairs[l].first.gradient(x)});
      sys.freeCols.push_back({Role::NuH, l, 1.0, problem.pairs[l].second.gradient(x)});
    }
    const RecoveryOutcome out = solve_recovery(sys);
    fill_certificate(cert, out);
    cert.holds = out.residual <= tol;
    return cert;
  }

  if (static_cast<int>(bi.size()) > kBiactiveCap)
    throw BiactiveOverflow("certify_mpsc: biactive set exceeds the enumeration cap");
  double bestResidual = std::numeric_limits<double>::infinity();
  RecoveryOutcome best;
  std::vector<std::int8_t> bestBranch;
  const std::uint32_t nBranches = 1u << bi.size();
  for (std::uint32_t mask = 0; mask < nBranches; ++mask) {
    RecoverySystem sys = base;
    std::vector<std::int8_t> branch(bi.size());
    for (std::size_t k = 0; k < bi.size(); ++k) {
      const int l = bi[k];
      if (mask & (1u << k)) {
        sys.freeCols.push_back({Role::MuG, l, 1.0, problem.pairs[l].first.gradient(x)});
        branch[k] = 1;
      } else {
        sys.freeCols.push_back({Role::NuH, l, 1.0, problem.pairs[l].second.gradient(x)});
        branch[k] = 0;
      }
    }
    const RecoveryOutcome out = solve_recovery(sys);
    if (out.residual < bestResidual) {
      bestResidual = out.residual;
      best = out;
      bestBranch = branch;
    }
    if (bestResidual <= 1e-15) break;
  }
  fill_certificate(cert, best);
  cert.branch = bestBranch;
  cert.holds = bestResidual <= tol;
  return cert;
}

StationarityCertificate certify_mpcc(const ComplementarityProblem& problem,
                                     const Eigen::VectorXd& x, StatClass cls,
                                     double epsAct, double epsStat) {
  check_smooth_feasible(problem, x, epsAct, "certify_mpcc");
  for (const auto& [gb, hb] : problem.pairs) {
    const double a = gb.value(x), b = hb.value(x);
    if (a < -epsAct || b < -epsAct || std::min(a, b) > epsAct)
      throw InfeasiblePoint("certify_mpcc: complementarity constraint violated");
  }

  const PairPattern pat = pair_pattern(problem, x, epsAct);
  const Eigen::VectorXd gradF = problem.f.gradient(x);
  const double tol = default_eps_stat(gradF, epsStat);

  StationarityCertificate cert;
  cert.problemClass = "MPCC";
  cert.claimedClass = cls;
  cert.biactive = pat.biactive;

  // Pair multipliers carry the minus convention: a free column +grad with
  // coefficient c corresponds to the multiplier -c, and a nonneg column
  // -grad with coefficient c >= 0 corresponds to the multiplier +c.
  RecoverySystem base = smooth_part(problem, x, epsAct);
  for (int l : pat.firstActive)
    base.freeCols.push_back({Role::MuG, l, -1.0, problem.pairs[l].first.gradient(x)});
  for (int l : pat.secondActive)
    base.freeCols.push_back({Role::NuH, l, -1.0, problem.pairs[l].second.gradient(x)});

  const auto& bi = pat.biactive;
  const auto gradG = [&](int l) { return problem.pairs[l].first.gradient(x); };
  const auto gradH = [&](int l) { return problem.pairs[l].second.gradient(x); };

  if (bi.empty() || cls == StatClass::S) {
    RecoverySystem sys = base;
    for (int l : bi) {
      // S: mu, nu >= 0 enforced through negated nonneg columns.
      sys.nonneg.push_back({Role::MuG, l, 1.0, -gradG(l)});
      sys.nonneg.push_back({Role::NuH, l, 1.0, -gradH(l)});
    }
    const RecoveryOutcome out = solve_recovery(sys);
    fill_certificate(cert, out);
    cert.holds = out.residual <= tol;
    return cert;
  }

  if (cls == StatClass::W) {
    RecoverySystem sys = base;
    for (int l : bi) {
      sys.freeCols.push_back({Role::MuG, l, -1.0, gradG(l)});
      sys.freeCols.push_back({Role::NuH, l, -1.0, gradH(l)});
    }
    const RecoveryOutcome out = solve_recovery(sys);
    fill_certificate(cert, out);
    cert.holds = out.residual <= tol;
    return cert;
  }

  if (static_cast<int>(bi.size()) > kBiactiveCap)
    throw BiactiveOverflow("certify_mpcc: biactive set exceeds the enumeration cap");

  // C: both >= 0 or both <= 0 per biactive index. M: mu = 0, nu = 0, or
  // both >= 0. Branch codes: 0/1 the dropped-column cases, 2 both-nonneg,
  // 3 both-nonpositive.
  const int radix = cls == StatClass::C ? 2 : 3;
  std::uint64_t nBranches = 1;
  for (std::size_t k = 0; k < bi.size(); ++k) nBranches *= radix;

  double bestResidual = std::numeric_limits<double>::infinity();
  RecoveryOutcome best;
  std::vector<std::int8_t> bestBranch;
  for (std::uint64_t code = 0; code < nBranches; ++code) {
    RecoverySystem sys = base;
    std::vector<std::int8_t> branch(bi.size());
    std::uint64_t c = code;
    for (std::size_t k = 0; k < bi.size(); ++k, c /= radix) {
      const int l = bi[k];
      const int digit = static_cast<int>(c % radix);
      if (cls == StatClass::C) {
        if (digit == 0) {  // mu, nu >= 0
          sys.nonneg.push_back({Role::MuG, l, 1.0, -gradG(l)});
          sys.nonneg.push_back({Role::NuH, l, 1.0, -gradH(l)});
          branch[k] = 2;
        } else {  // mu, nu <= 0
          sys.nonneg.push_back({Role::MuG, l, -1.0, gradG(l)});
          sys.nonneg.push_back({Role::NuH, l, -1.0, gradH(l)});
          branch[k] = 3;
        }
      } else {  // M
        if (digit == 0) {  // mu = 0, nu free
          sys.freeCols.push_back({Role::NuH, l, -1.0, gradH(l)});
          branch[k] = 0;
        } else if (digit == 1) {  // nu = 0, mu free
          sys.freeCols.push_back({Role::MuG, l, -1.0, gradG(l)});
          branch[k] = 1;
        } else {  // both >= 0
          sys.nonneg.push_back({Role::MuG, l, 1.0, -gradG(l)});
          sys.nonneg.push_back({Role::NuH, l, 1.0, -gradH(l)});
          branch[k] = 2;
        }
      }
    }
    const RecoveryOutcome out = solve_recovery(sys);
    if (out.residual < bestResidual) {
      bestResidual = out.residual;
      best = out;
      bestBranch = branch;
    }
    if (bestResidual <= 1e-15) break;
  }
  fill_certificate(cert, best);
  cert.branch = bestBranch;
  cert.holds = bestResidual <= tol;
  return cert;
}

namespace {

// Active MPOC gradient family at x: inequality-type columns (nonneg
// coefficients) and equality columns (free coefficients).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> cq_family(const MpocProblem& problem,
                                                      const Eigen::VectorXd& x,
                                                      double epsAct) {
  const OrActivePattern pat = active_pattern(problem, x, epsAct);
  std::vector<Eigen::VectorXd> ineqCols;
  for (int i : pat.activeG) ineqCols.push_back(problem.g[i].gradient(x));
  for (int l : pat.i0P) ineqCols.push_back(problem.orPairs[l].first.gradient(x));
  for (int l : pat.i00) ineqCols.push_back(problem.orPairs[l].first.gradient(x));
  for (int l : pat.iP0) ineqCols.push_back(problem.orPairs[l].second.gradient(x));
  for (int l : pat.i00) ineqCols.push_back(problem.orPairs[l].second.gradient(x));
  Eigen::MatrixXd a(problem.n, ineqCols.size());
  for (std::size_t j = 0; j < ineqCols.size(); ++j) a.col(j) = ineqCols[j];
  Eigen::MatrixXd b(problem.n, problem.p());
  for (int j = 0; j < problem.p(); ++j) b.col(j) = problem.h[j].gradient(x);
  return {a, b};
}

}  // namespace

CqReport check_mpoc_licq(const MpocProblem& problem, const Eigen::VectorXd& x,
                         double epsAct) {
  const auto [a, b] = cq_family(problem, x, epsAct);
  Eigen::MatrixXd family(problem.n, a.cols() + b.cols());
  family << a, b;
  CqReport report;
  if (family.cols() == 0) {
    report.mpocLicq = true;
    report.smallestSingularValue = std::numeric_limits<double>::infinity();
    return report;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(family);
  const auto& sv = svd.singularValues();
  const double sMax = sv[0];
  const double sMin = family.cols() > family.rows() ? 0.0 : sv[sv.size() - 1];
  report.smallestSingularValue = sMin;
  report.mpocLicq = sMax > 0 && sMin > 1e-8 * sMax;
  return report;
}

CqReport check_mpoc_mfcq(const MpocProblem& problem, const Eigen::VectorXd& x,
                         double epsAct) {
  const auto [a, b] = cq_family(problem, x, epsAct);
  CqReport report;

  // Equality block alone: linear dependence already defeats MFCQ.
  if (b.cols() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const bool rankDeficient =
        b.cols() > b.rows() || sv[sv.size() - 1] <= 1e-10 * std::max(1.0, sv[0]);
    if (rankDeficient) {
      Eigen::VectorXd witness = Eigen::VectorXd::Zero(a.cols() + b.cols());
      witness.tail(b.cols()) = svd.matrixV().col(b.cols() - 1);
      report.pldWitness = witness;
      report.mpocMfcq = false;
      return report;
    }
  }
  if (a.cols() == 0) {
    report.mpocMfcq = true;
    return report;
  }

  // Homogeneous system with the normalization sum(alpha) = 1 appended as a
  // weighted row; candidate witnesses are re-verified exactly below.
  double scale = 1.0;
  for (int j = 0; j < a.cols(); ++j) scale = std::max(scale, a.col(j).norm());
  for (int j = 0; j < b.cols(); ++j) scale = std::max(scale, b.col(j).norm());
  const double weight = 1e4 * scale;

  Eigen::MatrixXd nMat(problem.n + 1, a.cols());
  nMat.topRows(problem.n) = a;
  nMat.bottomRows(1).setConstant(weight);
  Eigen::MatrixXd fMat(problem.n + 1, b.cols());
  if (b.cols() > 0) {
    fMat.topRows(problem.n) = b;
    fMat.bottomRows(1).setZero();
  }
  Eigen::VectorXd target = Eigen::VectorXd::Zero(problem.n + 1);
  target[problem.n] = -weight;

  const NnlsResult r = nnls_residual(nMat, fMat, target);
  const double mass = r.alpha.sum();
  if (mass > 1e-8) {
    const Eigen::VectorXd combo = a * r.alpha + (b.cols() > 0 ? (b * r.beta).eval()
                                                              : Eigen::VectorXd::Zero(problem.n).eval());
    const double witnessNorm =
        std::max(r.alpha.lpNorm<Eigen::Infinity>(),
                 r.beta.size() > 0 ? r.beta.lpNorm<Eigen::Infinity>() : 0.0);
    if (combo.lpNorm<Eigen::Infinity>() <= 1e-8 * scale * std::max(1.0, witnessNorm) &&
        witnessNorm >= 1e-8) {
      Eigen::VectorXd witness(a.cols() + b.cols());
      witness << r.alpha, r.beta;
      report.pldWitness = witness;
      report.mpocMfcq = false;
      return report;
    }
  }
  report.mpocMfcq = true;
  return report;
}

}  // namespace orcon
