#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orcon/model.hpp"

namespace orcon {

/// Sign pattern of the or-pairs at a feasible point. Index sets are 0-based
/// and named by (sign of G_l, sign of H_l) with M = minus, P = plus: iM0 is
/// {G<0, H=0}, i0P is {G=0, H>0}, and so on. The eight sets partition
/// {0..q-1}.
struct OrActivePattern {
  std::vector<int> iM0, i0M, iMP, iPM, i0P, iP0, iMM, i00;
  std::vector<int> activeG;
  double tolerance = 0;

  /// I(x) = i0P u iP0 u i00, sorted ascending.
  std::vector<int> activeOr() const;
};

/// Classifies each or-pair by the signs of (G_l(x), H_l(x)) with |.| <= eps
/// treated as zero. Throws InfeasiblePoint when x is infeasible at eps.
OrActivePattern active_pattern(const MpocProblem& problem, const Eigen::VectorXd& x,
                               double eps);

enum class StatClass : std::uint8_t { W, C, M, S };
const char* to_string(StatClass c);
/// Parses "W" / "C" / "M" / "S".
std::optional<StatClass> stat_class_from_string(const std::string& s);

/// Outcome of a multiplier-recovery attempt for one stationarity class.
/// Multipliers are stored per constraint index of the certified problem;
/// mu/nu entries pair an or-index with its recovered value (absent indices
/// carry a zero multiplier).
struct StationarityCertificate {
  std::string problemClass;  // "MPOC", "MPSC", or "MPCC"
  StatClass claimedClass = StatClass::W;
  std::vector<std::pair<int, double>> lambda;  // active inequality index -> value
  Eigen::VectorXd rho;                         // equality multipliers
  std::vector<std::pair<int, double>> mu;      // or-index -> G-side multiplier
  std::vector<std::pair<int, double>> nu;      // or-index -> H-side multiplier
  double residualNorm = 0;
  std::vector<int> biactive;        // biactive or-indices, sorted
  std::vector<std::int8_t> branch;  // winning branch code per biactive index
  bool holds = false;
};

/// W/M/S certification for an MPOC point via nonnegative least squares on
/// the active gradient family. M enumerates all sign branches over the
/// biactive set (refused above 20 indices). eps_stat <= 0 selects the
/// default 1e-6 * max(1, ||grad f(x)||_2).
StationarityCertificate certify_mpoc(const MpocProblem& problem, const Eigen::VectorXd& x,
                                     StatClass cls, double epsAct = 1e-6,
                                     double epsStat = -1);

/// A switching-constrained program: g <= 0, h = 0, Gt_l(x) * Ht_l(x) = 0.
struct SwitchingProblem {
  int n = 0;
  SmoothFn f;
  std::vector<SmoothFn> g;
  std::vector<SmoothFn> h;
  std::vector<std::pair<SmoothFn, SmoothFn>> pairs;
  std::string name;
};

/// A complementarity-constrained program: g <= 0, h = 0,
/// 0 <= Gb_l(x) perp Hb_l(x) >= 0.
struct ComplementarityProblem {
  int n = 0;
  SmoothFn f;
  std::vector<SmoothFn> g;
  std::vector<SmoothFn> h;
  std::vector<std::pair<SmoothFn, SmoothFn>> pairs;
  std::string name;
};

/// W/M/S certification for a switching-constrained point; the pair
/// multipliers are free, M enumerates product-zero branches on the
/// biactive set {Gt = Ht = 0}. StatClass::C is invalid here.
StationarityCertificate certify_mpsc(const SwitchingProblem& problem,
                                     const Eigen::VectorXd& x, StatClass cls,
                                     double epsAct = 1e-6, double epsStat = -1);

/// W/C/M/S certification for a complementarity-constrained point. The pair
/// multipliers enter the stationarity system with a minus sign; C uses
/// two-branch (both >= 0 / both <= 0) and M three-branch enumeration per
/// biactive index.
StationarityCertificate certify_mpcc(const ComplementarityProblem& problem,
                                     const Eigen::VectorXd& x, StatClass cls,
                                     double epsAct = 1e-6, double epsStat = -1);

struct CqReport {
  bool mpocLicq = false;
  bool mpocMfcq = false;
  double smallestSingularValue = 0;
  std::optional<Eigen::VectorXd> pldWitness;  // concatenated (alpha, beta)
};

/// LICQ part: the active MPOC gradient family is linearly independent iff
/// its smallest singular value exceeds 1e-8 times the largest.
CqReport check_mpoc_licq(const MpocProblem& problem, const Eigen::VectorXd& x,
                         double epsAct = 1e-6);

/// MFCQ part: positive-linear independence of the same family, decided by a
/// rank test on the equality block plus an NNLS solve of the homogeneous
/// system under the normalization sum(alpha) = 1.
CqReport check_mpoc_mfcq(const MpocProblem& problem, const Eigen::VectorXd& x,
                         double epsAct = 1e-6);

}  // namespace orcon
