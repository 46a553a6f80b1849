#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace orcon::ncp {

/// A scalar function of two variables with an optional gradient. The gradient
/// callback returns nullopt wherever the function is not differentiable.
struct Scalar2Fn {
  std::function<double(double, double)> eval;
  std::function<std::optional<Eigen::Vector2d>(double, double)> grad;
};

double phi_min(double a, double b);
double phi_fb(double a, double b);
double phi_ks(double a, double b);

/// Smoothed Fischer-Burmeister: a + b - sqrt(a^2 + b^2 + 2t), smooth for
/// t > 0 and equal to phi_fb at t = 0.
double phi_fb_t(double a, double b, double t);

/// Offset Kanzow-Schwartz: phi_ks(a, b) - t.
double phi_ks_t(double a, double b, double t);

std::optional<Eigen::Vector2d> grad_phi_min(double a, double b);
std::optional<Eigen::Vector2d> grad_phi_fb(double a, double b);
Eigen::Vector2d grad_phi_ks(double a, double b);
std::optional<Eigen::Vector2d> grad_phi_fb_t(double a, double b, double t);
Eigen::Vector2d grad_phi_ks_t(double a, double b, double t);

Scalar2Fn make_phi_min();
Scalar2Fn make_phi_fb();
Scalar2Fn make_phi_ks();

/// Sign-pattern classes an NCP-function can fall into, plus the two
/// rejection outcomes. InconsistentSigns means the sampled signs within a
/// region were mixed (so no pattern fits); NotAnNcpFunction means the
/// zero-level test failed somewhere.
enum class NcpClass : std::uint8_t {
  Ncp1,
  Ncp2,
  Ncp3,
  Ncp4,
  NotAnNcpFunction,
  InconsistentSigns,
};

const char* to_string(NcpClass c);

/// Samples the open regions A = {a>0, b>0} and B = {a<0 or b<0} on
/// [-10,10]^2 plus the complementarity set C and returns the unique
/// consistent sign pattern. Throws InvalidArgument if samples < 100.
NcpClass classify_ncp(const Scalar2Fn& f, int samples, std::uint64_t seed);

enum class SubdiffKind : std::uint8_t { Singleton, FinitePair, Segment, Disk, Circle };

/// A subdifferential set on the complementarity set: finitely many points, a
/// segment between two points, or a disk/circle given by center and radius.
struct SubdiffSet {
  SubdiffKind kind;
  std::vector<Eigen::Vector2d> points;  // singleton/pair members or segment endpoints
  Eigen::Vector2d center{0, 0};
  double radius = 0;

  bool contains(const Eigen::Vector2d& p, double tol = 1e-12) const;
};

enum class PhiId : std::uint8_t { Min, Fb };
enum class SubdiffRule : std::uint8_t { Clarke, Mordukhovich };

/// Subdifferential of phi_min / phi_fb at a point of C = {a,b >= 0, ab = 0}.
/// Throws PointNotInComplementaritySet when (a, b) is outside C (tol 1e-12).
SubdiffSet subdiff(PhiId phi, SubdiffRule rule, double a, double b);

struct FbLift {
  double xi;
  double alpha;
  double beta;
};

/// Multiplier lift used to express a W-stationary point as a KKT point of the
/// Fischer-Burmeister reformulation: xi = mu + nu + sqrt(2 mu nu), and
/// (alpha, beta) on the circle S^1((1,1)) with xi*alpha = mu, xi*beta = nu
/// whenever xi > 0.
FbLift fb_multiplier_lift(double mu, double nu);

}  // namespace orcon::ncp
