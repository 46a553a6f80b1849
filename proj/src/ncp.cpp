#include "orcon/ncp.hpp"

#include <cmath>
#include <cstdlib>

#include "orcon/errors.hpp"
#include "orcon/rng.hpp"

namespace orcon::ncp {

namespace {
constexpr double kZeroTol = 1e-12;
}

double phi_min(double a, double b) { return std::min(a, b); }

double phi_fb(double a, double b) { return a + b - std::hypot(a, b); }

double phi_ks(double a, double b) {
  if (a + b >= 0) return a * b;
  return -0.5 * (a * a + b * b);
}

double phi_fb_t(double a, double b, double t) {
  return a + b - std::sqrt(a * a + b * b + 2 * t);
}

double phi_ks_t(double a, double b, double t) { return phi_ks(a, b) - t; }

std::optional<Eigen::Vector2d> grad_phi_min(double a, double b) {
  if (a == b) return std::nullopt;
  if (a < b) return Eigen::Vector2d(1, 0);
  return Eigen::Vector2d(0, 1);
}

std::optional<Eigen::Vector2d> grad_phi_fb(double a, double b) {
  const double r = std::hypot(a, b);
  if (r == 0) return std::nullopt;
  return Eigen::Vector2d(1 - a / r, 1 - b / r);
}

Eigen::Vector2d grad_phi_ks(double a, double b) {
  // Both branch formulas agree on a + b = 0, so the seam needs no tolerance.
  if (a + b >= 0) return Eigen::Vector2d(b, a);
  return Eigen::Vector2d(-a, -b);
}

std::optional<Eigen::Vector2d> grad_phi_fb_t(double a, double b, double t) {
  const double r = std::sqrt(a * a + b * b + 2 * t);
  if (r == 0) return std::nullopt;
  return Eigen::Vector2d(1 - a / r, 1 - b / r);
}

Eigen::Vector2d grad_phi_ks_t(double a, double b, double t) {
  (void)t;
  return grad_phi_ks(a, b);
}

Scalar2Fn make_phi_min() {
  return {[](double a, double b) { return phi_min(a, b); },
          [](double a, double b) { return grad_phi_min(a, b); }};
}

Scalar2Fn make_phi_fb() {
  return {[](double a, double b) { return phi_fb(a, b); },
          [](double a, double b) { return grad_phi_fb(a, b); }};
}

Scalar2Fn make_phi_ks() {
  return {[](double a, double b) { return phi_ks(a, b); },
          [](double a, double b) -> std::optional<Eigen::Vector2d> {
            return grad_phi_ks(a, b);
          }};
}

const char* to_string(NcpClass c) {
  switch (c) {
    case NcpClass::Ncp1: return "NCP1";
    case NcpClass::Ncp2: return "NCP2";
    case NcpClass::Ncp3: return "NCP3";
    case NcpClass::Ncp4: return "NCP4";
    case NcpClass::NotAnNcpFunction: return "not-an-NCP-function";
    case NcpClass::InconsistentSigns: return "inconsistent-signs";
  }
  return "?";
}

NcpClass classify_ncp(const Scalar2Fn& f, int samples, std::uint64_t seed) {
  if (samples < 100) throw InvalidArgument("classify_ncp: samples must be >= 100");
  Rng rng(seed);

  // Zero level on C: the two rays plus the origin.
  if (std::abs(f.eval(0, 0)) > kZeroTol) return NcpClass::NotAnNcpFunction;
  for (int i = 0; i < samples; ++i) {
    const double t = rng.uniform(0, 10);
    if (std::abs(f.eval(t, 0)) > kZeroTol || std::abs(f.eval(0, t)) > kZeroTol)
      return NcpClass::NotAnNcpFunction;
  }

  const auto sample_region = [&](bool regionA) {
    for (;;) {
      const double a = rng.uniform(-10, 10);
      const double b = rng.uniform(-10, 10);
      const bool inA = a > 0 && b > 0;
      const bool inB = a < 0 || b < 0;
      if (regionA ? inA : inB) return std::pair<double, double>(a, b);
    }
  };

  int posA = 0, negA = 0, posB = 0, negB = 0;
  for (int i = 0; i < samples; ++i) {
    const auto [a1, b1] = sample_region(true);
    const double va = f.eval(a1, b1);
    if (std::abs(va) <= kZeroTol) return NcpClass::NotAnNcpFunction;
    (va > 0 ? posA : negA)++;

    const auto [a2, b2] = sample_region(false);
    const double vb = f.eval(a2, b2);
    if (std::abs(vb) <= kZeroTol) return NcpClass::NotAnNcpFunction;
    (vb > 0 ? posB : negB)++;
  }

  const bool aPos = posA == samples, aNeg = negA == samples;
  const bool bPos = posB == samples, bNeg = negB == samples;
  if (aPos && bPos) return NcpClass::Ncp1;
  if (aNeg && bNeg) return NcpClass::Ncp2;
  if (aNeg && bPos) return NcpClass::Ncp3;
  if (aPos && bNeg) return NcpClass::Ncp4;
  return NcpClass::InconsistentSigns;
}

bool SubdiffSet::contains(const Eigen::Vector2d& p, double tol) const {
  switch (kind) {
    case SubdiffKind::Singleton:
      return (p - points[0]).norm() <= tol;
    case SubdiffKind::FinitePair:
      return (p - points[0]).norm() <= tol || (p - points[1]).norm() <= tol;
    case SubdiffKind::Segment: {
      const Eigen::Vector2d d = points[1] - points[0];
      const double len2 = d.squaredNorm();
      double s = len2 > 0 ? (p - points[0]).dot(d) / len2 : 0.0;
      s = std::clamp(s, 0.0, 1.0);
      return (p - (points[0] + s * d)).norm() <= tol;
    }
    case SubdiffKind::Disk:
      return (p - center).norm() <= radius + tol;
    case SubdiffKind::Circle:
      return std::abs((p - center).norm() - radius) <= tol;
  }
  return false;
}

SubdiffSet subdiff(PhiId phi, SubdiffRule rule, double a, double b) {
  const bool inC = a >= -kZeroTol && b >= -kZeroTol && std::abs(a * b) <= kZeroTol;
  if (!inC)
    throw PointNotInComplementaritySet("subdiff: point (" + std::to_string(a) + ", " +
                                       std::to_string(b) + ") is not in C");
  const Eigen::Vector2d e1(1, 0), e2(0, 1), ones(1, 1);
  const bool aZero = std::abs(a) <= kZeroTol;
  const bool bZero = std::abs(b) <= kZeroTol;

  if (aZero && !bZero) return {SubdiffKind::Singleton, {e1}};
  if (!aZero && bZero) return {SubdiffKind::Singleton, {e2}};

  // Origin: the only point where the two functions and rules differ.
  if (phi == PhiId::Min) {
    if (rule == SubdiffRule::Clarke) return {SubdiffKind::Segment, {e1, e2}};
    return {SubdiffKind::FinitePair, {e1, e2}};
  }
  if (rule == SubdiffRule::Clarke) return {SubdiffKind::Disk, {}, ones, 1.0};
  return {SubdiffKind::Circle, {}, ones, 1.0};
}

FbLift fb_multiplier_lift(double mu, double nu) {
  const double xi = mu + nu + std::sqrt(2 * mu * nu);
  if (xi == 0) {
    const double c = 1 - std::sqrt(2.0) / 2;
    return {0.0, c, c};
  }
  return {xi, mu / xi, nu / xi};
}

}  // namespace orcon::ncp
