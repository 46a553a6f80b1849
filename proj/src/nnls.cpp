#include "orcon/nnls.hpp"

#include <Eigen/QR>
#include <limits>
#include <vector>

namespace orcon {

namespace {

// Least squares on the passive columns; returns the coefficients in the
// order of `passive`.
Eigen::VectorXd ls_on(const Eigen::MatrixXd& a, const std::vector<int>& passive,
                      const Eigen::VectorXd& b) {
  Eigen::MatrixXd ap(a.rows(), passive.size());
  for (std::size_t k = 0; k < passive.size(); ++k) ap.col(k) = a.col(passive[k]);
  return ap.colPivHouseholderQr().solve(b);
}

// Classic Lawson-Hanson: min ||A x - b|| s.t. x >= 0.
Eigen::VectorXd lawson_hanson(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int nc = static_cast<int>(a.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nc);
  if (nc == 0) return x;

  std::vector<bool> inPassive(nc, false);
  std::vector<int> passive;
  const double wTol = 1e-12 * std::max(1.0, (a.transpose() * b).lpNorm<Eigen::Infinity>());
  const int maxOuter = 5 * nc + 20;

  for (int outer = 0; outer < maxOuter; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    int enter = -1;
    double best = wTol;
    for (int j = 0; j < nc; ++j)
      if (!inPassive[j] && w[j] > best) {
        best = w[j];
        enter = j;  // strict > keeps the lowest index on ties
      }
    if (enter < 0) break;
    inPassive[enter] = true;
    passive.push_back(enter);

    for (;;) {
      Eigen::VectorXd z = ls_on(a, passive, b);
      bool allPos = true;
      for (int k = 0; k < z.size(); ++k)
        if (z[k] <= 0) {
          allPos = false;
          break;
        }
      if (allPos) {
        for (std::size_t k = 0; k < passive.size(); ++k) x[passive[k]] = z[k];
        break;
      }
      double step = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < passive.size(); ++k)
        if (z[k] <= 0) {
          const double xi = x[passive[k]];
          step = std::min(step, xi / (xi - z[k]));
        }
      for (std::size_t k = 0; k < passive.size(); ++k)
        x[passive[k]] += step * (z[k] - x[passive[k]]);
      std::vector<int> keep;
      for (int j : passive) {
        if (x[j] <= 1e-14) {
          x[j] = 0;
          inPassive[j] = false;
        } else {
          keep.push_back(j);
        }
      }
      passive = keep;
      if (passive.empty()) break;
    }
  }
  return x;
}

}  // namespace

NnlsResult nnls_residual(const Eigen::MatrixXd& nonneg, const Eigen::MatrixXd& freeCols,
                         const Eigen::VectorXd& target) {
  const auto rows = target.size();
  NnlsResult out;
  out.alpha = Eigen::VectorXd::Zero(nonneg.cols());
  out.beta = Eigen::VectorXd::Zero(freeCols.cols());

  if (freeCols.cols() == 0) {
    if (nonneg.cols() > 0) out.alpha = lawson_hanson(nonneg, -target);
    out.residualNorm = (target + nonneg * out.alpha).norm();
    return out;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(freeCols);
  // Project the nonneg columns and the target onto range(F)^perp.
  const auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - freeCols * qr.solve(v);
  };
  Eigen::MatrixXd an(rows, nonneg.cols());
  for (int j = 0; j < nonneg.cols(); ++j) an.col(j) = project(nonneg.col(j));
  if (nonneg.cols() > 0) out.alpha = lawson_hanson(an, -project(target));
  out.beta = -qr.solve(target + nonneg * out.alpha);
  out.residualNorm = (target + nonneg * out.alpha + freeCols * out.beta).norm();
  return out;
}

}  // namespace orcon
