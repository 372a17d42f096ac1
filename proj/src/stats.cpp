#include "roughstart/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "roughstart/common.hpp"

namespace roughstart::stats {

LeastSquares least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw ValidationError("least_squares: row mismatch");
  if (X.rows() <= X.cols()) throw ValidationError("least_squares: need more rows than unknowns");
  LeastSquares out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < X.cols()) throw NumericalError("least_squares: rank-deficient design");
  out.coef = qr.solve(y);
  const Eigen::VectorXd r = y - X * out.coef;
  const double dof = static_cast<double>(X.rows() - X.cols());
  const double s2 = r.squaredNorm() / dof;
  out.residual_rms = std::sqrt(r.squaredNorm() / static_cast<double>(X.rows()));
  const Eigen::MatrixXd cov = (X.transpose() * X).inverse() * s2;
  out.se = cov.diagonal().cwiseSqrt();
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit_line: size mismatch");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = x[static_cast<std::size_t>(i)];
    Y(i) = y[static_cast<std::size_t>(i)];
  }
  const auto ls = least_squares(X, Y);
  return {ls.coef(1), ls.coef(0), ls.se(1), ls.se(0)};
}

double mean(std::span<const double> v) {
  if (v.empty()) throw ValidationError("mean: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) throw ValidationError("variance: need at least two values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double standard_error(std::span<const double> v) { return std::sqrt(variance(v) / static_cast<double>(v.size())); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw ValidationError("quantile: empty sample");
  if (q < 0 || q > 1) throw ValidationError("quantile: q outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1 - w) * v[lo] + w * v[hi];
}

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ValidationError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  if (lambda < 1e-3) {
    p = 1.0;
  } else {
    for (int k = 1; k <= 100; ++k) {
      const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
      p += term;
      if (std::abs(term) < 1e-12) break;
    }
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace roughstart::stats
