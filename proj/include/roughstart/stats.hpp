#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace roughstart::stats {

struct LeastSquares {
  Eigen::VectorXd coef;
  /// Standard errors from the residual variance.
  Eigen::VectorXd se;
  double residual_rms = 0.0;
};

/// Ordinary least squares y ~ X coef (column-pivoted QR).
LeastSquares least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
};

/// y ~ intercept + slope x
LineFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
/// Unbiased sample variance.
double variance(std::span<const double> v);
/// sqrt(variance / n)
double standard_error(std::span<const double> v);
/// Linear-interpolation quantile (q in [0, 1]).
double quantile(std::vector<double> v, double q);

/// P[Z >= x] for a standard normal Z.
double normal_upper_tail(double x);

struct KSResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace roughstart::stats
