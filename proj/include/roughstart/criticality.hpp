#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roughstart/common.hpp"
#include "roughstart/equations.hpp"

namespace roughstart {

enum class Regime { deterministic_sufficient, random_ic_helps, random_ic_insufficient, critical_open };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& name);

struct ChiExponents {
  Rational chi0;
  Rational chi1;
  Rational tau;
  /// beta_0(alpha) = max((alpha + chi1)/tau, (chi0/tau)_+)
  Rational beta0(const Rational& alpha) const;
  double beta0(double alpha) const;
  /// Kink of beta_0: tau (chi0/tau)_+ - chi1.
  Rational kink() const;
};

/// chi0 = 2b + 2 theta + d/2, chi1 = a + b + theta + (b + theta + d/2)_+.
ChiExponents chi_exponents(const EquationSpec& spec, const Rational& theta);

struct CriticalityReport {
  EquationKind kind = EquationKind::generic;
  Rational tau, a, b;
  int d = 1;
  int degree_m = 2;
  Rational theta;
  Rational sigma;
  Rational alpha_min;
  Rational delta;
  /// Hoelder index of the critical space, -sigma.
  Rational critical_exponent;
  Rational chi0, chi1;
  /// beta_0 at alpha_min.
  Rational beta0_at_alpha_min;
  Regime regime = Regime::critical_open;
  /// Initial data in C^r works for r > threshold.
  Rational r_threshold_fix1;
  Rational r_threshold_fix2;
  std::vector<std::string> notes;

  ChiExponents chi() const { return {chi0, chi1, tau}; }
};

/// Scaling and regime classification at spatial noise exponent theta.
CriticalityReport classify(const EquationSpec& spec, const Rational& theta);
inline CriticalityReport classify(const EquationSpec& spec) { return classify(spec, spec.theta_default); }

/// beta < 1/2 and beta <= 1 - delta.
template <class T>
bool fix1_feasible(const T& beta, const T& delta) {
  return beta < T(1) / T(2) && beta <= T(1) - delta;
}

/// fix1 conditions plus gamma + beta < 1 and delta + gamma <= 1.
template <class T>
bool fix2_feasible(const T& beta, const T& gamma, const T& delta) {
  return beta < T(1) / T(2) && beta + delta <= T(1) && gamma + beta < T(1) && delta + gamma <= T(1);
}

struct FeasibilityQuery {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double inv_p = 1.0;
};

/// Conditions on (gamma, 1/p) for the time-Sobolev regularity of eta^2.
/// Case 1: beta in (beta0 - 1, 1); case 2: beta in (beta0 - 1, 0).
bool eta2_feasibility(const FeasibilityQuery& q, double beta0, double chi0_over_tau, int which_case);
bool eta2_feasibility(const Rational& beta, const Rational& gamma, const Rational& inv_p, const Rational& beta0,
                      const Rational& chi0_over_tau, int which_case);

/// 200 x 200 grid search over (gamma, 1/p) in (0, 1) x (0, 1]; returns the
/// feasible grid point nearest the centroid of the feasible cells.
std::optional<std::pair<double, double>> eta2_region_point(double beta, double beta0, double chi0_over_tau,
                                                           int which_case, int resolution = 200);

/// G_{nu,p,tau}(t) = sum_{n >= 1} n^nu 2^{p n} exp(-2^{tau n} t).
double asymptotic_G(double nu, double p, double tau, double t);
/// H_{nu,p,tau}(t) = max_{n >= 1} n^nu 2^{p n} exp(-2^{tau n} t).
double asymptotic_H(double nu, double p, double tau, double t);

struct AsymptoticReport {
  double nu, p, tau;
  /// sup over the sample times of G t^{p/tau} l(t)^{-nu}
  double compensated_sup;
  double compensated_inf;
  /// log-log slope of G on [slope_lo, slope_hi]
  double slope;
  double slope_stderr;
  double slope_lo, slope_hi;
};

/// Samples [1e-6, 1] log-uniformly (points per decade), fits the slope on
/// [1e-6, 1e-3].
AsymptoticReport asymptotic_check(double nu, double p, double tau, int per_decade = 50);

}  // namespace roughstart
