#include "roughstart/criticality.hpp"

#include <algorithm>
#include <cmath>

#include "roughstart/littlewood_paley.hpp"
#include "roughstart/stats.hpp"

namespace roughstart {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::deterministic_sufficient: return "deterministic_sufficient";
    case Regime::random_ic_helps: return "random_ic_helps";
    case Regime::random_ic_insufficient: return "random_ic_insufficient";
    case Regime::critical_open: return "critical_open";
  }
  return "critical_open";
}

Regime regime_from_string(const std::string& name) {
  for (auto r : {Regime::deterministic_sufficient, Regime::random_ic_helps, Regime::random_ic_insufficient,
                 Regime::critical_open})
    if (to_string(r) == name) return r;
  throw ValidationError("unknown regime '" + name + "'");
}

Rational ChiExponents::beta0(const Rational& alpha) const {
  return std::max((alpha + chi1) / tau, positive_part(chi0 / tau));
}

double ChiExponents::beta0(double alpha) const {
  const double t = to_double(tau);
  return std::max((alpha + to_double(chi1)) / t, std::max(to_double(chi0) / t, 0.0));
}

Rational ChiExponents::kink() const { return tau * positive_part(chi0 / tau) - chi1; }

ChiExponents chi_exponents(const EquationSpec& spec, const Rational& theta) {
  const Rational half_d(spec.d, 2);
  ChiExponents c;
  c.tau = spec.tau;
  c.chi0 = Rational(2) * spec.b + Rational(2) * theta + half_d;
  c.chi1 = spec.a + spec.b + theta + positive_part(spec.b + theta + half_d);
  return c;
}

CriticalityReport classify(const EquationSpec& spec, const Rational& theta) {
  spec.validate();
  CriticalityReport r;
  r.kind = spec.kind;
  r.tau = spec.tau;
  r.a = spec.a;
  r.b = spec.b;
  r.d = spec.d;
  r.degree_m = spec.degree_m;
  r.theta = theta;
  r.sigma = spec.sigma;
  r.alpha_min = spec.alpha_min;
  r.delta = Rational(1) - (r.alpha_min + r.sigma) / r.tau;
  r.critical_exponent = -r.sigma;
  const ChiExponents chi = chi_exponents(spec, theta);
  r.chi0 = chi.chi0;
  r.chi1 = chi.chi1;
  r.beta0_at_alpha_min = chi.beta0(r.alpha_min);

  const Rational threshold(1, spec.degree_m);
  if (r.delta > threshold)
    r.regime = Regime::deterministic_sufficient;
  else if (r.delta == threshold)
    r.regime = Regime::critical_open;
  else
    r.regime = chi.chi0 / r.tau < Rational(1) ? Regime::random_ic_helps : Regime::random_ic_insufficient;

  r.r_threshold_fix1 = r.delta > Rational(1, 2) ? -r.sigma : r.alpha_min - r.tau / Rational(2);
  r.r_threshold_fix2 = r.r_threshold_fix1;
  r.notes.push_back("r thresholds of fix1 and fix2 coincide (" + to_string(r.r_threshold_fix1) + ")");
  r.notes.push_back(r.delta > threshold ? "delta > 1/m (strict)"
                                        : (r.delta == threshold ? "delta = 1/m (borderline)" : "delta < 1/m (strict)"));
  if (r.regime == Regime::random_ic_helps || r.regime == Regime::random_ic_insufficient)
    r.notes.push_back("chi0/tau = " + to_string(chi.chi0 / r.tau) + (chi.chi0 / r.tau < Rational(1) ? " < 1" : " >= 1"));
  if (spec.degree_m > 2) r.notes.push_back("general-degree sigma = (tau - a - m b)/(m - 1) (extension)");
  if (!spec.mass_conserving)
    r.notes.push_back("advisory: mass non-conserving; the U = xi + u decomposition is not supported by the solver");
  if (!spec.sharp) r.notes.push_back("wavewise bound not sharp; exponents are upper estimates");
  if (spec.inexact_input) r.notes.push_back("some exponents were approximated from decimal input");
  return r;
}

namespace {

template <class T>
bool case1(const T& beta, const T& gamma, const T& inv_p, const T& beta0, const T& c0) {
  const T one(1), two(2), zero(0);
  const T c0p = c0 > zero ? c0 : zero;
  return gamma < inv_p / (one - beta) && gamma - inv_p < beta + one - beta0 && gamma - inv_p > zero &&
         gamma < two - beta0 && inv_p > c0p - beta;
}

template <class T>
bool case2(const T& beta, const T& gamma, const T& inv_p, const T& beta0) {
  const T one(1), zero(0);
  return inv_p > beta0 && gamma - (beta + one - beta0) < inv_p && gamma - inv_p > zero;
}

template <class T>
bool eta2_impl(const T& beta, const T& gamma, const T& inv_p, const T& beta0, const T& c0, int which_case) {
  const T zero(0), one(1);
  if (which_case == 1) {
    if (!(beta > beta0 - one && beta < one)) throw ValidationError("eta2_feasibility: case 1 needs beta in (beta0 - 1, 1)");
  } else if (which_case == 2) {
    if (!(beta > beta0 - one && beta < zero)) throw ValidationError("eta2_feasibility: case 2 needs beta in (beta0 - 1, 0)");
  } else {
    throw ValidationError("eta2_feasibility: case must be 1 or 2");
  }
  if (!(gamma > zero && gamma < one && inv_p > zero && inv_p <= one)) return false;
  return which_case == 1 ? case1(beta, gamma, inv_p, beta0, c0) : case2(beta, gamma, inv_p, beta0);
}

}  // namespace

bool eta2_feasibility(const FeasibilityQuery& q, double beta0, double chi0_over_tau, int which_case) {
  return eta2_impl(q.beta, q.gamma, q.inv_p, beta0, chi0_over_tau, which_case);
}

bool eta2_feasibility(const Rational& beta, const Rational& gamma, const Rational& inv_p, const Rational& beta0,
                      const Rational& chi0_over_tau, int which_case) {
  return eta2_impl(beta, gamma, inv_p, beta0, chi0_over_tau, which_case);
}

std::optional<std::pair<double, double>> eta2_region_point(double beta, double beta0, double chi0_over_tau,
                                                           int which_case, int resolution) {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < resolution; ++i) {
    const double gamma = (i + 0.5) / resolution;
    for (int k = 0; k < resolution; ++k) {
      const double inv_p = (k + 1.0) / resolution;
      FeasibilityQuery q{0.0, beta, gamma, inv_p};
      if (eta2_feasibility(q, beta0, chi0_over_tau, which_case)) pts.emplace_back(gamma, inv_p);
    }
  }
  if (pts.empty()) return std::nullopt;
  double cg = 0, cp = 0;
  for (auto& [g, p] : pts) {
    cg += g;
    cp += p;
  }
  cg /= static_cast<double>(pts.size());
  cp /= static_cast<double>(pts.size());
  return *std::min_element(pts.begin(), pts.end(), [&](const auto& x, const auto& y) {
    return std::hypot(x.first - cg, x.second - cp) < std::hypot(y.first - cg, y.second - cp);
  });
}

namespace {

// Calls visit(term) for every term of the series that can matter.
template <class Visit>
void lacunary_terms(double nu, double p, double tau, double t, Visit visit) {
  if (!(t > 0) || p < 0 || !(tau > 0)) throw ValidationError("asymptotic series: need t > 0, p >= 0, tau > 0");
  double sum = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double expo = std::exp2(tau * n) * t;
    const double term = std::exp(nu * std::log(static_cast<double>(n)) + p * n * std::log(2.0) - expo);
    visit(term);
    sum += term;
    // past the peak once the exponential dominates
    const bool decaying = expo * tau * std::log(2.0) > p * std::log(2.0) + nu / n + 1.0;
    if (decaying && term <= 1e-16 * sum) break;
  }
}

}  // namespace

double asymptotic_G(double nu, double p, double tau, double t) {
  double s = 0.0;
  lacunary_terms(nu, p, tau, t, [&](double x) { s += x; });
  return s;
}

double asymptotic_H(double nu, double p, double tau, double t) {
  double m = 0.0;
  lacunary_terms(nu, p, tau, t, [&](double x) { m = std::max(m, x); });
  return m;
}

AsymptoticReport asymptotic_check(double nu, double p, double tau, int per_decade) {
  AsymptoticReport rep{nu, p, tau, 0.0, std::numeric_limits<double>::infinity(), 0.0, 0.0, 1e-6, 1e-3};
  std::vector<double> lx, ly;
  const int n = 6 * per_decade;
  for (int i = 0; i <= n; ++i) {
    const double t = std::pow(10.0, -6.0 + static_cast<double>(i) / per_decade);
    const double g = asymptotic_G(nu, p, tau, t);
    const double lg = std::pow(tamed_log(t), nu);
    const double comp = g * std::pow(t, p / tau) / lg;
    rep.compensated_sup = std::max(rep.compensated_sup, comp);
    rep.compensated_inf = std::min(rep.compensated_inf, comp);
    if (t <= rep.slope_hi * (1 + 1e-12)) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(g / lg));
    }
  }
  const auto fit = stats::fit_line(lx, ly);
  rep.slope = fit.slope;
  rep.slope_stderr = fit.slope_se;
  return rep;
}

}  // namespace roughstart
