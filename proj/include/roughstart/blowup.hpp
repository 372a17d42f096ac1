#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughstart/random_ic.hpp"

namespace roughstart {

/// Per-mode Riccati dynamics d/dt xi_k = -k^2 xi_k + k xi_k^2 of the odd
/// convolution example.
enum class BlowupRegime { subcritical_lemma1, critical_lemma2 };

std::string to_string(BlowupRegime r);
BlowupRegime blowup_regime_from_string(const std::string& name);

struct BlowupWeightSpec {
  BlowupRegime regime = BlowupRegime::subcritical_lemma1;
  /// Lemma 1: sigma_k = k / (lambda sqrt(log k) (1 - e^{-epsilon k^2})).
  double lambda = 1.6;
  double epsilon = 0.1;
  /// Lemma 2: epsilon_k = eps_c k^{eps_s - 2}.
  double eps_c = 1.0;
  double eps_s = 0.0;
  int K_max = 2000;
  std::uint64_t seed = 0;

  /// Throws ValidationError on violated invariants.
  void validate() const;
  /// epsilon_k of lemma 2.
  double epsilon_k(int k) const;
  /// sigma_k for k >= 1 (sigma_1 := sigma_2).
  double sigma(int k) const;
  /// Time scale defining the event tau_k <= eps: epsilon (lemma 1) or epsilon_k (lemma 2).
  double event_time(int k) const;
};

struct BlowupSample {
  /// xi0[k-1] = xi_k(0), k = 1..K_max
  std::vector<double> xi0;
  std::vector<double> tau;
  double inf_tau = 0.0;
  int argmin_k = 0;
};

/// -(1/k^2) log(1 - k / xi0), +infinity when undefined or nonpositive.
double blowup_time(int k, double xi0);

struct OdeOutcome {
  bool blew_up = false;
  /// Escape time (extrapolated past the 1e12 threshold) when blew_up.
  double blowup_time = 0.0;
  double t_reached = 0.0;
  double final_value = 0.0;
  std::size_t steps = 0;
  std::vector<double> times;
  std::vector<double> values;
};

/// Adaptive Dormand-Prince integration of the mode ODE to t_end.
OdeOutcome mode_ode_oracle(int k, double xi0, double t_end, double tol = 1e-10, std::size_t max_steps = 50'000'000);

/// sigma_k for k = 1..K_max.
std::vector<double> sample_sigmas(const BlowupWeightSpec& spec);

/// Replica `replica` of (xi_k(0)) with blow-up times.
BlowupSample sample_weights(const BlowupWeightSpec& spec, std::uint64_t replica = 0);

/// Standard normal upper tail Q(x).
double gaussian_tail(double x);

/// Exact P[tau_k <= eps] = Q(k / (sigma_k (1 - e^{-eps k^2}))).
double tau_probability(int k, double sigma_k, double eps);

struct ModeRow {
  int k;
  double sigma;
  double event_time;
  double p_analytic;
  double p_empirical;
  double se;
};

struct EpsilonRow {
  double epsilon;
  /// Fraction of samples with min_k tau_k <= epsilon.
  double p_inf;
  double se;
  /// sum_k P[tau_k <= epsilon] (exact per mode).
  double union_bound;
  /// Lemma-1 tail sum P[tau_1 <= epsilon] + sum_{k >= 2} Q(lambda sqrt(log k)),
  /// valid for epsilon <= spec.epsilon; 0 in lemma 2.
  double tail_bound;
};

struct CountRow {
  int K;
  /// Mean number of k <= K with tau_k <= epsilon_k.
  double mean_count;
  double se;
  /// sum_{k <= K} P[tau_k <= epsilon_k]
  double expected;
};

struct TrichotomyReport {
  BlowupWeightSpec spec;
  std::size_t M = 0;
  std::vector<double> inf_tau;
  std::vector<EpsilonRow> epsilon_rows;
  std::vector<ModeRow> modes;
  std::vector<CountRow> counts;
  /// Median of min_{k <= K} tau_k at K = K_max / 8, / 4, / 2, K_max.
  std::vector<double> median_inf_tau;
  bool pass = false;
  std::string verdict;
};

/// Monte-Carlo over M samples. The epsilon rows evaluate the events
/// min_k tau_k <= eps for each eps of the grid.
TrichotomyReport trichotomy_mc(const BlowupWeightSpec& spec, std::size_t M, const std::vector<double>& epsilon_grid);

/// Xi = sum_k xi_k sin(k x) truncated to |k| <= N.
SpectralField xi_field(const BlowupSample& sample, int N);

struct XiRegularity {
  ProbeTable table;
  double slope = 0.0;
  double slope_se = 0.0;
};

/// Block-growth fit of ||Delta_j Xi||_inf over M samples on the lattice of radius N.
XiRegularity regularity_of_Xi(const BlowupWeightSpec& spec, int N, std::size_t M);

std::string modes_csv(const TrichotomyReport& report);

}  // namespace roughstart
