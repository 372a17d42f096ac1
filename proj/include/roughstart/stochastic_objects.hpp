#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughstart/equations.hpp"
#include "roughstart/littlewood_paley.hpp"
#include "roughstart/random_ic.hpp"
#include "roughstart/trajectory.hpp"

namespace roughstart {

/// eta0 = e^{tA} u0, eta1 = B(eta0, eta0), eta2 = V(eta0, eta0).
struct StochasticTrajectory {
  Trajectory eta0;
  Trajectory eta1;
  Trajectory eta2;
  EquationSpec equation;
  std::optional<GaussianICSpec> ic;
  std::uint64_t replica = 0;
  std::string quadrature = "product-integration, linear in s, exact exponential kernel";
};

/// Builds the three objects on a grid graded toward 0.
StochasticTrajectory build_objects(const SpectralField& u0, const EquationSpec& spec, const TimeGrid& grid);
StochasticTrajectory build_objects(const GaussianICSpec& ic, std::uint64_t replica, const EquationSpec& spec,
                                   const TimeGrid& grid);

/// eta1(t) = B(e^{tA} u0, e^{tA} u0) at a single time.
SpectralField eta1_at(const LinearOperator& op, const SpectralField& u0, double t);

/// Exact E[|Delta_j eta1(t, 0)|^2] by the Wick pairing sum on the lattice.
double exact_second_moment(const GaussianICSpec& ic, const EquationSpec& spec, int j, double t,
                           const DyadicPartition& partition);

/// Delta_j eta1(t, 0) for one sample u0.
double block_value_at_origin(const LinearOperator& op, const SpectralField& u0, int j, double t,
                             const DyadicPartition& partition);

struct MomentEstimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Monte-Carlo estimate of E[|Delta_j eta1(t, 0)|^2] over replicas 0..M-1.
MomentEstimate mc_second_moment(const GaussianICSpec& ic, const EquationSpec& spec, int j, double t,
                                const DyadicPartition& partition, std::size_t M);

struct ExponentFit {
  double beta_hat = 0.0;
  double se = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<double> values;
};

/// Fits values ~ C t^{-beta_hat} by log-log regression.
ExponentFit fit_power_law(std::span<const double> times, std::span<const double> values, double alpha);

struct FitWindow {
  /// 0 selects 4 N^{-tau}.
  double t_min = 0.0;
  double t_max = 0.1;
  int points = 12;
};

/// Log-spaced fit times; throws when the window reaches below N^{-tau}.
std::vector<double> fit_times(int N, double tau, const FitWindow& window);

/// Gaussian-chaos proxy sup_j 2^{j alpha} E[|Delta_j eta1(t)|^2]^{1/2} from
/// the exact Wick sums.
double exact_norm_proxy(const GaussianICSpec& ic, const EquationSpec& spec, double alpha, double t,
                        const DyadicPartition& partition);

struct EnsembleCurves {
  std::vector<double> times;
  std::vector<double> eta1_mean, eta1_se;
  std::vector<double> eta2_mean, eta2_se;
};

struct EnsembleOptions {
  std::size_t M = 100;
  double alpha = 0.0;
  FitWindow window{};
  bool with_eta2 = true;
  /// Nodes per decade of the graded grid used for eta2.
  int per_decade = 60;
};

/// E||eta1(t)||_alpha and E||eta2(t)||_alpha over M replicas at the fit
/// times (eta2 fit times are snapped to grid nodes).
EnsembleCurves ensemble_curves(const GaussianICSpec& ic, const EquationSpec& spec, const DyadicPartition& partition,
                               const EnsembleOptions& options);

/// ||eta1(t)||_alpha for a fixed u0 at the fit times.
std::vector<double> deterministic_curve(const SpectralField& u0, const EquationSpec& spec, double alpha,
                                        std::span<const double> times, const DyadicPartition& partition);

struct SingularityVerdict {
  ExponentFit fit;
  double beta0 = 0.0;
  /// beta_hat <= bound + slack
  bool pass = false;
};

/// Compares a fitted exponent with a bound (beta0(alpha) for eta1,
/// beta0(alpha) - 1 for eta2).
SingularityVerdict singularity_verdict(const ExponentFit& fit, double bound, double slack);

}  // namespace roughstart
