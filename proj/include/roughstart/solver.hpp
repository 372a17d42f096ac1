#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughstart/equations.hpp"
#include "roughstart/littlewood_paley.hpp"
#include "roughstart/random_ic.hpp"
#include "roughstart/stochastic_objects.hpp"
#include "roughstart/trajectory.hpp"

namespace roughstart {

enum class Formulation { fix1, fix2, second_order, classical };

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& name);

/// Graded time grid recipe; regenerated whenever T changes.
struct GridSpec {
  /// First positive node; 0 selects min(0.01 N^{-tau}, T / 512).
  double t_min = 0.0;
  int per_decade = 60;

  TimeGrid make(double T, int N, double tau) const;
};

struct PicardConfig {
  Formulation formulation = Formulation::fix1;
  double alpha = 0.0;
  double beta = 0.25;
  double gamma = 0.0;
  double kappa = 0.0;
  double nu = 0.0;
  double T = 0.05;
  int max_iter = 200;
  /// Stop when ||v_{n+1} - v_n|| <= tol * max(1, ||v_{n+1}||).
  double contraction_tol = 1e-10;
  GridSpec grid{};
  int max_halvings = 20;
  /// Check the vanishing-norm hypotheses on the data (fix1, fix2).
  bool data_gate = true;
  /// Gate windows stay above gate_resolution * N^{-tau}.
  double gate_resolution = 4.0;
};

/// Throws ValidationError when the exponents violate the formulation's
/// hypotheses.
void validate_config(const EquationSpec& spec, const PicardConfig& config);

/// Norms of the three pieces of the second-order map at the fixed point.
struct SecondOrderTerms {
  double double_paraproduct = 0.0;  ///< ||4 V(V(v < eta0) < eta0)||
  double r_paraproduct = 0.0;       ///< ||2 V(R(v) < eta0)||
  double r_term = 0.0;              ///< ||R(v)||
};

struct GateReport {
  std::string name;
  VanishingReport report;
  bool ok = false;
};

struct PicardResult {
  Formulation formulation = Formulation::fix1;
  /// The fixed point (u for fix1, v otherwise).
  std::optional<Trajectory> v;
  /// u = v (fix1) or v + eta0.
  std::optional<Trajectory> u;
  std::vector<double> iterate_norms;
  std::vector<double> increments;
  std::vector<double> contraction_ratios;
  bool iteration_converged = false;
  bool data_gates_ok = true;
  bool converged = false;
  double T_requested = 0.0;
  double T_effective = 0.0;
  int halvings = 0;
  std::vector<GateReport> gates;
  std::optional<SecondOrderTerms> terms;
  /// Residual of v = V(v,v) + 2 V(v eta0) + eta2 in X^{0,beta} (second_order, classical).
  std::optional<double> fix2_residual;
  std::string message;
};

/// V(u1, u2)(t) = int_0^t e^{(t-s)A} B(u1(s), u2(s)) ds.
Trajectory apply_V(const EquationSpec& spec, const Trajectory& u1, const Trajectory& u2, Exec exec = Exec::parallel);

/// int_0^t e^{(t-s)A} d_x f(s) ds for the Burgers operator (d = 1).
Trajectory apply_V_derivative(const EquationSpec& spec, const Trajectory& f, Exec exec = Exec::parallel);

/// u = eta1 + V(u, u) with eta1 = e^{tA} u0.
PicardResult solve_fix1(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                        Exec exec = Exec::parallel);

/// v = V(v, v) + 2 V(v, eta0) + eta2.
PicardResult solve_fix2(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                        Exec exec = Exec::parallel);
PicardResult solve_fix2(const EquationSpec& spec, const GaussianSample& ic, const PicardConfig& config,
                        Exec exec = Exec::parallel);

/// R(v) = V(v, v) + eta2 + 2 V(v >= eta0) (Burgers).
Trajectory remainder_R(const EquationSpec& spec, const Trajectory& v, const StochasticTrajectory& objects,
                       const DyadicPartition& partition, Exec exec = Exec::parallel);

/// v = 4 V(V(v < eta0) < eta0) + 2 V(R(v) < eta0) + R(v) in Y^{kappa,beta}.
PicardResult solve_second_order(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                                Exec exec = Exec::parallel);

/// v = R(v) + 2 V(v < eta0) in Y^{kappa,beta} (nu > 1).
PicardResult solve_classical(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                             Exec exec = Exec::parallel);

/// Dispatch on config.formulation.
PicardResult solve(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                   Exec exec = Exec::parallel);

/// ||v - V(v,v) - 2 V(v eta0) - eta2|| in X^{0,beta}.
double fix2_residual(const EquationSpec& spec, const Trajectory& v, const StochasticTrajectory& objects,
                     double beta, const DyadicPartition& partition);

/// Second-order exponential time differencing (Cox-Matthews ETDRK2) on a
/// uniform grid with step close to dt. `nonlinear = false` drops B.
Trajectory etd_reference(const EquationSpec& spec, const SpectralField& u0, double T, double dt,
                         bool nonlinear = true);

struct BoundConstant {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lhs / rhs
  double constant = 0.0;
};

/// ||V(u,u)||_{alpha,beta,T} against T^{1-beta-delta} ||u||^2_{alpha,beta,T}.
BoundConstant nonlinear_bound(const EquationSpec& spec, const Trajectory& u, double alpha, double beta, double delta,
                              const DyadicPartition& partition);

/// ||V(u1,u2)||_{alpha,beta,T} against T^{1-delta-gamma} ||u1||_{alpha,beta,T} ||u2||_{alpha,gamma,T}.
BoundConstant mixed_bound(const EquationSpec& spec, const Trajectory& u1, const Trajectory& u2, double alpha,
                          double beta, double gamma, double delta, const DyadicPartition& partition);

/// Operator-norm estimate of v -> 4 V(V(v < eta0) < eta0) in Y^{kappa,beta}
/// (power iteration from eta2).
double double_paraproduct_prefactor(const EquationSpec& spec, const StochasticTrajectory& objects, double kappa,
                                    double beta, const DyadicPartition& partition, int iterations = 6);

struct PrefactorTrend {
  std::vector<double> T;
  std::vector<double> prefactor;
  /// log prefactor ~ c + exponent log l(T)
  double exponent = 0.0;
  double exponent_se = 0.0;
};

/// Prefactor at T, T/2, ... (count values) for one initial condition.
PrefactorTrend prefactor_trend(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                               int count);

}  // namespace roughstart
