#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughstart/common.hpp"
#include "roughstart/spectral_field.hpp"

namespace roughstart {

enum class EquationKind { surface_growth, kpz, ks, reaction_diffusion, burgers, convolution_example, generic };

std::string to_string(EquationKind kind);
EquationKind equation_kind_from_string(const std::string& name);

/// Linear terms below the leading order: lambda_k gains
/// + anti_diffusion |k|^2 - damping for k != 0.
struct LowerOrder {
  double anti_diffusion = 0.0;
  double damping = 0.0;
};

/// Semilinear equation du/dt = A u + B(u, u) with lambda_k ~ -|k|^tau and
/// |B_kmn| <= c |k|^a |m|^b |n|^b.
struct EquationSpec {
  EquationKind kind = EquationKind::generic;
  Rational tau{2};
  Rational sigma{0};
  Rational a{0};
  Rational b{0};
  int d = 1;
  int degree_m = 2;
  bool mass_conserving = true;
  LowerOrder lower_order{};
  /// Whether the wavewise bound on B is attained (scaling identity holds).
  bool sharp = true;
  /// Minimal spatial regularity giving sense to B.
  Rational alpha_min{0};
  /// Theta for which u0 sits exactly at the fix1 threshold regularity.
  Rational theta_default{0};
  /// Set when an exponent was approximated from a decimal input.
  bool inexact_input = false;

  /// Fixed catalogue entry (exponents are not overridable).
  static EquationSpec catalogue(EquationKind kind, int d = 1);
  /// sigma = (tau - a - m b)/(m - 1), alpha_min = b.
  static EquationSpec generic(Rational tau, Rational a, Rational b, int d = 1, int degree_m = 2,
                              bool mass_conserving = true);

  /// Throws ValidationError on inconsistent fields.
  void validate() const;
};

/// All catalogue kinds with their fixed parameters, d = 1.
std::vector<EquationSpec> catalogue();

/// Diagonal generator A e_k = lambda_k e_k on a lattice.
class LinearOperator {
 public:
  LinearOperator(const EquationSpec& spec, const TorusLattice& lattice);

  const EquationSpec& spec() const { return spec_; }
  const TorusLattice& lattice() const { return lattice_; }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  double eigenvalue(std::size_t idx) const { return lambda_[idx]; }
  /// max_k |lambda_k|
  double spectral_radius() const;

 private:
  EquationSpec spec_;
  TorusLattice lattice_;
  std::vector<double> lambda_;
};

/// lambda_k for a wave vector of Euclidean length r (lambda_0 = 0).
double eigenvalue(const EquationSpec& spec, double r);

/// e^{tA} f.
SpectralField semigroup_apply(const LinearOperator& op, const SpectralField& f, double t);

/// B(u, v) for the equation's kind.
SpectralField nonlinearity(const EquationSpec& spec, const SpectralField& u, const SpectralField& v);

/// Analytic B_{k m n} with k = m + n (not defined for convolution_example,
/// whose coefficients are diagonal in m = n).
Complex bilinear_coefficient(const EquationSpec& spec, const WaveVector& m, const WaveVector& n);

struct CoefficientReport {
  double max_ratio = 0.0;
  /// max ratio is 1 up to rounding
  bool sharp = false;
  std::size_t pairs = 0;
  WaveVector argmax_m{0, 0};
  WaveVector argmax_n{0, 0};
  /// max |B_{0mn}| (mass conservation defect)
  double zero_mode_max = 0.0;
};

/// Extracts B_{kmn} = <B(e_m, e_n), e_{m+n}> for |m|_inf, |n|_inf <= radius
/// and compares against |k|^a |m|^b |n|^b.
CoefficientReport coefficient_bound_check(const EquationSpec& spec, int radius = 16);

}  // namespace roughstart
