#include "roughstart/equations.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace roughstart {

std::string to_string(EquationKind kind) {
  switch (kind) {
    case EquationKind::surface_growth: return "surface_growth";
    case EquationKind::kpz: return "kpz";
    case EquationKind::ks: return "ks";
    case EquationKind::reaction_diffusion: return "reaction_diffusion";
    case EquationKind::burgers: return "burgers";
    case EquationKind::convolution_example: return "convolution_example";
    case EquationKind::generic: return "generic";
  }
  return "generic";
}

EquationKind equation_kind_from_string(const std::string& name) {
  for (auto k : {EquationKind::surface_growth, EquationKind::kpz, EquationKind::ks, EquationKind::reaction_diffusion,
                 EquationKind::burgers, EquationKind::convolution_example, EquationKind::generic})
    if (to_string(k) == name) return k;
  throw ValidationError("unknown equation kind '" + name + "'");
}

namespace {

EquationSpec make(EquationKind kind, int tau, int sigma, int a, int b, Rational alpha_min, Rational theta,
                  LowerOrder lo, bool sharp = true) {
  EquationSpec s;
  s.kind = kind;
  s.tau = tau;
  s.sigma = sigma;
  s.a = a;
  s.b = b;
  s.alpha_min = alpha_min;
  s.theta_default = theta;
  s.lower_order = lo;
  s.sharp = sharp;
  s.mass_conserving = true;
  return s;
}

}  // namespace

EquationSpec EquationSpec::catalogue(EquationKind kind, int d) {
  EquationSpec s;
  switch (kind) {
    case EquationKind::surface_growth:
      s = make(kind, 4, 0, 2, 1, Rational(1), Rational(-1, 2), {1.0, 0.0});
      break;
    case EquationKind::kpz:
      s = make(kind, 2, 0, 0, 1, Rational(1), Rational(-1, 2), {});
      break;
    case EquationKind::ks:
      s = make(kind, 4, 2, 0, 1, Rational(1), Rational(1, 2), {1.0, 0.0});
      break;
    case EquationKind::reaction_diffusion:
      s = make(kind, 2, 2, 0, 0, Rational(0), Rational(1, 2), {0.0, 1.0});
      break;
    case EquationKind::burgers:
      s = make(kind, 2, 1, 1, 0, Rational(0), Rational(1, 2), {});
      break;
    case EquationKind::convolution_example:
      s = make(kind, 2, 2, 1, 0, Rational(0), Rational(1, 2), {}, false);
      break;
    case EquationKind::generic:
      throw ValidationError("EquationSpec::catalogue: generic has no fixed parameters");
  }
  s.d = d;
  // theta_default puts u0 at the fix1 threshold: -theta - d/2 = r
  s.theta_default -= Rational(d - 1, 2);
  s.validate();
  return s;
}

EquationSpec EquationSpec::generic(Rational tau, Rational a, Rational b, int d, int degree_m, bool mass_conserving) {
  EquationSpec s;
  s.kind = EquationKind::generic;
  s.tau = tau;
  s.a = a;
  s.b = b;
  s.d = d;
  s.degree_m = degree_m;
  s.mass_conserving = mass_conserving;
  if (degree_m < 2) throw ValidationError("EquationSpec: degree_m must be >= 2");
  s.sigma = (tau - a - Rational(degree_m) * b) / Rational(degree_m - 1);
  s.alpha_min = b;
  const Rational delta = Rational(1) - (s.alpha_min + s.sigma) / tau;
  const Rational r = delta > Rational(1, 2) ? -s.sigma : s.alpha_min - tau / 2;
  s.theta_default = -r - Rational(d, 2);
  s.validate();
  return s;
}

void EquationSpec::validate() const {
  if (tau <= 0) throw ValidationError("EquationSpec: tau must be > 0");
  if (a < 0 || b < 0) throw ValidationError("EquationSpec: a and b must be >= 0");
  if (d != 1 && d != 2) throw ValidationError("EquationSpec: d must be 1 or 2");
  if (degree_m < 2) throw ValidationError("EquationSpec: degree_m must be >= 2");
  if ((kind == EquationKind::burgers || kind == EquationKind::convolution_example) && d != 1)
    throw ValidationError("EquationSpec: " + to_string(kind) + " requires d = 1");
  if (sharp && sigma * Rational(degree_m - 1) + a + Rational(degree_m) * b != tau)
    throw ValidationError("EquationSpec: sharp bound requires sigma + a + 2b = tau");
}

std::vector<EquationSpec> catalogue() {
  return {EquationSpec::catalogue(EquationKind::surface_growth), EquationSpec::catalogue(EquationKind::kpz),
          EquationSpec::catalogue(EquationKind::ks), EquationSpec::catalogue(EquationKind::reaction_diffusion),
          EquationSpec::catalogue(EquationKind::burgers)};
}

double eigenvalue(const EquationSpec& spec, double r) {
  if (r == 0.0) return 0.0;
  return -std::pow(r, to_double(spec.tau)) + spec.lower_order.anti_diffusion * r * r - spec.lower_order.damping;
}

LinearOperator::LinearOperator(const EquationSpec& spec, const TorusLattice& lattice)
    : spec_(spec), lattice_(lattice), lambda_(lattice.size()) {
  if (spec.d != lattice.dim()) throw ValidationError("LinearOperator: dimension mismatch");
  for (std::size_t i = 0; i < lambda_.size(); ++i) lambda_[i] = roughstart::eigenvalue(spec, lattice.norm(i));
}

double LinearOperator::spectral_radius() const {
  double m = 0.0;
  for (double l : lambda_) m = std::max(m, std::abs(l));
  return m;
}

SpectralField semigroup_apply(const LinearOperator& op, const SpectralField& f, double t) {
  if (t < 0) throw ValidationError("semigroup_apply: t must be >= 0");
  if (!(f.lattice() == op.lattice())) throw ValidationError("semigroup_apply: lattice mismatch");
  if (t == 0.0) return f;
  const auto& lam = op.eigenvalues();
  std::vector<double> m(lam.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::exp(t * lam[i]);
  SpectralField out = apply_multiplier(f, m);
  return out;
}

namespace {

SpectralField gradient_dot(const SpectralField& u, const SpectralField& v) {
  const int d = u.lattice().dim();
  std::vector<SpectralField> gu, gv;
  for (int a = 0; a < d; ++a) {
    gu.push_back(partial(u, a));
    gv.push_back(partial(v, a));
  }
  return product_sum(gu, gv);
}

}  // namespace

SpectralField nonlinearity(const EquationSpec& spec, const SpectralField& u, const SpectralField& v) {
  if (!(u.lattice() == v.lattice())) throw ValidationError("nonlinearity: lattice mismatch");
  if (u.lattice().dim() != spec.d) throw ValidationError("nonlinearity: field dimension does not match equation");
  if (spec.degree_m != 2) throw ValidationError("nonlinearity: only quadratic B is evaluated");
  switch (spec.kind) {
    case EquationKind::surface_growth: {
      SpectralField p = gradient_dot(u, v);
      return derivative_multiplier(p, 2.0);
    }
    case EquationKind::kpz:
    case EquationKind::ks: {
      SpectralField p = gradient_dot(u, v);
      p *= -1.0;
      return project_mean_zero(p);
    }
    case EquationKind::reaction_diffusion:
      return project_mean_zero(convolve(u, v));
    case EquationKind::burgers:
      return partial(convolve(u, v), 0);
    case EquationKind::convolution_example: {
      SpectralField out(u.lattice(), u.hermitian() && v.hermitian());
      auto o = out.coeffs();
      const auto uc = u.coeffs();
      const auto vc = v.coeffs();
      for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = Complex(0.0, u.lattice().wave(i)[0]) * uc[i] * vc[i];
      out.set_mean_zero(true);
      return out;
    }
    case EquationKind::generic: {
      const double b = to_double(spec.b);
      const double a = to_double(spec.a);
      SpectralField p = convolve(derivative_multiplier(u, b), derivative_multiplier(v, b));
      SpectralField out = derivative_multiplier(p, a);
      return spec.mass_conserving ? project_mean_zero(out) : out;
    }
  }
  throw ValidationError("nonlinearity: unknown kind");
}

namespace {

double pow0(double r, double e) { return e == 0.0 ? 1.0 : (r == 0.0 ? 0.0 : std::pow(r, e)); }

}  // namespace

Complex bilinear_coefficient(const EquationSpec& spec, const WaveVector& m, const WaveVector& n) {
  const WaveVector k{m[0] + n[0], m[1] + n[1]};
  const double mn = static_cast<double>(m[0]) * n[0] + static_cast<double>(m[1]) * n[1];
  const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
  const bool k0 = k[0] == 0 && k[1] == 0;
  switch (spec.kind) {
    case EquationKind::surface_growth: return -k2 * mn;
    case EquationKind::kpz:
    case EquationKind::ks: return k0 ? 0.0 : mn;
    case EquationKind::reaction_diffusion: return k0 ? 0.0 : 1.0;
    case EquationKind::burgers: return Complex(0.0, k[0]);
    case EquationKind::convolution_example:
      throw ValidationError("bilinear_coefficient: convolution_example is not of convolution type");
    case EquationKind::generic: {
      if (k0 && spec.mass_conserving) return 0.0;
      const double b = to_double(spec.b);
      return pow0(std::sqrt(k2), to_double(spec.a)) * pow0(std::hypot(m[0], m[1]), b) *
             pow0(std::hypot(n[0], n[1]), b);
    }
  }
  return 0.0;
}

CoefficientReport coefficient_bound_check(const EquationSpec& spec, int radius) {
  if (radius < 1) throw ValidationError("coefficient_bound_check: radius must be >= 1");
  const TorusLattice lat(spec.d, 2 * radius);
  const TorusLattice small(spec.d, std::max(2, radius));
  CoefficientReport rep;
  const double a = to_double(spec.a), b = to_double(spec.b);
  for (std::size_t im = 0; im < small.size(); ++im) {
    const WaveVector m = small.wave(im);
    if (std::abs(m[0]) > radius || std::abs(m[1]) > radius) continue;
    const SpectralField em = SpectralField::exponential(lat, m);
    for (std::size_t in = 0; in < small.size(); ++in) {
      const WaveVector n = small.wave(in);
      if (std::abs(n[0]) > radius || std::abs(n[1]) > radius) continue;
      const WaveVector k{m[0] + n[0], m[1] + n[1]};
      const Complex bk = nonlinearity(spec, em, SpectralField::exponential(lat, n))[k];
      ++rep.pairs;
      if (k[0] == 0 && k[1] == 0) {
        rep.zero_mode_max = std::max(rep.zero_mode_max, std::abs(bk));
        continue;
      }
      const double bound = pow0(lat.norm(k), a) * pow0(lat.norm(m), b) * pow0(lat.norm(n), b);
      double ratio;
      if (bound == 0.0)
        ratio = std::abs(bk) < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
      else
        ratio = std::abs(bk) / bound;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.argmax_m = m;
        rep.argmax_n = n;
      }
    }
  }
  rep.sharp = std::abs(rep.max_ratio - 1.0) < 1e-9;
  return rep;
}

}  // namespace roughstart
