#include <doctest.h>

#include <cmath>

#include "roughstart/equations.hpp"
#include "roughstart/random_ic.hpp"

using namespace roughstart;

TEST_CASE("catalogue exponents and scaling identity") {
  for (const auto& s : catalogue()) {
    CAPTURE(to_string(s.kind));
    CHECK_NOTHROW(s.validate());
    if (s.sharp) CHECK(s.sigma + s.a + Rational(2) * s.b == s.tau);
  }
  const auto b = EquationSpec::catalogue(EquationKind::burgers);
  CHECK(b.tau == Rational(2));
  CHECK(b.a == Rational(1));
  CHECK(b.b == Rational(0));
  CHECK(b.sigma == Rational(1));
  CHECK(equation_kind_from_string("ks") == EquationKind::ks);
  CHECK_THROWS_AS(equation_kind_from_string("navier_stokes"), ValidationError);
}

TEST_CASE("generic spec") {
  const auto g = EquationSpec::generic(Rational(4), Rational(1), Rational(1, 2));
  CHECK(g.sigma == Rational(2));
  CHECK(g.alpha_min == Rational(1, 2));
  CHECK_THROWS_AS(EquationSpec::generic(Rational(-1), Rational(0), Rational(0)), ValidationError);
}

TEST_CASE("linear operator eigenvalues") {
  for (const auto& s : catalogue()) {
    CAPTURE(to_string(s.kind));
    const TorusLattice lat(1, 64);
    const LinearOperator op(s, lat);
    CHECK(op.eigenvalue(lat.origin()) == 0.0);
    const double edge = op.eigenvalue(lat.index({64, 0}));
    CHECK(edge / -std::pow(64.0, to_double(s.tau)) == doctest::Approx(1.0).epsilon(0.1));
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const auto k = lat.wave(i);
      CHECK(op.eigenvalue(i) == op.eigenvalue(lat.negate(i)));
      // Negative on nonzero modes, except marginal k = 1 for the anti-diffused kinds.
      if (std::abs(k[0]) > 1) CHECK(op.eigenvalue(i) < 0.0);
    }
  }
  CHECK(eigenvalue(EquationSpec::catalogue(EquationKind::ks), 1.0) == doctest::Approx(0.0));
  CHECK(eigenvalue(EquationSpec::catalogue(EquationKind::ks), 2.0) == doctest::Approx(-12.0));
}

TEST_CASE("semigroup: exact mode decay and group property") {
  const auto s = EquationSpec::catalogue(EquationKind::burgers);
  const TorusLattice lat(1, 16);
  const LinearOperator op(s, lat);
  const auto f = SpectralField::sine(lat, {3, 0});
  const auto g = semigroup_apply(op, f, 0.1);
  CHECK((g - std::exp(-0.9) * f).max_abs() < 1e-15);
  GaussianICSpec ic;
  ic.N = 16;
  const auto u = sample_ic(ic, 0).field;
  const auto a = semigroup_apply(op, semigroup_apply(op, u, 0.02), 0.03);
  CHECK((a - semigroup_apply(op, u, 0.05)).max_abs() < 1e-14);
  CHECK((semigroup_apply(op, u, 0.0) - u).max_abs() == 0.0);
}

TEST_CASE("Burgers nonlinearity is d_x(uv)") {
  const auto s = EquationSpec::catalogue(EquationKind::burgers);
  const TorusLattice lat(1, 8);
  const auto u = SpectralField::sine(lat, {1, 0});
  // d_x(sin^2 x) = sin 2x
  CHECK((nonlinearity(s, u, u) - SpectralField::sine(lat, {2, 0})).max_abs() < 1e-14);
}

TEST_CASE("KPZ and RD nonlinearities on single modes") {
  const TorusLattice lat(1, 8);
  const auto c = SpectralField::cosine(lat, {1, 0}, 0.5);  // cos x
  // KPZ: -(d_x cos x)^2 = -(1 - cos 2x)/2, mean removed: cos(2x)/2
  const auto kpz = nonlinearity(EquationSpec::catalogue(EquationKind::kpz), c, c);
  CHECK((kpz - SpectralField::cosine(lat, {2, 0}, 0.25)).max_abs() < 1e-14);
  CHECK(kpz.mean_zero());
  // RD: cos^2 x with mean removed
  const auto rd = nonlinearity(EquationSpec::catalogue(EquationKind::reaction_diffusion), c, c);
  CHECK((rd - SpectralField::cosine(lat, {2, 0}, 0.25)).max_abs() < 1e-14);
}

TEST_CASE("coefficient bounds") {
  for (const auto kind : {EquationKind::surface_growth, EquationKind::kpz, EquationKind::ks,
                          EquationKind::reaction_diffusion, EquationKind::burgers}) {
    CAPTURE(to_string(kind));
    const auto r = coefficient_bound_check(EquationSpec::catalogue(kind), 8);
    CHECK(r.max_ratio <= 1.0 + 1e-12);
    CHECK(r.pairs > 0);
  }
  const auto sg = coefficient_bound_check(EquationSpec::catalogue(EquationKind::surface_growth), 8);
  CHECK(sg.zero_mode_max < 1e-14);
  CHECK(sg.sharp);
}

TEST_CASE("mass conservation: zero mode of B vanishes") {
  GaussianICSpec ic;
  ic.N = 16;
  const auto u = sample_ic(ic, 1).field;
  for (const auto& s : catalogue()) {
    if (!s.mass_conserving) continue;
    CAPTURE(to_string(s.kind));
    CHECK(std::abs(nonlinearity(s, u, u)[{0, 0}]) < 1e-12);
  }
}

TEST_CASE("bilinear coefficient of Burgers") {
  const auto s = EquationSpec::catalogue(EquationKind::burgers);
  CHECK(std::abs(bilinear_coefficient(s, {2, 0}, {3, 0}) - Complex(0, 5)) < 1e-15);
}
