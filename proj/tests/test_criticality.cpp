#include <doctest.h>

#include <cmath>

#include "roughstart/criticality.hpp"

using namespace roughstart;

TEST_CASE("golden catalogue classification") {
  const auto sg = classify(EquationSpec::catalogue(EquationKind::surface_growth));
  CHECK(sg.sigma == Rational(0));
  CHECK(sg.delta == Rational(3, 4));
  CHECK(sg.critical_exponent == Rational(0));
  const auto kpz = classify(EquationSpec::catalogue(EquationKind::kpz));
  CHECK(kpz.delta == Rational(1, 2));
  CHECK(kpz.alpha_min == Rational(1));
  const auto ks = classify(EquationSpec::catalogue(EquationKind::ks));
  CHECK(ks.sigma == Rational(2));
  CHECK(ks.delta == Rational(1, 4));
  CHECK(ks.critical_exponent == Rational(-2));
  CHECK(ks.r_threshold_fix1 == Rational(-1));
  const auto rd = classify(EquationSpec::catalogue(EquationKind::reaction_diffusion));
  CHECK(rd.delta == Rational(0));
  CHECK(rd.alpha_min == Rational(0));
  CHECK(rd.r_threshold_fix1 == Rational(-1));
}

TEST_CASE("delta formula on generic specs") {
  for (int tau = 2; tau <= 6; tau += 2)
    for (int a = 0; a <= 2; ++a) {
      const auto s = EquationSpec::generic(Rational(tau), Rational(a), Rational(0));
      const auto c = classify(s, Rational(0));
      CHECK(c.delta == Rational(1) - (c.alpha_min + c.sigma) / c.tau);
      CHECK(c.sigma == Rational(tau - a));
    }
}

TEST_CASE("chi exponents for Burgers") {
  const auto chi = chi_exponents(EquationSpec::catalogue(EquationKind::burgers), Rational(1, 2));
  // chi0 = 2b + 2 theta + d/2 = 3/2, chi1 = a + b + theta + (b + theta + d/2)_+ = 5/2
  CHECK(chi.chi0 == Rational(3, 2));
  CHECK(chi.chi1 == Rational(5, 2));
  CHECK(chi.beta0(Rational(0)) == Rational(5, 4));
  CHECK(chi.beta0(Rational(0)) - 1 == Rational(1, 4));
  CHECK(chi.beta0(0.0) == doctest::Approx(1.25));
  // beta0 is the max of two affine pieces, with the kink where they meet.
  const Rational k = chi.kink();
  CHECK((k + chi.chi1) / chi.tau == positive_part(chi.chi0 / chi.tau));
  CHECK(chi.beta0(k - 1) == positive_part(chi.chi0 / chi.tau));
  CHECK(chi.beta0(k + 1) == (k + 1 + chi.chi1) / chi.tau);
}

TEST_CASE("feasibility predicates") {
  CHECK(fix1_feasible(Rational(1, 4), Rational(3, 4)));
  CHECK_FALSE(fix1_feasible(Rational(1, 2), Rational(1, 4)));
  CHECK_FALSE(fix1_feasible(Rational(2, 5), Rational(4, 5)));
  CHECK(fix2_feasible(0.35, 0.62, 0.25));
  CHECK_FALSE(fix2_feasible(0.35, 0.7, 0.25));
}

TEST_CASE("eta2 feasibility region") {
  const auto pt = eta2_region_point(0.3, 1.25, 0.75, 1);
  REQUIRE(pt.has_value());
  CHECK(eta2_feasibility(FeasibilityQuery{0.0, 0.3, pt->first, pt->second}, 1.25, 0.75, 1));
  // beta outside (beta0 - 1, 1) is rejected.
  CHECK_THROWS_AS(eta2_region_point(0.1, 1.25, 0.75, 1), ValidationError);
}

TEST_CASE("asymptotic sums") {
  // H <= G, and G is decreasing in t.
  for (double t : {1e-5, 1e-3, 1e-1}) {
    CHECK(asymptotic_H(0.5, 1.0, 2.0, t) <= asymptotic_G(0.5, 1.0, 2.0, t));
    CHECK(asymptotic_G(0.0, 1.0, 2.0, t) > asymptotic_G(0.0, 1.0, 2.0, 2 * t));
  }
  for (auto [nu, p, tau] : {std::tuple{0.0, 1.0, 2.0}, std::tuple{0.5, 1.0, 2.0}, std::tuple{-0.5, 2.0, 4.0}}) {
    const auto r = asymptotic_check(nu, p, tau);
    CHECK(std::isfinite(r.compensated_sup));
    CHECK(r.compensated_inf > 0.0);
    CHECK(r.slope == doctest::Approx(-p / tau).epsilon(0.05));
  }
}

TEST_CASE("regime names round trip") {
  for (auto r : {Regime::deterministic_sufficient, Regime::random_ic_helps, Regime::random_ic_insufficient,
                 Regime::critical_open})
    CHECK(regime_from_string(to_string(r)) == r);
}
