#include <doctest.h>

#include <cmath>
#include <vector>

#include "roughstart/quadrature.hpp"
#include "roughstart/stochastic_objects.hpp"

using namespace roughstart;

TEST_CASE("objects for a single Burgers mode") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const TorusLattice lat(1, 8);
  const auto u0 = SpectralField::sine(lat, {1, 0});
  const auto grid = TimeGrid::graded(0.5, 1e-6, 200);
  const auto obj = build_objects(u0, spec, grid);
  const auto s2 = SpectralField::sine(lat, {2, 0});
  double e0 = 0, e1 = 0, e2 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    e0 = std::max(e0, (obj.eta0.at(i) - std::exp(-t) * u0).max_abs());
    e1 = std::max(e1, (obj.eta1.at(i) - std::exp(-2 * t) * s2).max_abs());
    // int_0^t e^{-4(t-s)} e^{-2s} ds = (e^{-2t} - e^{-4t}) / 2
    e2 = std::max(e2, (obj.eta2.at(i) - 0.5 * (std::exp(-2 * t) - std::exp(-4 * t)) * s2).max_abs());
  }
  CHECK(e0 < 1e-15);
  CHECK(e1 < 1e-14);
  CHECK(e2 < 1e-6);
  CHECK(obj.eta2.at(0).max_abs() == 0.0);
}

TEST_CASE("duhamel of a constant forcing is exact") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const TorusLattice lat(1, 8);
  const LinearOperator op(spec, lat);
  const auto f = SpectralField::sine(lat, {3, 0}) + SpectralField::constant(lat, 1.0);
  const auto grid = TimeGrid::graded(0.2, 1e-4, 10);
  const auto I = duhamel(op, Trajectory::constant(grid, f));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    auto expected = SpectralField::constant(lat, t);
    expected += (-std::expm1(-9 * t) / 9) * SpectralField::sine(lat, {3, 0});
    CHECK((I.at(i) - expected).max_abs() < 1e-14);
  }
}

TEST_CASE("duhamel serial and parallel agree bitwise") {
  const auto spec = EquationSpec::catalogue(EquationKind::ks);
  GaussianICSpec ic;
  ic.N = 32;
  const auto obj = build_objects(ic, 0, spec, TimeGrid::graded(0.01, 1e-7, 30));
  const LinearOperator op(spec, ic.lattice());
  const auto a = duhamel(op, obj.eta1, Exec::serial), b = duhamel(op, obj.eta1, Exec::parallel);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a.at(i) - b.at(i)).max_abs() == 0.0);
}

TEST_CASE("Wick moment agrees with a small Monte Carlo") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  GaussianICSpec ic;
  ic.N = 32;
  ic.theta = 0.5;
  ic.seed = 21;
  const DyadicPartition P(ic.lattice());
  for (int j : {2, 3}) {
    const double ex = exact_second_moment(ic, spec, j, 1e-2, P);
    const auto mc = mc_second_moment(ic, spec, j, 1e-2, P, 1500);
    CHECK(ex > 0.0);
    CHECK(std::abs(mc.mean - ex) <= 4.0 * mc.se);
  }
}

TEST_CASE("block value at origin equals the block evaluated at x = 0") {
  const auto spec = EquationSpec::catalogue(EquationKind::kpz);
  GaussianICSpec ic;
  ic.N = 16;
  const auto u0 = sample_ic(ic, 2).field;
  const DyadicPartition P(ic.lattice());
  const LinearOperator op(spec, ic.lattice());
  const double x0[1] = {0.0};
  const double v = block_value_at_origin(op, u0, 2, 1e-3, P);
  CHECK(v == doctest::Approx(evaluate(block(eta1_at(op, u0, 1e-3), 2, P), x0).real()).epsilon(1e-12));
}

TEST_CASE("power-law fit on synthetic data") {
  std::vector<double> t, v;
  for (int i = 0; i < 20; ++i) {
    t.push_back(std::pow(10.0, -5 + 0.2 * i));
    v.push_back(3.0 * std::pow(t.back(), -0.7));
  }
  const auto f = fit_power_law(t, v, 0.0);
  CHECK(f.beta_hat == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(f.se < 1e-10);
  const auto verdict = singularity_verdict(f, 0.65, 0.1);
  CHECK(verdict.pass);
  CHECK_FALSE(singularity_verdict(f, 0.5, 0.1).pass);
}

TEST_CASE("fit times respect the resolution floor") {
  const auto ts = fit_times(256, 2.0, {});
  CHECK(ts.front() == doctest::Approx(4.0 / (256.0 * 256.0)));
  CHECK(ts.back() == doctest::Approx(0.1));
  CHECK_THROWS(fit_times(256, 2.0, {1e-7, 0.1, 12}));
}

TEST_CASE("eta1 singularity is worse for random data than its block count suggests") {
  // Exact proxy exponent for Burgers at theta = 1/2, alpha = 0 is 3/2.
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  GaussianICSpec ic;
  ic.N = 512;
  ic.theta = 0.5;
  const DyadicPartition P(ic.lattice());
  std::vector<double> ts, vs;
  for (double lt = -4.0; lt <= -2.0; lt += 0.25) {
    ts.push_back(std::pow(10.0, lt));
    vs.push_back(exact_norm_proxy(ic, spec, 0.0, ts.back(), P));
  }
  const auto f = fit_power_law(ts, vs, 0.0);
  CHECK(f.beta_hat == doctest::Approx(1.5).epsilon(0.05));
}
