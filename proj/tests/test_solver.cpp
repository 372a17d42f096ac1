#include <doctest.h>

#include <cmath>

#include "roughstart/solver.hpp"

using namespace roughstart;

namespace {

PicardConfig burgers_fix1(double T) {
  PicardConfig c;
  c.formulation = Formulation::fix1;
  c.alpha = 0.0;
  c.beta = 0.25;
  c.T = T;
  return c;
}

}  // namespace

TEST_CASE("formulation names") {
  for (auto f : {Formulation::fix1, Formulation::fix2, Formulation::second_order, Formulation::classical})
    CHECK(formulation_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(formulation_from_string("fix3"), ValidationError);
}

TEST_CASE("config validation") {
  const auto burgers = EquationSpec::catalogue(EquationKind::burgers);
  const auto ks = EquationSpec::catalogue(EquationKind::ks);
  CHECK_NOTHROW(validate_config(burgers, burgers_fix1(0.05)));
  auto c = burgers_fix1(0.05);
  c.beta = 0.5;
  CHECK_THROWS_AS(validate_config(burgers, c), ValidationError);
  c = burgers_fix1(-1.0);
  CHECK_THROWS_AS(validate_config(burgers, c), ValidationError);
  // KS: delta = 1/4, alpha_min = 1.
  c = burgers_fix1(0.01);
  CHECK_THROWS_AS(validate_config(ks, c), ValidationError);
  c.alpha = 1.0;
  c.beta = 0.35;
  CHECK_NOTHROW(validate_config(ks, c));
  c.formulation = Formulation::fix2;
  c.gamma = 0.62;
  CHECK_NOTHROW(validate_config(ks, c));
  c.gamma = 0.8;
  CHECK_THROWS_AS(validate_config(ks, c), ValidationError);
  PicardConfig s;
  s.formulation = Formulation::second_order;
  s.nu = 0.8;
  s.kappa = 1.3;
  s.beta = 0.35;
  CHECK_NOTHROW(validate_config(burgers, s));
  s.kappa = 1.7;
  CHECK_THROWS_AS(validate_config(burgers, s), ValidationError);
  s.kappa = 1.3;
  CHECK_THROWS_AS(validate_config(ks, s), ValidationError);
  s.formulation = Formulation::classical;
  CHECK_THROWS_AS(validate_config(burgers, s), ValidationError);
}

TEST_CASE("graded grid recipe") {
  const GridSpec g;
  const auto grid = g.make(0.05, 32, 2.0);
  CHECK(grid.T() == 0.05);
  CHECK(grid.t_first() == doctest::Approx(0.01 / 1024.0));
  CHECK(grid.graded_toward_zero());
  CHECK(g.make(1e-6, 4, 2.0).t_first() <= 1e-6 / 512 * (1 + 1e-12));
}

TEST_CASE("apply_V on a single mode") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const TorusLattice lat(1, 8);
  const auto grid = TimeGrid::graded(0.5, 1e-6, 200);
  const auto u = Trajectory::constant(grid, SpectralField::sine(lat, {1, 0}));
  const auto V = apply_V(spec, u, u);
  // int_0^t e^{-4(t-s)} ds sin 2x
  const double t = grid.T();
  CHECK((V.final() - ((1 - std::exp(-4 * t)) / 4) * SpectralField::sine(lat, {2, 0})).max_abs() < 1e-14);
  const auto D = apply_V_derivative(spec, Trajectory::constant(grid, SpectralField::cosine(lat, {2, 0}, 0.5)));
  CHECK((D.final() - (-2 * (1 - std::exp(-4 * t)) / 4) * SpectralField::sine(lat, {2, 0})).max_abs() < 1e-14);
}

TEST_CASE("fix1 on Burgers agrees with exponential time differencing") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const auto u0 = SpectralField::sine(TorusLattice(1, 32), {1, 0}, 1.0);
  const auto r = solve_fix1(spec, u0, burgers_fix1(0.05));
  REQUIRE(r.converged);
  CHECK(r.T_effective == 0.05);
  CHECK(r.halvings == 0);
  const auto ref = etd_reference(spec, u0, 0.05, 1e-4);
  CHECK(sup_norm(r.u->final() - ref.final()) < 1e-5);
  for (double q : r.contraction_ratios) CHECK(q < 1.0);
  CHECK(r.iterate_norms.size() == r.increments.size());
}

TEST_CASE("unresolved gate windows fail the data gate") {
  // 4 N^{-2} = 1/64 leaves only two dyadic windows below T = 0.05.
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const auto r = solve_fix1(spec, SpectralField::sine(TorusLattice(1, 16), {1, 0}), burgers_fix1(0.05));
  CHECK(r.iteration_converged);
  CHECK_FALSE(r.data_gates_ok);
  CHECK_FALSE(r.converged);
}

TEST_CASE("zero data gives the zero solution") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const TorusLattice lat(1, 8);
  auto c = burgers_fix1(0.05);
  c.data_gate = false;
  const auto r = solve_fix1(spec, SpectralField(lat), c);
  REQUIRE(r.iteration_converged);
  CHECK(r.u->final().max_abs() == 0.0);
}

TEST_CASE("fix1 is deterministic across execution policies") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  GaussianICSpec ic;
  ic.N = 16;
  ic.theta = -1.0;
  const auto u0 = sample_ic(ic, 0).field;
  auto c = burgers_fix1(0.02);
  c.data_gate = false;
  const auto a = solve_fix1(spec, u0, c, Exec::serial);
  const auto b = solve_fix1(spec, u0, c, Exec::parallel);
  REQUIRE(a.iteration_converged);
  CHECK(a.iterate_norms == b.iterate_norms);
  CHECK((a.u->final() - b.u->final()).max_abs() == 0.0);
}

TEST_CASE("large data forces horizon halving") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const auto u0 = SpectralField::sine(TorusLattice(1, 16), {1, 0}, 40.0);
  auto c = burgers_fix1(1.0);
  c.data_gate = false;
  const auto r = solve_fix1(spec, u0, c);
  CHECK(r.halvings > 0);
  CHECK(r.T_effective < 1.0);
  CHECK(r.T_effective == doctest::Approx(std::ldexp(1.0, -r.halvings)));
  if (r.converged) {
    const auto ref = etd_reference(spec, u0, r.T_effective, r.T_effective / 2000);
    CHECK(sup_norm(r.u->final() - ref.final()) < 1e-3 * sup_norm(ref.final()));
  }
}

TEST_CASE("linear ETD matches the semigroup") {
  const auto spec = EquationSpec::catalogue(EquationKind::ks);
  GaussianICSpec ic;
  ic.N = 16;
  const auto u0 = sample_ic(ic, 1).field;
  const auto ref = etd_reference(spec, u0, 0.01, 1e-5, false);
  const LinearOperator op(spec, u0.lattice());
  CHECK((ref.final() - semigroup_apply(op, u0, 0.01)).max_abs() < 1e-12);
  CHECK_THROWS_AS(etd_reference(spec, u0, 0.01, 1.0), ValidationError);
}

TEST_CASE("fix2 on smooth data agrees with fix1") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  const auto u0 = SpectralField::sine(TorusLattice(1, 16), {1, 0}, 1.0);
  auto c = burgers_fix1(0.02);
  c.data_gate = false;
  const auto r1 = solve_fix1(spec, u0, c);
  c.formulation = Formulation::fix2;
  c.gamma = 0.25;
  const auto r2 = solve_fix2(spec, u0, c);
  REQUIRE(r1.iteration_converged);
  REQUIRE(r2.iteration_converged);
  CHECK(sup_norm(r1.u->final() - r2.u->final()) < 1e-6);
}

TEST_CASE("second-order fixed point satisfies the fix2 equation") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  GaussianICSpec ic;
  ic.theta = 0.5;
  ic.nu = 0.8;
  ic.log_weights = true;
  ic.N = 32;
  ic.seed = 3;
  PicardConfig c;
  c.formulation = Formulation::second_order;
  c.nu = 0.8;
  c.kappa = 1.3;
  c.beta = 0.35;
  c.T = 0.01;
  const auto r = solve_second_order(spec, sample_ic(ic, 0).field, c);
  REQUIRE(r.converged);
  REQUIRE(r.fix2_residual.has_value());
  CHECK(*r.fix2_residual <= 5 * c.contraction_tol);
  REQUIRE(r.terms.has_value());
  CHECK(r.terms->r_term > 0.0);
}

TEST_CASE("bound constants are finite") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  GaussianICSpec ic;
  ic.N = 32;
  ic.theta = -0.5;
  const auto grid = TimeGrid::graded(0.05, 1e-6, 30);
  const auto obj = build_objects(sample_ic(ic, 0).field, spec, grid);
  const DyadicPartition P(ic.lattice());
  const auto b = nonlinear_bound(spec, obj.eta0, 0.0, 0.25, 0.5, P);
  CHECK(std::isfinite(b.constant));
  CHECK(b.constant > 0.0);
  CHECK(b.constant == doctest::Approx(b.lhs / b.rhs));
  const auto m = mixed_bound(spec, obj.eta0, obj.eta0, 0.0, 0.25, 0.25, 0.5, P);
  CHECK(std::isfinite(m.constant));
}

TEST_CASE("double paraproduct prefactor shrinks with the horizon") {
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  GaussianICSpec ic;
  ic.theta = 0.5;
  ic.nu = 0.8;
  ic.log_weights = true;
  ic.N = 128;
  ic.seed = 3;
  PicardConfig c;
  c.beta = 0.35;
  c.kappa = 1.3;
  c.nu = 0.8;
  c.T = 0.01;
  const auto tr = prefactor_trend(spec, sample_ic(ic, 0).field, c, 4);
  for (std::size_t i = 1; i < tr.prefactor.size(); ++i) CHECK(tr.prefactor[i] < tr.prefactor[i - 1]);
}

TEST_CASE("double paraproduct prefactor decays like l(T)^{-0.3}" * doctest::may_fail()) {
  // Measured decay is much faster than the logarithmic rate; kept as a record.
  const auto spec = EquationSpec::catalogue(EquationKind::burgers);
  GaussianICSpec ic;
  ic.theta = 0.5;
  ic.nu = 0.8;
  ic.log_weights = true;
  ic.N = 128;
  ic.seed = 3;
  PicardConfig c;
  c.beta = 0.35;
  c.kappa = 1.3;
  c.nu = 0.8;
  c.T = 0.01;
  const auto tr = prefactor_trend(spec, sample_ic(ic, 0).field, c, 4);
  CHECK(tr.exponent == doctest::Approx(-0.3).epsilon(0.5));
}
