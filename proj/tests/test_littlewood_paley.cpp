#include <doctest.h>

#include <cmath>

#include "roughstart/littlewood_paley.hpp"
#include "roughstart/random_ic.hpp"

using namespace roughstart;

namespace {

SpectralField random_field(int N, std::uint64_t replica, double theta = 0.0) {
  GaussianICSpec s;
  s.N = N;
  s.theta = theta;
  s.seed = 314;
  s.mass_conserving = false;
  return sample_ic(s, replica).field;
}

}  // namespace

TEST_CASE("partition of unity") {
  for (double r = 0.0; r < 600.0; r += 0.173) {
    double sum = 0.0;
    for (int j = -1; j <= 12; ++j) sum += DyadicPartition::weight(j, r);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(DyadicPartition::psi(0.75) == 1.0);
  CHECK(DyadicPartition::psi(4.0 / 3.0) == 0.0);
  CHECK(DyadicPartition::rho(0.74) == 0.0);
  CHECK(DyadicPartition::rho(2.67) == 0.0);
  // Non-adjacent blocks never overlap.
  for (double r = 0.0; r < 300.0; r += 0.01)
    for (int i = -1; i <= 8; ++i)
      for (int j = i + 2; j <= 8; ++j) CHECK(DyadicPartition::weight(i, r) * DyadicPartition::weight(j, r) == 0.0);
}

TEST_CASE("low-pass weights are partial sums") {
  for (double r : {0.0, 0.5, 1.0, 3.3, 17.0, 100.0})
    for (int j = -1; j <= 7; ++j) {
      double s = 0.0;
      for (int i = -1; i <= j; ++i) s += DyadicPartition::weight(i, r);
      CHECK(DyadicPartition::low_pass_weight(j, r) == doctest::Approx(s).epsilon(1e-14));
    }
  CHECK(DyadicPartition::low_pass_weight(-2, 0.0) == 0.0);
}

TEST_CASE("blocks sum to the field") {
  const auto f = random_field(64, 0);
  const DyadicPartition P(f.lattice());
  SpectralField sum(f.lattice());
  for (int j = -1; j <= P.j_max(); ++j) sum += block(f, j, P);
  CHECK((sum - f).max_abs() < 1e-14);
  CHECK((low_pass(f, P.j_max(), P) - f).max_abs() < 1e-14);
}

TEST_CASE("Besov norm golden values") {
  const TorusLattice lat(1, 64);
  const DyadicPartition P(lat);
  // Only block -1 sees the constant mode: 2^{-alpha} |c|, times (1 + 1) with a log weight.
  const auto c = SpectralField::constant(lat, -2.0);
  CHECK(besov_norm(c, {0.0}, P) == doctest::Approx(2.0));
  CHECK(besov_norm(c, {1.0}, P) == doctest::Approx(1.0));
  CHECK(besov_norm(c, {1.0, INFINITY, INFINITY, 1.0}, P) == doctest::Approx(2.0));
  // rho_3(12) = 1: an interior mode has norm exactly its sup.
  CHECK(besov_norm(SpectralField::cosine(lat, {12, 0}, 0.5), {0.0}, P) == doctest::Approx(1.0).epsilon(1e-12));
  // |k| = 16 sits on the 3/4 boundary transition and splits between blocks 3 and 4.
  const double v = besov_norm(SpectralField::cosine(lat, {16, 0}, 0.5), {0.0}, P);
  CHECK(v <= 1.0 + 1e-12);
  CHECK(v >= 0.5);
  CHECK(besov_block_weight(-1, 0.5, 1.0) == doctest::Approx(2.0 * std::pow(2.0, -0.5)));
  CHECK(besov_block_weight(0, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(besov_block_weight(3, 0.0, 0.0) == 1.0);
}

TEST_CASE("Besov norm is subadditive and homogeneous") {
  const auto f = random_field(64, 1, 0.3), g = random_field(64, 2, -0.2);
  const DyadicPartition P(f.lattice());
  for (double alpha : {-0.5, 0.0, 0.7}) {
    const BesovParams bp{alpha};
    CHECK(besov_norm(f + g, bp, P) <= besov_norm(f, bp, P) + besov_norm(g, bp, P) + 1e-12);
    CHECK(besov_norm(3.0 * f, bp, P) == doctest::Approx(3.0 * besov_norm(f, bp, P)).epsilon(1e-12));
  }
}

TEST_CASE("paraproduct decomposition and symmetry") {
  const auto f = random_field(32, 3), g = random_field(32, 4);
  const DyadicPartition P(f.lattice());
  const auto fg = convolve(f, g);
  const auto sum = paraproduct_lt(f, g, P) + paraproduct_res(f, g, P) + paraproduct_gt(f, g, P);
  CHECK((fg - sum).max_abs() <= 1e-12 * fg.max_abs());
  CHECK((paraproduct_res(f, g, P) - paraproduct_res(g, f, P)).max_abs() <= 1e-13 * fg.max_abs());
  CHECK((paraproduct_gt(f, g, P) - paraproduct_lt(g, f, P)).max_abs() == 0.0);
  CHECK((paraproduct_ge(f, g, P) - paraproduct_gt(f, g, P) - paraproduct_res(f, g, P)).max_abs() <=
        1e-13 * fg.max_abs());
  CHECK(paraproduct_lt(f, SpectralField(f.lattice()), P).max_abs() == 0.0);
}

TEST_CASE("paraproducts match direct block sums") {
  const auto f = random_field(16, 5), g = random_field(16, 6);
  const DyadicPartition P(f.lattice());
  const double scale = convolve(f, g).max_abs();
  const auto lt = paraproduct_direct(f, g, P, [](int m, int n) { return m <= n - 2; });
  const auto res = paraproduct_direct(f, g, P, [](int m, int n) { return std::abs(m - n) <= 1; });
  CHECK((paraproduct_lt(f, g, P) - lt).max_abs() <= 1e-12 * scale);
  CHECK((paraproduct_res(f, g, P) - res).max_abs() <= 1e-12 * scale);
}

TEST_CASE("constant times field: c < g keeps only high blocks of g") {
  const auto g = random_field(32, 7);
  const DyadicPartition P(g.lattice());
  const auto c = SpectralField::constant(g.lattice(), 1.5);
  const auto lt = paraproduct_lt(c, g, P);
  SpectralField tail(g.lattice());
  for (int n = 1; n <= P.j_max(); ++n) tail += block(g, n, P);
  CHECK((lt - 1.5 * tail).max_abs() < 1e-13);
}

TEST_CASE("weighted norm examples") {
  const TorusLattice lat(1, 32);
  const DyadicPartition P(lat);
  const auto u0 = random_field(32, 8);
  const auto grid = TimeGrid::graded(1.0, 1e-5, 20);
  const double base = besov_norm(u0, {0.0}, P);

  const auto flat = Trajectory::constant(grid, u0);
  CHECK(weighted_norm(flat, {0.0, 0.0, 1.0}, P).value == doctest::Approx(base));

  std::vector<SpectralField> vals;
  for (double t : grid.times()) vals.push_back(t > 0 ? std::pow(t, -0.3) * u0 : SpectralField(lat));
  const Trajectory sing(grid, vals);
  CHECK(weighted_norm(sing, {0.0, 0.3, 1.0}, P).value == doctest::Approx(base).epsilon(1e-12));
  const auto r = weighted_norm(sing.truncated(grid[grid.size() / 2]), {0.0, 0.5, grid[grid.size() / 2]}, P);
  CHECK(r.value == doctest::Approx(std::pow(grid[grid.size() / 2], 0.2) * base).epsilon(1e-12));
  CHECK(r.argmax_t == grid[grid.size() / 2]);
}

TEST_CASE("tamed log") {
  CHECK(tamed_log(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(tamed_log(1e-3) == doctest::Approx(std::log(1e3)));
}

TEST_CASE("vanishing check") {
  const TorusLattice lat(1, 16);
  const DyadicPartition P(lat);
  const auto u0 = random_field(16, 9);
  const auto grid = TimeGrid::graded(1.0, 1e-6, 20);
  std::vector<SpectralField> good, bad;
  for (double t : grid.times()) {
    good.push_back(std::sqrt(t) * u0);
    bad.push_back(t > 0 ? std::pow(t, -0.25) * u0 : SpectralField(lat));
  }
  const auto vg = vanishing_check(Trajectory(grid, good), {0.0, 0.0, 1.0}, P);
  CHECK(vg.vanishes);
  CHECK(vg.window_values.size() >= 3);
  for (std::size_t i = 1; i < vg.window_values.size(); ++i) CHECK(vg.window_values[i] <= vg.window_values[i - 1]);
  // t^{-1/4} profile weighted by t^{1/4} is constant: it does not vanish.
  CHECK_FALSE(vanishing_check(Trajectory(grid, bad), {0.0, 0.25, 1.0}, P).vanishes);
}
