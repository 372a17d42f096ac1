#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "roughstart/common.hpp"
#include "roughstart/fft.hpp"
#include "roughstart/quadrature.hpp"
#include "roughstart/random_ic.hpp"
#include "roughstart/spectral_field.hpp"
#include "roughstart/trajectory.hpp"

using namespace roughstart;

namespace {

SpectralField random_field(int d, int N, std::uint64_t replica, double theta = 0.0) {
  GaussianICSpec s;
  s.d = d;
  s.N = N;
  s.theta = theta;
  s.seed = 99;
  s.mass_conserving = false;
  return sample_ic(s, replica).field;
}

double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("lattice indexing round trips") {
  for (int d : {1, 2}) {
    const TorusLattice lat(d, 5);
    CHECK(lat.size() == (d == 1 ? 11u : 121u));
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const auto k = lat.wave(i);
      CHECK(lat.index(k) == i);
      const auto nk = lat.wave(lat.negate(i));
      CHECK(nk[0] == -k[0]);
      CHECK(nk[1] == -k[1]);
    }
    CHECK(lat.wave(lat.origin()) == WaveVector{0, 0});
  }
  CHECK_THROWS_AS(TorusLattice(3, 4), ValidationError);
  CHECK_THROWS_AS(TorusLattice(1, 0), ValidationError);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  bool exact = false;
  CHECK(rational_from_double(0.125, 1000, &exact) == Rational(1, 8));
  CHECK(exact);
  CHECK(to_string(Rational(-1, 4)) == "-1/4");
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("good_size returns 2-3-5-7 smooth sizes") {
  for (int n : {1, 7, 97, 193, 769, 3073}) {
    const int m = fft::good_size(n);
    CHECK(m >= n);
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    CHECK(r == 1);
  }
}

TEST_CASE("convolution of single modes") {
  const TorusLattice lat(1, 8);
  const auto e2 = SpectralField::exponential(lat, {2, 0});
  const auto e3 = SpectralField::exponential(lat, {3, 0}, Complex(0, 2));
  const auto p = convolve(e2, e3);
  CHECK(std::abs(p[{5, 0}] - Complex(0, 2)) < 1e-14);
  CHECK(p.max_abs() == doctest::Approx(2.0));
  // Truncation: 5 + 5 = 10 leaves the lattice.
  const auto e5 = SpectralField::exponential(lat, {5, 0});
  CHECK(convolve(e5, e5).max_abs() < 1e-14);
}

TEST_CASE("cos^2 = (1 + cos 2x)/2") {
  const TorusLattice lat(1, 4);
  const auto c = SpectralField::cosine(lat, {1, 0}, 0.5);
  const auto p = convolve(c, c);
  CHECK(std::abs(p[{0, 0}] - 0.5) < 1e-15);
  CHECK(std::abs(p[{2, 0}] - 0.25) < 1e-15);
  CHECK(std::abs(p[{-2, 0}] - 0.25) < 1e-15);
  CHECK(p.hermitian());
}

TEST_CASE("FFT convolution agrees with the direct sum") {
  for (int d : {1, 2}) {
    const int N = d == 1 ? 24 : 6;
    for (std::uint64_t r = 0; r < 3; ++r) {
      const auto f = random_field(d, N, 2 * r), g = random_field(d, N, 2 * r + 1);
      const auto fast = convolve(f, g), slow = convolve_direct(f, g);
      CHECK(max_diff(fast, slow) <= 1e-12 * slow.max_abs());
    }
  }
}

TEST_CASE("product_sum equals the sum of convolutions") {
  const TorusLattice lat(1, 16);
  std::vector<SpectralField> f, g;
  for (std::uint64_t r = 0; r < 3; ++r) {
    f.push_back(random_field(1, 16, r));
    g.push_back(random_field(1, 16, 10 + r));
  }
  SpectralField ref(lat);
  for (int i = 0; i < 3; ++i) ref += convolve_direct(f[i], g[i]);
  CHECK(max_diff(product_sum(f, g), ref) <= 1e-12 * ref.max_abs());
}

TEST_CASE("lattice mismatch is rejected") {
  const auto f = random_field(1, 8, 0), g = random_field(1, 16, 0);
  CHECK_THROWS_AS(convolve(f, g), ValidationError);
  CHECK_THROWS_AS((void)(f - g), ValidationError);
}

TEST_CASE("sup_norm of trigonometric polynomials") {
  const TorusLattice lat(1, 16);
  CHECK(sup_norm(SpectralField::sine(lat, {3, 0}, 2.5)) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(sup_norm(SpectralField::constant(lat, -3.0)) == doctest::Approx(3.0).epsilon(1e-14));
  // sin x + sin 2x peaks at x ~ 0.9359 with value ~ 1.7602.
  auto f = SpectralField::sine(lat, {1, 0}) + SpectralField::sine(lat, {2, 0});
  double brute = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double x = 2 * std::numbers::pi * i / 200000.0;
    brute = std::max(brute, std::abs(std::sin(x) + std::sin(2 * x)));
  }
  CHECK(sup_norm(f) == doctest::Approx(brute).epsilon(1e-9));
  CHECK(sup_norm(f) >= brute - 1e-12);
}

TEST_CASE("sup_norm bounds the values at arbitrary points") {
  const auto f = random_field(1, 32, 4);
  const double s = sup_norm(f);
  for (int i = 0; i < 500; ++i) {
    const double x[1] = {0.0137 * i};
    CHECK(std::abs(evaluate(f, x)) <= s * (1 + 1e-9));
  }
}

TEST_CASE("derivatives of single modes") {
  const TorusLattice lat(1, 8);
  const auto s = SpectralField::sine(lat, {2, 0});
  const auto ds = partial(s, 0);
  // d/dx sin 2x = 2 cos 2x
  CHECK(max_diff(ds, SpectralField::cosine(lat, {2, 0}, 1.0)) < 1e-14);
  const auto c = SpectralField::constant(lat, 1.0) + s;
  const auto lap = derivative_multiplier(c, 2.0);
  CHECK(max_diff(lap, 4.0 * s) < 1e-14);
  CHECK(max_diff(derivative_multiplier(c, 0.0), c) < 1e-15);
}

TEST_CASE("hermitian bookkeeping and mean projection") {
  auto f = random_field(2, 5, 1);
  CHECK(f.hermitian());
  CHECK(f.hermitian_defect() < 1e-15);
  auto g = project_mean_zero(f);
  CHECK(g.mean_zero());
  CHECK(g[{0, 0}] == Complex(0.0));
}

TEST_CASE("JSON round trip") {
  const auto f = random_field(1, 8, 2);
  const auto g = field_from_json(to_json(f));
  CHECK(max_diff(f, g) == 0.0);
  CHECK(g.hermitian() == f.hermitian());
}

TEST_CASE("time grids") {
  const auto g = TimeGrid::graded(0.05, 1e-6, 20);
  CHECK(g[0] == 0.0);
  CHECK(g.T() == 0.05);
  CHECK(g.t_first() == doctest::Approx(1e-6));
  CHECK(g.graded_toward_zero());
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_FALSE(TimeGrid::uniform(1.0, 10).graded_toward_zero());
  const auto h = g.truncated(0.01);
  CHECK(h.T() == 0.01);
  CHECK_THROWS_AS(TimeGrid({0.0, 0.2, 0.1}), ValidationError);
}

TEST_CASE("phi functions") {
  for (double z : {-30.0, -1.0, -1e-3, -1e-9, 0.0, 1e-6, 0.5}) {
    if (std::abs(z) > 1e-2) {
      CHECK(phi1(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-13));
      CHECK(phi2(z) == doctest::Approx((std::expm1(z) - z) / (z * z)).epsilon(1e-10));
    }
  }
  CHECK(phi1(0.0) == 1.0);
  CHECK(phi2(0.0) == 0.5);
  CHECK(phi1(-1e-9) == doctest::Approx(1.0 - 0.5e-9).epsilon(1e-15));
}
