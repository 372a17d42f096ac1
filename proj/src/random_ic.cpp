#include "roughstart/random_ic.hpp"

#include <cmath>
#include <sstream>

#include "roughstart/rng.hpp"
#include "roughstart/stats.hpp"

namespace roughstart {

double GaussianICSpec::weight(double r) const {
  if (r == 0.0) return mass_conserving ? 0.0 : amplitude;
  double w = amplitude * std::pow(r, theta);
  if (log_weights) w *= std::pow(std::log1p(r), -nu - 0.5);
  return w;
}

GaussianSample sample_ic(const GaussianICSpec& spec, std::uint64_t replica) {
  const TorusLattice lat = spec.lattice();
  SpectralField f(lat);
  auto c = f.coeffs();
  const std::size_t origin = lat.origin();
  const auto n = static_cast<long>(lat.size());
#pragma omp parallel for schedule(static)
  for (long li = static_cast<long>(origin) + 1; li < n; ++li) {
    const auto i = static_cast<std::size_t>(li);
    const WaveVector k = lat.wave(i);
    const auto [g1, g2] = rng::normal_pair(rng::key(spec.seed, replica, rng::wave_item(k[0], k[1])));
    const Complex xi = Complex(g1, g2) / std::sqrt(2.0);
    const Complex v = spec.weight(lat.norm(i)) * xi;
    c[i] = v;
    c[lat.negate(i)] = std::conj(v);
  }
  if (!spec.mass_conserving) {
    const auto [g1, g2] = rng::normal_pair(rng::key(spec.seed, replica, rng::wave_item(0, 0)));
    (void)g2;
    c[origin] = spec.weight(0.0) * g1;
  }
  f.set_mean_zero(spec.mass_conserving);
  return {std::move(f), spec.seed, replica};
}

SpectralField deterministic_ic(const GaussianICSpec& spec) {
  const TorusLattice lat = spec.lattice();
  SpectralField f(lat);
  auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = spec.weight(lat.norm(i));
  f.set_mean_zero(spec.mass_conserving);
  return f;
}

ProbeTable block_growth_probe(const std::function<SpectralField(std::uint64_t)>& sampler, std::size_t M,
                              const DyadicPartition& partition, const ProbeOptions& options) {
  if (M < 50) throw ValidationError("block_growth_probe: need M >= 50 samples");
  const int jmax = partition.j_max();
  const int j_hi = options.j_hi < 0 ? jmax + options.j_hi : options.j_hi;
  const int j_lo = options.j_lo;
  if (j_hi > jmax || j_lo < 0 || j_hi - j_lo + 1 < 4)
    throw ValidationError("block_growth_probe: lattice too small for 4 usable blocks");

  std::vector<std::vector<double>> sups(M);
  const auto m_count = static_cast<long>(M);
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < m_count; ++r) {
    const SpectralField f = sampler(static_cast<std::uint64_t>(r));
    sups[static_cast<std::size_t>(r)] = block_sups(f, partition, Exec::serial);
  }

  ProbeTable table;
  table.j_lo = j_lo;
  table.j_hi = j_hi;
  std::vector<double> js, ys;
  for (int j = -1; j <= jmax; ++j) {
    std::vector<double> col(M);
    for (std::size_t r = 0; r < M; ++r) col[r] = sups[r][static_cast<std::size_t>(j + 1)];
    ProbeRow row{j, stats::mean(col), stats::quantile(col, 0.05), stats::quantile(col, 0.5),
                 stats::quantile(col, 0.95)};
    table.rows.push_back(row);
    if (j >= j_lo && j <= j_hi) {
      if (!(row.mean > 0)) throw NumericalError("block_growth_probe: empty block in fit range");
      js.push_back(j);
      ys.push_back(std::log2(row.mean));
    }
  }
  table.plain_slope = stats::fit_line(js, ys).slope;
  if (options.fit_log) {
    const auto n = static_cast<Eigen::Index>(js.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double j = js[static_cast<std::size_t>(i)];
      X(i, 0) = 1.0;
      X(i, 1) = j;
      X(i, 2) = std::log2(j);
      y(i) = ys[static_cast<std::size_t>(i)];
    }
    const auto ls = stats::least_squares(X, y);
    table.slope = ls.coef(1);
    table.slope_se = ls.se(1);
    table.log_exponent = ls.coef(2);
    table.log_exponent_se = ls.se(2);
  } else {
    const auto fit = stats::fit_line(js, ys);
    table.slope = fit.slope;
    table.slope_se = fit.slope_se;
  }
  return table;
}

ProbeTable block_growth_probe(const GaussianICSpec& spec, std::size_t M, const DyadicPartition& partition,
                              const ProbeOptions& options) {
  return block_growth_probe([&](std::uint64_t r) { return sample_ic(spec, r).field; }, M, partition, options);
}

std::string probe_csv(const ProbeTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "j,mean,p05,p50,p95,fitted_slope\n";
  for (const auto& r : table.rows)
    os << r.j << ',' << r.mean << ',' << r.p05 << ',' << r.p50 << ',' << r.p95 << ',' << table.slope << '\n';
  return os.str();
}

}  // namespace roughstart
