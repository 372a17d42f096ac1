#include "roughstart/stochastic_objects.hpp"

#include <algorithm>
#include <cmath>

#include "roughstart/quadrature.hpp"
#include "roughstart/stats.hpp"

namespace roughstart {

SpectralField eta1_at(const LinearOperator& op, const SpectralField& u0, double t) {
  const SpectralField e0 = semigroup_apply(op, u0, t);
  return nonlinearity(op.spec(), e0, e0);
}

StochasticTrajectory build_objects(const SpectralField& u0, const EquationSpec& spec, const TimeGrid& grid) {
  if (!grid.graded_toward_zero()) throw ValidationError("build_objects: time grid is not graded toward 0");
  const LinearOperator op(spec, u0.lattice());
  const std::size_t nt = grid.size();
  std::vector<SpectralField> e0(nt, u0), e1(nt, u0);
  const auto n = static_cast<long>(nt);
#pragma omp parallel for schedule(static)
  for (long li = 0; li < n; ++li) {
    const auto i = static_cast<std::size_t>(li);
    e0[i] = semigroup_apply(op, u0, grid[i]);
    e1[i] = nonlinearity(spec, e0[i], e0[i]);
  }
  Trajectory eta1(grid, std::move(e1));
  Trajectory eta2 = duhamel(op, eta1);
  return {Trajectory(grid, std::move(e0)), std::move(eta1), std::move(eta2), spec, std::nullopt, 0};
}

StochasticTrajectory build_objects(const GaussianICSpec& ic, std::uint64_t replica, const EquationSpec& spec,
                                   const TimeGrid& grid) {
  auto objs = build_objects(sample_ic(ic, replica).field, spec, grid);
  objs.ic = ic;
  objs.replica = replica;
  return objs;
}

double exact_second_moment(const GaussianICSpec& ic, const EquationSpec& spec, int j, double t,
                           const DyadicPartition& partition) {
  const TorusLattice lat = ic.lattice();
  if (!(lat == partition.lattice())) throw ValidationError("exact_second_moment: lattice mismatch");
  if (spec.d != lat.dim()) throw ValidationError("exact_second_moment: dimension mismatch");
  if (t < 0) throw ValidationError("exact_second_moment: t must be >= 0");
  const auto& rho = partition.multiplier(j);
  const std::size_t n = lat.size();
  std::vector<double> amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = lat.norm(i);
    amp[i] = ic.weight(r) * std::exp(t * eigenvalue(spec, r));
  }
  std::vector<double> partial(n, 0.0);
  const auto nl = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long lm = 0; lm < nl; ++lm) {
    const auto im = static_cast<std::size_t>(lm);
    if (amp[im] == 0.0) continue;
    const WaveVector m = lat.wave(im);
    double s = 0.0;
    for (std::size_t in = 0; in < n; ++in) {
      if (amp[in] == 0.0) continue;
      const WaveVector nn = lat.wave(in);
      const WaveVector k{m[0] + nn[0], m[1] + nn[1]};
      if (!lat.contains(k)) continue;
      const double w = rho[lat.index(k)];
      if (w == 0.0) continue;
      const double a = w * amp[im] * amp[in];
      const Complex c_mn = a * bilinear_coefficient(spec, m, nn);
      const Complex c_nm = a * bilinear_coefficient(spec, nn, m);
      s += (c_mn * std::conj(c_mn + c_nm)).real();
    }
    partial[im] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double block_value_at_origin(const LinearOperator& op, const SpectralField& u0, int j, double t,
                             const DyadicPartition& partition) {
  const SpectralField b = block(eta1_at(op, u0, t), j, partition);
  Complex s(0.0, 0.0);
  for (const auto& c : b.coeffs()) s += c;
  return s.real();
}

MomentEstimate mc_second_moment(const GaussianICSpec& ic, const EquationSpec& spec, int j, double t,
                                const DyadicPartition& partition, std::size_t M) {
  if (M < 2) throw ValidationError("mc_second_moment: need M >= 2");
  const LinearOperator op(spec, ic.lattice());
  std::vector<double> x(M);
  const auto m = static_cast<long>(M);
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < m; ++r) {
    const double v = block_value_at_origin(op, sample_ic(ic, static_cast<std::uint64_t>(r)).field, j, t, partition);
    x[static_cast<std::size_t>(r)] = v * v;
  }
  return {stats::mean(x), stats::standard_error(x)};
}

ExponentFit fit_power_law(std::span<const double> times, std::span<const double> values, double alpha) {
  if (times.size() != values.size() || times.size() < 3) throw ValidationError("fit_power_law: need >= 3 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0) || !(values[i] > 0)) throw NumericalError("fit_power_law: nonpositive value");
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(values[i]));
  }
  const auto fit = stats::fit_line(lx, ly);
  ExponentFit out;
  out.beta_hat = -fit.slope;
  out.se = fit.slope_se;
  out.t_min = *std::min_element(times.begin(), times.end());
  out.t_max = *std::max_element(times.begin(), times.end());
  out.alpha = alpha;
  out.times.assign(times.begin(), times.end());
  out.values.assign(values.begin(), values.end());
  return out;
}

std::vector<double> fit_times(int N, double tau, const FitWindow& window) {
  const double resolved = std::pow(static_cast<double>(N), -tau);
  const double lo = window.t_min > 0 ? window.t_min : 4.0 * resolved;
  if (lo < resolved) throw ValidationError("fit window reaches unresolved scales t < N^{-tau}");
  if (!(window.t_max > lo) || window.points < 3) throw ValidationError("fit window is empty");
  std::vector<double> t(static_cast<std::size_t>(window.points));
  for (int i = 0; i < window.points; ++i)
    t[static_cast<std::size_t>(i)] = lo * std::pow(window.t_max / lo, static_cast<double>(i) / (window.points - 1));
  return t;
}

double exact_norm_proxy(const GaussianICSpec& ic, const EquationSpec& spec, double alpha, double t,
                        const DyadicPartition& partition) {
  double best = 0.0;
  for (int j = -1; j <= partition.j_max(); ++j)
    best = std::max(best, std::exp2(j * alpha) * std::sqrt(exact_second_moment(ic, spec, j, t, partition)));
  return best;
}

namespace {

double field_norm(const SpectralField& f, double alpha, const DyadicPartition& partition) {
  return besov_from_blocks(block_sups(f, partition, Exec::serial), alpha, 0.0);
}

}  // namespace

EnsembleCurves ensemble_curves(const GaussianICSpec& ic, const EquationSpec& spec, const DyadicPartition& partition,
                               const EnsembleOptions& options) {
  const TorusLattice lat = ic.lattice();
  const LinearOperator op(spec, lat);
  const double tau = to_double(spec.tau);
  auto targets = fit_times(ic.N, tau, options.window);

  std::optional<TimeGrid> grid;
  std::vector<std::size_t> nodes;
  EnsembleCurves out;
  if (options.with_eta2) {
    const double t_min = 0.01 * std::pow(static_cast<double>(ic.N), -tau);
    grid = TimeGrid::graded(options.window.t_max, t_min, options.per_decade);
    const auto ts = grid->times();
    for (double target : targets) {
      auto it = std::min_element(ts.begin(), ts.end(), [&](double a, double b) {
        return std::abs(std::log(a / target)) < std::abs(std::log(b / target));
      });
      const auto idx = static_cast<std::size_t>(it - ts.begin());
      if (nodes.empty() || nodes.back() != idx) nodes.push_back(idx);
    }
    targets.clear();
    for (auto idx : nodes) targets.push_back(grid->times()[idx]);
  }
  out.times = targets;
  const std::size_t nt = targets.size();
  const std::size_t M = options.M;
  std::vector<std::vector<double>> e1(M, std::vector<double>(nt)), e2(M, std::vector<double>(nt));
  const auto m = static_cast<long>(M);
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < m; ++r) {
    const auto ri = static_cast<std::size_t>(r);
    const SpectralField u0 = sample_ic(ic, ri).field;
    for (std::size_t i = 0; i < nt; ++i) e1[ri][i] = field_norm(eta1_at(op, u0, targets[i]), options.alpha, partition);
    if (grid) {
      std::vector<SpectralField> g;
      g.reserve(grid->size());
      for (double t : grid->times()) g.push_back(eta1_at(op, u0, t));
      const Trajectory eta2 = duhamel(op, Trajectory(*grid, std::move(g)), Exec::serial);
      for (std::size_t i = 0; i < nt; ++i) e2[ri][i] = field_norm(eta2.values[nodes[i]], options.alpha, partition);
    }
  }
  for (std::size_t i = 0; i < nt; ++i) {
    std::vector<double> c1(M), c2(M);
    for (std::size_t r = 0; r < M; ++r) {
      c1[r] = e1[r][i];
      c2[r] = e2[r][i];
    }
    out.eta1_mean.push_back(stats::mean(c1));
    out.eta1_se.push_back(stats::standard_error(c1));
    if (grid) {
      out.eta2_mean.push_back(stats::mean(c2));
      out.eta2_se.push_back(stats::standard_error(c2));
    }
  }
  return out;
}

std::vector<double> deterministic_curve(const SpectralField& u0, const EquationSpec& spec, double alpha,
                                        std::span<const double> times, const DyadicPartition& partition) {
  const LinearOperator op(spec, u0.lattice());
  std::vector<double> out;
  for (double t : times) out.push_back(field_norm(eta1_at(op, u0, t), alpha, partition));
  return out;
}

SingularityVerdict singularity_verdict(const ExponentFit& fit, double bound, double slack) {
  return {fit, bound, fit.beta_hat <= bound + slack};
}

}  // namespace roughstart
