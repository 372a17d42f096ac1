#include "roughstart/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <omp.h>

namespace roughstart {

namespace {

double smooth_step(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

}  // namespace

double DyadicPartition::psi(double r) {
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  const double x = (r - inner) / (outer - inner);
  const double a = smooth_step(1.0 - x);
  const double b = smooth_step(x);
  return a / (a + b);
}

double DyadicPartition::weight(int j, double r) {
  if (j < -1) return 0.0;
  if (j == -1) return chi(r);
  return rho(std::ldexp(r, -j));
}

double DyadicPartition::low_pass_weight(int j, double r) {
  if (j < -1) return 0.0;
  return psi(std::ldexp(r, -(j + 1)));
}

DyadicPartition::DyadicPartition(const TorusLattice& lattice) : lattice_(lattice) {
  double rmax = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) rmax = std::max(rmax, lattice.norm(i));
  j_max_ = -1;
  while (std::ldexp(inner, j_max_ + 1) < rmax) ++j_max_;
  zero_.assign(lattice.size(), 0.0);
  for (int j = -1; j <= j_max_; ++j) {
    std::vector<double> m(lattice.size()), s(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const double r = lattice.norm(i);
      m[i] = weight(j, r);
      s[i] = low_pass_weight(j, r);
    }
    blocks_.push_back(std::move(m));
    lows_.push_back(std::move(s));
  }
}

const std::vector<double>& DyadicPartition::multiplier(int j) const {
  if (j < -1 || j > j_max_) throw ValidationError("DyadicPartition: block index out of range");
  return blocks_[static_cast<std::size_t>(j + 1)];
}

const std::vector<double>& DyadicPartition::low_pass(int j) const {
  if (j < -1) return zero_;
  return lows_[static_cast<std::size_t>(std::min(j, j_max_) + 1)];
}

namespace {

void require_lattice(const SpectralField& f, const DyadicPartition& partition) {
  if (!(f.lattice() == partition.lattice())) throw ValidationError("littlewood_paley: lattice mismatch");
}

}  // namespace

SpectralField block(const SpectralField& f, int j, const DyadicPartition& partition) {
  require_lattice(f, partition);
  return apply_multiplier(f, partition.multiplier(j));
}

SpectralField low_pass(const SpectralField& f, int j, const DyadicPartition& partition) {
  require_lattice(f, partition);
  return apply_multiplier(f, partition.low_pass(j));
}

std::vector<double> block_sups(const SpectralField& f, const DyadicPartition& partition, Exec exec) {
  require_lattice(f, partition);
  const int nb = partition.block_count();
  std::vector<double> sups(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int b = 0; b < nb; ++b) sups[static_cast<std::size_t>(b)] = sup_norm(block(f, b - 1, partition));
  return sups;
}

double besov_block_weight(int j, double alpha, double kappa) {
  const double w = std::exp2(j * alpha);
  if (kappa == 0.0) return w;
  return w * (1.0 + std::pow(std::abs(static_cast<double>(j)), kappa));
}

double besov_from_blocks(const std::vector<double>& sups, double alpha, double kappa) {
  double best = 0.0;
  for (std::size_t b = 0; b < sups.size(); ++b)
    best = std::max(best, besov_block_weight(static_cast<int>(b) - 1, alpha, kappa) * sups[b]);
  return best;
}

double besov_norm(const SpectralField& f, const BesovParams& params, const DyadicPartition& partition) {
  if (!std::isinf(params.p) || !std::isinf(params.q))
    throw ValidationError("besov_norm: only (p, q) = (inf, inf) is supported");
  if (params.kappa < 0) throw ValidationError("besov_norm: kappa must be >= 0");
  if (!f.hermitian()) throw ValidationError("besov_norm: field must be hermitian");
  return besov_from_blocks(block_sups(f, partition), params.alpha, params.kappa);
}

namespace {

void require_pair(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition) {
  require_lattice(f, partition);
  require_lattice(g, partition);
}

SpectralField sum_of_products(const std::vector<SpectralField>& a, const std::vector<SpectralField>& b,
                              const SpectralField& like) {
  if (a.empty()) return SpectralField(like.lattice(), like.hermitian());
  return product_sum(a, b);
}

}  // namespace

SpectralField paraproduct_lt(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition) {
  require_pair(f, g, partition);
  std::vector<SpectralField> a, b;
  for (int n = 1; n <= partition.j_max(); ++n) {
    a.push_back(low_pass(f, n - 2, partition));
    b.push_back(block(g, n, partition));
  }
  return sum_of_products(a, b, f);
}

SpectralField paraproduct_gt(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition) {
  return paraproduct_lt(g, f, partition);
}

SpectralField paraproduct_res(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition) {
  require_pair(f, g, partition);
  const auto& lat = partition.lattice();
  std::vector<SpectralField> a, b;
  for (int n = -1; n <= partition.j_max(); ++n) {
    std::vector<double> near(lat.size(), 0.0);
    for (int m = std::max(-1, n - 1); m <= std::min(partition.j_max(), n + 1); ++m) {
      const auto& w = partition.multiplier(m);
      for (std::size_t i = 0; i < near.size(); ++i) near[i] += w[i];
    }
    a.push_back(apply_multiplier(f, near));
    b.push_back(block(g, n, partition));
  }
  return sum_of_products(a, b, f);
}

SpectralField paraproduct_ge(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition) {
  require_pair(f, g, partition);
  // f >= g = sum_m Delta_m f . S_{m+1} g
  std::vector<SpectralField> a, b;
  for (int m = -1; m <= partition.j_max(); ++m) {
    a.push_back(block(f, m, partition));
    b.push_back(low_pass(g, m + 1, partition));
  }
  return sum_of_products(a, b, f);
}

double tamed_log(double t) {
  if (!(t > 0)) throw ValidationError("tamed_log: t must be positive");
  return std::log(std::max(1.0 / t, 2.0));
}

namespace {

double time_weight(double t, const WeightedNormParams& p) {
  if (t == 0.0) return 1.0;
  double w = std::pow(t, p.beta);
  if (p.nu != 0.0) w *= std::pow(tamed_log(t), p.nu);
  return w;
}

bool node_used(double t, const WeightedNormParams& p, double t_floor) {
  if (t > p.T * (1 + 1e-12)) return false;
  if (t == 0.0) return p.beta == 0.0 && p.nu == 0.0 && t_floor <= 0.0;
  return t >= t_floor;
}

std::vector<double> node_norms(const Trajectory& traj, const WeightedNormParams& params,
                               const DyadicPartition& partition, const std::vector<std::size_t>& nodes) {
  std::vector<double> out(nodes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto sups = block_sups(traj.values[nodes[n]], partition, Exec::serial);
    out[n] = besov_from_blocks(sups, params.alpha, params.kappa);
  }
  return out;
}

}  // namespace

WeightedNormReport weighted_norm(const Trajectory& traj, const WeightedNormParams& params,
                                 const DyadicPartition& partition, double t_floor) {
  if (!(params.T > 0)) throw ValidationError("weighted_norm: T must be positive");
  require_lattice(traj.values.front(), partition);
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < traj.grid.size(); ++i)
    if (node_used(traj.grid[i], params, t_floor)) nodes.push_back(i);
  if (nodes.empty()) throw ValidationError("weighted_norm: empty grid");
  const auto norms = node_norms(traj, params, partition, nodes);
  WeightedNormReport rep;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const double t = traj.grid[nodes[n]];
    const double v = time_weight(t, params) * norms[n];
    rep.times.push_back(t);
    rep.weighted.push_back(v);
    if (v > rep.value || n == 0) {
      rep.value = v;
      rep.argmax_t = t;
    }
  }
  return rep;
}

VanishingReport vanishing_check(const Trajectory& traj, const WeightedNormParams& params,
                                const DyadicPartition& partition, const VanishingOptions& options) {
  if (!traj.grid.graded_toward_zero()) throw ValidationError("vanishing_check: grid not graded toward 0");
  const double floor = std::max(options.t_floor, traj.grid.t_first());
  WeightedNormParams p = params;
  p.T = std::min(params.T, traj.grid.T());
  const auto full = weighted_norm(traj, p, partition, floor);
  VanishingReport rep;
  for (double hi = p.T; hi >= 2.0 * floor; hi /= 2.0) {
    double v = -1.0;
    for (std::size_t n = 0; n < full.times.size(); ++n)
      if (full.times[n] <= hi * (1 + 1e-12)) v = std::max(v, full.weighted[n]);
    if (v < 0) break;
    rep.window_ends.push_back(hi);
    rep.window_values.push_back(v);
  }
  if (rep.window_values.size() < 3) throw NumericalError("vanishing_check: fewer than three resolved windows");
  const std::size_t n = rep.window_values.size();
  rep.limit_estimate = rep.window_values.back();
  const double a = rep.window_values[n - 3], b = rep.window_values[n - 2], c = rep.window_values[n - 1];
  const bool zero = c <= options.abs_zero;
  const double keep = 1.0 - options.rel_decrease;
  rep.vanishes = zero || (b <= keep * a && c <= keep * b);
  return rep;
}

std::vector<NormRow> norm_rows(const Trajectory& traj, const WeightedNormParams& params,
                               const DyadicPartition& partition) {
  std::vector<NormRow> rows;
  for (std::size_t i = 0; i < traj.grid.size(); ++i) {
    const double t = traj.grid[i];
    if (t > params.T * (1 + 1e-12)) break;
    const auto sups = block_sups(traj.values[i], partition);
    const double norm = besov_from_blocks(sups, params.alpha, params.kappa);
    for (std::size_t b = 0; b < sups.size(); ++b) rows.push_back({t, static_cast<int>(b) - 1, sups[b], norm});
  }
  return rows;
}

std::string norm_rows_csv(const std::vector<NormRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "t,j,block_sup,norm\n";
  for (const auto& r : rows) os << r.t << ',' << r.j << ',' << r.block_sup << ',' << r.norm << '\n';
  return os.str();
}

}  // namespace roughstart
