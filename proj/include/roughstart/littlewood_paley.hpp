#pragma once

#include <limits>
#include <string>
#include <vector>

#include "roughstart/spectral_field.hpp"
#include "roughstart/trajectory.hpp"

namespace roughstart {

/// Smooth dyadic partition of unity chi + sum_j rho(2^{-j} .) = 1.
///
/// psi(r) is 1 on [0, 3/4], 0 on [4/3, inf) with a C-infinity transition
/// built from s(x) = exp(-1/x). chi = psi, rho(r) = psi(r/2) - psi(r), so
/// supp chi is in {r <= 4/3} and supp rho in {3/4 <= r <= 8/3}.
class DyadicPartition {
 public:
  explicit DyadicPartition(const TorusLattice& lattice);

  static constexpr double inner = 3.0 / 4.0;
  static constexpr double outer = 4.0 / 3.0;

  static double psi(double r);
  static double chi(double r) { return psi(r); }
  static double rho(double r) { return psi(0.5 * r) - psi(r); }
  /// rho_j(r) = rho(2^{-j} r), rho_{-1} = chi.
  static double weight(int j, double r);
  /// Low-pass S_j = sum_{i <= j} rho_i = psi(2^{-j-1} r); S_j = 0 for j < -1.
  static double low_pass_weight(int j, double r);

  const TorusLattice& lattice() const { return lattice_; }
  /// Largest block index; S_{j_max} = 1 on every lattice point.
  int j_max() const { return j_max_; }
  int block_count() const { return j_max_ + 2; }

  /// rho_j evaluated on the lattice, cached.
  const std::vector<double>& multiplier(int j) const;
  /// S_j evaluated on the lattice, cached; all-zero for j < -1.
  const std::vector<double>& low_pass(int j) const;

 private:
  TorusLattice lattice_;
  int j_max_;
  std::vector<std::vector<double>> blocks_;
  std::vector<std::vector<double>> lows_;
  std::vector<double> zero_;
};

/// Delta_j f.
SpectralField block(const SpectralField& f, int j, const DyadicPartition& partition);
/// S_j f = sum_{i <= j} Delta_i f.
SpectralField low_pass(const SpectralField& f, int j, const DyadicPartition& partition);

/// ||Delta_j f||_inf for j = -1 .. j_max (index j+1).
std::vector<double> block_sups(const SpectralField& f, const DyadicPartition& partition,
                               Exec exec = Exec::parallel);

struct BesovParams {
  double alpha = 0.0;
  double p = std::numeric_limits<double>::infinity();
  double q = std::numeric_limits<double>::infinity();
  /// Log-correction exponent; 0 gives plain C^alpha.
  double kappa = 0.0;
};

/// Weight of block j in the C^alpha_kappa norm: 2^{j alpha} times
/// (1 + |j|^kappa) when kappa > 0, times 1 when kappa = 0.
double besov_block_weight(int j, double alpha, double kappa);

/// sup_j w_j ||Delta_j f||_inf from precomputed block sups.
double besov_from_blocks(const std::vector<double>& sups, double alpha, double kappa);

/// C^alpha_kappa = B^alpha_{inf,inf} norm with log weight.
double besov_norm(const SpectralField& f, const BesovParams& params, const DyadicPartition& partition);

/// f < g = sum_n S_{n-2} f . Delta_n g
SpectralField paraproduct_lt(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition);
/// f > g = g < f
SpectralField paraproduct_gt(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition);
/// f o g = sum_{|m-n| <= 1} Delta_m f . Delta_n g
SpectralField paraproduct_res(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition);
/// f >= g = f > g + f o g
SpectralField paraproduct_ge(const SpectralField& f, const SpectralField& g, const DyadicPartition& partition);

/// Direct double block sum over the index set keep(m, n); serial
/// reference for the paraproducts.
template <class Keep>
SpectralField paraproduct_direct(const SpectralField& f, const SpectralField& g,
                                 const DyadicPartition& partition, Keep keep) {
  SpectralField out(f.lattice(), f.hermitian() && g.hermitian());
  for (int m = -1; m <= partition.j_max(); ++m) {
    const SpectralField fm = block(f, m, partition);
    for (int n = -1; n <= partition.j_max(); ++n) {
      if (!keep(m, n)) continue;
      out += convolve_direct(fm, block(g, n, partition));
    }
  }
  return out;
}

/// tamed log l(t) = log(max(1/t, 2)).
double tamed_log(double t);

struct WeightedNormParams {
  double alpha = 0.0;
  double beta = 0.0;
  double T = 1.0;
  double kappa = 0.0;
  double nu = 0.0;
};

struct WeightedNormReport {
  double value = 0.0;
  double argmax_t = 0.0;
  /// Nodes entering the supremum and the weighted value at each.
  std::vector<double> times;
  std::vector<double> weighted;
};

/// max over grid nodes 0 < t <= T (and t = 0 when beta = nu = 0) with
/// t >= t_floor of t^beta l(t)^nu ||traj(t)||_{(alpha, kappa)}.
WeightedNormReport weighted_norm(const Trajectory& traj, const WeightedNormParams& params,
                                 const DyadicPartition& partition, double t_floor = 0.0);

struct VanishingOptions {
  /// Windows stay above this time (resolved scales).
  double t_floor = 0.0;
  /// Minimal relative decrease between consecutive windows.
  double rel_decrease = 1e-3;
  /// Window values below this count as zero.
  double abs_zero = 1e-300;
};

struct VanishingReport {
  double limit_estimate = 0.0;
  bool vanishes = false;
  /// Right endpoints T 2^{-i} and the windowed norms.
  std::vector<double> window_ends;
  std::vector<double> window_values;
};

/// Windowed weighted norms on (t_floor, T 2^{-i}]; vanishes when the last
/// three windows decrease by at least rel_decrease each (or are zero).
VanishingReport vanishing_check(const Trajectory& traj, const WeightedNormParams& params,
                                const DyadicPartition& partition, const VanishingOptions& options = {});

struct NormRow {
  double t;
  int j;
  double block_sup;
  double norm;
};

/// One row per (node, block) with the node's C^alpha_kappa norm.
std::vector<NormRow> norm_rows(const Trajectory& traj, const WeightedNormParams& params,
                               const DyadicPartition& partition);

std::string norm_rows_csv(const std::vector<NormRow>& rows);

}  // namespace roughstart
