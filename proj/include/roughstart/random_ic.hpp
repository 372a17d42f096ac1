#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughstart/littlewood_paley.hpp"
#include "roughstart/spectral_field.hpp"

namespace roughstart {

/// Law of u0 = sum_k phi_k xi_k e_k with hermitian standard Gaussians xi_k.
struct GaussianICSpec {
  double theta = 0.5;
  /// Log correction (log(1 + |k|))^{-nu - 1/2}, used when log_weights is set.
  double nu = 0.0;
  bool log_weights = false;
  int d = 1;
  int N = 64;
  std::uint64_t seed = 0;
  bool mass_conserving = true;
  /// Overall factor on phi_k.
  double amplitude = 1.0;

  /// phi at |k| = r.
  double weight(double r) const;
  TorusLattice lattice() const { return TorusLattice(d, N); }
};

struct GaussianSample {
  SpectralField field;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
};

/// Draws replica `replica` of the law described by `spec`. Each mode k is keyed by
/// (seed, replica, k), so the field does not depend on thread count and
/// modes common to two lattices coincide.
GaussianSample sample_ic(const GaussianICSpec& spec, std::uint64_t replica = 0);

/// Deterministic comparison field with coeffs(k) = phi_k (no randomness).
SpectralField deterministic_ic(const GaussianICSpec& spec);

struct ProbeRow {
  int j;
  double mean;
  double p05;
  double p50;
  double p95;
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  int j_lo = 0;
  int j_hi = 0;
  /// log2 mean = c + slope j + log_exponent log2 j over [j_lo, j_hi]
  double slope = 0.0;
  double slope_se = 0.0;
  double log_exponent = 0.0;
  double log_exponent_se = 0.0;
  /// log2 mean = c + slope j (no log term)
  double plain_slope = 0.0;
};

struct ProbeOptions {
  int j_lo = 3;
  /// Last fitted block; negative counts from j_max (-1 = j_max - 1).
  int j_hi = -1;
  /// Fit the log2 j term; otherwise log_exponent stays 0.
  bool fit_log = true;
};

/// Per-block sup-norm statistics across M replicas of `sampler`.
ProbeTable block_growth_probe(const std::function<SpectralField(std::uint64_t)>& sampler, std::size_t M,
                              const DyadicPartition& partition, const ProbeOptions& options = {});

/// Gaussian IC version.
ProbeTable block_growth_probe(const GaussianICSpec& spec, std::size_t M, const DyadicPartition& partition,
                              const ProbeOptions& options = {});

std::string probe_csv(const ProbeTable& table);

}  // namespace roughstart
