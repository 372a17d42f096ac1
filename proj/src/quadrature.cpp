#include "roughstart/quadrature.hpp"

#include <cmath>

namespace roughstart {

double phi1(double z) {
  if (std::abs(z) < 0.1) {
    double term = 1.0, sum = 1.0;
    for (int n = 2; n < 20; ++n) {
      term *= z / n;
      sum += term;
    }
    return sum;
  }
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.1) {
    // sum_{n >= 0} z^n / (n + 2)!
    double term = 0.5, sum = 0.5;
    for (int n = 1; n < 20; ++n) {
      term *= z / (n + 2);
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

Trajectory duhamel(const LinearOperator& op, const Trajectory& g, Exec exec) {
  if (!(g.lattice() == op.lattice())) throw ValidationError("duhamel: lattice mismatch");
  const auto t = g.grid.times();
  const std::size_t nt = t.size();
  const auto& lam = op.eigenvalues();
  const auto nk = static_cast<long>(lam.size());
  bool herm = true;
  for (const auto& f : g.values) herm = herm && f.hermitian();
  std::vector<SpectralField> out(nt, SpectralField(op.lattice(), herm));
  std::vector<Complex*> dst(nt);
  std::vector<const Complex*> src(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    dst[i] = out[i].coeffs().data();
    src[i] = g.values[i].coeffs().data();
  }
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long k = 0; k < nk; ++k) {
    const double l = lam[static_cast<std::size_t>(k)];
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      const double h = t[i + 1] - t[i];
      const double z = h * l;
      const double p1 = phi1(z), p2 = phi2(z);
      acc = std::exp(z) * acc + h * ((p1 - p2) * src[i][k] + p2 * src[i + 1][k]);
      dst[i + 1][k] = acc;
    }
  }
  bool mz = true;
  for (const auto& f : g.values) mz = mz && f.mean_zero();
  if (mz)
    for (auto& f : out) f.set_mean_zero(true);
  return Trajectory(g.grid, std::move(out));
}

}  // namespace roughstart
