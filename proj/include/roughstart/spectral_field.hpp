#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "roughstart/common.hpp"

namespace roughstart {

/// Wave vector on the lattice. For d = 1 the second component is 0.
using WaveVector = std::array<int, 2>;

/// Truncated Fourier lattice {k in Z^d : |k|_inf <= N} on the d-torus.
class TorusLattice {
 public:
  TorusLattice(int d, int N);

  int dim() const { return d_; }
  int radius() const { return N_; }
  int side() const { return 2 * N_ + 1; }
  /// (2N+1)^d
  std::size_t size() const { return size_; }

  std::size_t index(const WaveVector& k) const;
  WaveVector wave(std::size_t idx) const;
  bool contains(const WaveVector& k) const;

  /// Euclidean |k|.
  double norm(std::size_t idx) const;
  double norm(const WaveVector& k) const;
  std::size_t negate(std::size_t idx) const { return size_ - 1 - idx; }
  std::size_t origin() const { return (size_ - 1) / 2; }

  bool operator==(const TorusLattice&) const = default;

 private:
  int d_;
  int N_;
  std::size_t size_;
};

/// Fourier coefficients u_k of u = sum_k u_k e_k, e_k(x) = exp(i k.x).
///
/// Coefficients are stored for the full lattice even for real fields; the
/// `hermitian` flag records that coeffs(-k) = conj(coeffs(k)) and is what
/// validation keys on. `mean_zero` records coeffs(0) == 0 exactly.
class SpectralField {
 public:
  explicit SpectralField(const TorusLattice& lattice, bool hermitian = true);
  SpectralField(const TorusLattice& lattice, std::vector<Complex> coeffs, bool hermitian);

  static SpectralField zeros(const TorusLattice& lattice) { return SpectralField(lattice); }
  /// e_0 scaled by c.
  static SpectralField constant(const TorusLattice& lattice, double c);
  /// amplitude * (e_k + e_{-k}) when hermitian (2 a cos k.x), else amplitude * e_k.
  static SpectralField cosine(const TorusLattice& lattice, const WaveVector& k, double amplitude = 1.0);
  /// a sin(k.x) = a (e_k - e_{-k}) / (2i).
  static SpectralField sine(const TorusLattice& lattice, const WaveVector& k, double amplitude = 1.0);
  /// Single complex exponential (non-hermitian).
  static SpectralField exponential(const TorusLattice& lattice, const WaveVector& k, Complex amplitude = 1.0);

  const TorusLattice& lattice() const { return lattice_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex operator[](const WaveVector& k) const { return coeffs_[lattice_.index(k)]; }
  Complex& operator[](const WaveVector& k) { return coeffs_[lattice_.index(k)]; }

  bool hermitian() const { return hermitian_; }
  bool mean_zero() const { return mean_zero_; }
  void set_mean_zero(bool flag);

  /// max_k |coeffs(-k) - conj(coeffs(k))|
  double hermitian_defect() const;
  /// Averages each coefficient with the conjugate of its mirror.
  void symmetrize();

  /// max_k |coeffs(k)|
  double max_abs() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  /// Adds s * other.
  SpectralField& axpy(double s, const SpectralField& other);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  void require_compatible(const SpectralField& other) const;

  TorusLattice lattice_;
  std::vector<Complex> coeffs_;
  bool hermitian_;
  bool mean_zero_ = false;
};

/// result_k = sum_{m+n=k} f_m g_n, truncated to the lattice. Evaluated on a
/// zero-padded physical grid so no aliasing reaches |k|_inf <= N.
SpectralField convolve(const SpectralField& f, const SpectralField& g);

/// Direct O(#lattice^2) double sum; serial reference for convolve.
SpectralField convolve_direct(const SpectralField& f, const SpectralField& g);

/// sum_i f_i * g_i evaluated with one forward transform.
SpectralField product_sum(std::span<const SpectralField> f, std::span<const SpectralField> g);

/// coeffs(k) *= |k|^order; the zero mode is kept for order = 0 and
/// annihilated for order > 0.
SpectralField derivative_multiplier(const SpectralField& f, double order);

/// Partial derivative along axis (0 <= axis < d): coeffs(k) *= i k_axis.
SpectralField partial(const SpectralField& f, int axis);

/// coeffs(k) *= multiplier[k] for a real lattice multiplier. The caller
/// guarantees multiplier(-k) = multiplier(k) when f is hermitian.
SpectralField apply_multiplier(const SpectralField& f, std::span<const double> multiplier);

/// Zeroes coeffs(0) and sets the mean_zero flag.
SpectralField project_mean_zero(const SpectralField& f);

/// Max of |f(x)| over a physical grid oversampled by `oversampling` times
/// the Nyquist count, followed by Newton refinement of the best local
/// maxima. The returned value is attained by f, hence a lower bound on the
/// true sup; the refinement brings it within ~1e-10 relative of it.
double sup_norm(const SpectralField& f, int oversampling = 4);

/// Brute-force evaluation f(x) at a point (x in [0, 2 pi)^d).
Complex evaluate(const SpectralField& f, std::span<const double> x);

/// Physical samples on an M^d grid x_j = 2 pi j / M (row-major, axis 0 fastest).
std::vector<Complex> to_physical(const SpectralField& f, int M);

nlohmann::json to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);

}  // namespace roughstart
