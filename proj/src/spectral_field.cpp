#include "roughstart/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roughstart/fft.hpp"

namespace roughstart {

TorusLattice::TorusLattice(int d, int N) : d_(d), N_(N) {
  if (d != 1 && d != 2) throw ValidationError("TorusLattice: d must be 1 or 2");
  if (N < 2) throw ValidationError("TorusLattice: N must be >= 2");
  const std::size_t s = static_cast<std::size_t>(2 * N + 1);
  size_ = d == 1 ? s : s * s;
}

std::size_t TorusLattice::index(const WaveVector& k) const {
  if (!contains(k)) throw ValidationError("TorusLattice: wave vector outside lattice");
  const std::size_t s = static_cast<std::size_t>(side());
  if (d_ == 1) return static_cast<std::size_t>(k[0] + N_);
  return static_cast<std::size_t>(k[1] + N_) * s + static_cast<std::size_t>(k[0] + N_);
}

WaveVector TorusLattice::wave(std::size_t idx) const {
  const int s = side();
  if (d_ == 1) return {static_cast<int>(idx) - N_, 0};
  return {static_cast<int>(idx % s) - N_, static_cast<int>(idx / s) - N_};
}

bool TorusLattice::contains(const WaveVector& k) const {
  if (std::abs(k[0]) > N_) return false;
  if (d_ == 1) return k[1] == 0;
  return std::abs(k[1]) <= N_;
}

double TorusLattice::norm(const WaveVector& k) const {
  return std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
}

double TorusLattice::norm(std::size_t idx) const { return norm(wave(idx)); }

SpectralField::SpectralField(const TorusLattice& lattice, bool hermitian)
    : lattice_(lattice), coeffs_(lattice.size(), Complex(0.0, 0.0)), hermitian_(hermitian) {}

SpectralField::SpectralField(const TorusLattice& lattice, std::vector<Complex> coeffs, bool hermitian)
    : lattice_(lattice), coeffs_(std::move(coeffs)), hermitian_(hermitian) {
  if (coeffs_.size() != lattice_.size())
    throw ValidationError("SpectralField: coefficient count does not match lattice");
  if (hermitian_ && hermitian_defect() > 1e-12 * (1.0 + max_abs()))
    throw ValidationError("SpectralField: coefficients violate hermitian symmetry");
}

SpectralField SpectralField::constant(const TorusLattice& lattice, double c) {
  SpectralField f(lattice);
  f.coeffs_[lattice.origin()] = c;
  return f;
}

SpectralField SpectralField::cosine(const TorusLattice& lattice, const WaveVector& k, double amplitude) {
  SpectralField f(lattice);
  const WaveVector mk{-k[0], -k[1]};
  f[k] += amplitude;
  f[mk] += amplitude;
  return f;
}

SpectralField SpectralField::sine(const TorusLattice& lattice, const WaveVector& k, double amplitude) {
  SpectralField f(lattice);
  const WaveVector mk{-k[0], -k[1]};
  f[k] += Complex(0.0, -0.5 * amplitude);
  f[mk] += Complex(0.0, 0.5 * amplitude);
  return f;
}

SpectralField SpectralField::exponential(const TorusLattice& lattice, const WaveVector& k, Complex amplitude) {
  SpectralField f(lattice, false);
  f[k] = amplitude;
  return f;
}

void SpectralField::set_mean_zero(bool flag) {
  if (flag && coeffs_[lattice_.origin()] != Complex(0.0, 0.0))
    throw ValidationError("SpectralField: mean_zero flag requires coeffs(0) == 0");
  mean_zero_ = flag;
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  const std::size_t n = coeffs_.size();
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(coeffs_[lattice_.negate(i)] - std::conj(coeffs_[i])));
  return worst;
}

void SpectralField::symmetrize() {
  const std::size_t n = coeffs_.size();
  for (std::size_t i = 0; i <= n / 2; ++i) {
    const std::size_t j = lattice_.negate(i);
    const Complex avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[j]));
    coeffs_[i] = avg;
    coeffs_[j] = std::conj(avg);
  }
  hermitian_ = true;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

void SpectralField::require_compatible(const SpectralField& other) const {
  if (!(lattice_ == other.lattice_)) throw ValidationError("SpectralField: lattice mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  return axpy(1.0, other);
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  return axpy(-1.0, other);
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  hermitian_ = hermitian_ && other.hermitian_;
  mean_zero_ = mean_zero_ && other.mean_zero_;
  return *this;
}

namespace {

int padded_grid(int N) { return fft::good_size(3 * N + 1); }

std::size_t grid_index(const WaveVector& k, int d, int M) {
  if (d == 1) return static_cast<std::size_t>(fft::wrap(k[0], M));
  return static_cast<std::size_t>(fft::wrap(k[1], M)) * M + static_cast<std::size_t>(fft::wrap(k[0], M));
}

std::vector<Complex> spread(const SpectralField& f, int M) {
  const auto& lat = f.lattice();
  const int d = lat.dim();
  std::vector<Complex> grid(d == 1 ? static_cast<std::size_t>(M) : static_cast<std::size_t>(M) * M);
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == Complex(0.0, 0.0)) continue;
    WaveVector k = lat.wave(i);
    k[0] = ((k[0] % M) + M) % M;
    if (d == 2) k[1] = ((k[1] % M) + M) % M;
    grid[grid_index(k, d, M)] += c[i];
  }
  return grid;
}

SpectralField gather(std::vector<Complex>& grid, const TorusLattice& lat, int M, bool hermitian) {
  fft::transform(grid, lat.dim(), M, -1);
  const double scale = 1.0 / static_cast<double>(grid.size());
  SpectralField out(lat, false);
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = scale * grid[grid_index(lat.wave(i), lat.dim(), M)];
  if (hermitian) out.symmetrize();
  return out;
}

void require_product_pair(const SpectralField& f, const SpectralField& g) {
  if (!(f.lattice() == g.lattice())) throw ValidationError("convolve: lattice mismatch");
  if (f.hermitian() != g.hermitian())
    throw ValidationError("convolve: both fields must be hermitian or both non-hermitian");
}

}  // namespace

std::vector<Complex> to_physical(const SpectralField& f, int M) {
  if (M < 1) throw ValidationError("to_physical: M must be positive");
  auto grid = spread(f, M);
  fft::transform(grid, f.lattice().dim(), M, +1);
  return grid;
}

SpectralField convolve(const SpectralField& f, const SpectralField& g) {
  require_product_pair(f, g);
  const int M = padded_grid(f.lattice().radius());
  auto pf = to_physical(f, M);
  const auto pg = to_physical(g, M);
  for (std::size_t i = 0; i < pf.size(); ++i) pf[i] *= pg[i];
  return gather(pf, f.lattice(), M, f.hermitian());
}

SpectralField convolve_direct(const SpectralField& f, const SpectralField& g) {
  require_product_pair(f, g);
  const auto& lat = f.lattice();
  SpectralField out(lat, f.hermitian());
  auto o = out.coeffs();
  const auto fc = f.coeffs();
  const auto gc = g.coeffs();
  for (std::size_t im = 0; im < fc.size(); ++im) {
    if (fc[im] == Complex(0.0, 0.0)) continue;
    const WaveVector m = lat.wave(im);
    for (std::size_t in = 0; in < gc.size(); ++in) {
      const WaveVector n = lat.wave(in);
      const WaveVector k{m[0] + n[0], m[1] + n[1]};
      if (!lat.contains(k)) continue;
      o[lat.index(k)] += fc[im] * gc[in];
    }
  }
  return out;
}

SpectralField product_sum(std::span<const SpectralField> f, std::span<const SpectralField> g) {
  if (f.size() != g.size() || f.empty()) throw ValidationError("product_sum: need equally many, nonzero factors");
  const auto& lat = f[0].lattice();
  const int M = padded_grid(lat.radius());
  std::vector<Complex> acc;
  bool herm = true;
  for (std::size_t i = 0; i < f.size(); ++i) {
    require_product_pair(f[i], g[i]);
    if (!(f[i].lattice() == lat)) throw ValidationError("product_sum: lattice mismatch");
    herm = herm && f[i].hermitian();
    auto pf = to_physical(f[i], M);
    const auto pg = to_physical(g[i], M);
    if (acc.empty()) acc.assign(pf.size(), Complex(0.0, 0.0));
    for (std::size_t x = 0; x < pf.size(); ++x) acc[x] += pf[x] * pg[x];
  }
  return gather(acc, lat, M, herm);
}

SpectralField apply_multiplier(const SpectralField& f, std::span<const double> multiplier) {
  if (multiplier.size() != f.lattice().size()) throw ValidationError("apply_multiplier: size mismatch");
  SpectralField out(f.lattice(), f.hermitian());
  auto o = out.coeffs();
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) o[i] = multiplier[i] * c[i];
  const bool mz = f.mean_zero() || multiplier[f.lattice().origin()] == 0.0;
  if (mz) o[f.lattice().origin()] = 0.0;
  out.set_mean_zero(mz);
  return out;
}

SpectralField derivative_multiplier(const SpectralField& f, double order) {
  if (order < 0) throw ValidationError("derivative_multiplier: order must be >= 0");
  const auto& lat = f.lattice();
  std::vector<double> m(lat.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double r = lat.norm(i);
    m[i] = order == 0.0 ? 1.0 : (r == 0.0 ? 0.0 : std::pow(r, order));
  }
  return apply_multiplier(f, m);
}

SpectralField partial(const SpectralField& f, int axis) {
  const auto& lat = f.lattice();
  if (axis < 0 || axis >= lat.dim()) throw ValidationError("partial: axis out of range");
  SpectralField out(lat, f.hermitian());
  auto o = out.coeffs();
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) o[i] = Complex(0.0, lat.wave(i)[axis]) * c[i];
  out.set_mean_zero(true);
  return out;
}

SpectralField project_mean_zero(const SpectralField& f) {
  SpectralField out = f;
  out.coeffs()[f.lattice().origin()] = 0.0;
  out.set_mean_zero(true);
  return out;
}

Complex evaluate(const SpectralField& f, std::span<const double> x) {
  const auto& lat = f.lattice();
  if (static_cast<int>(x.size()) != lat.dim()) throw ValidationError("evaluate: point dimension mismatch");
  const auto c = f.coeffs();
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == Complex(0.0, 0.0)) continue;
    const WaveVector k = lat.wave(i);
    double phase = k[0] * x[0];
    if (lat.dim() == 2) phase += k[1] * x[1];
    s += c[i] * Complex(std::cos(phase), std::sin(phase));
  }
  return s;
}

namespace {

struct Taylor {
  double f = 0;
  double g[2] = {0, 0};
  double h[2][2] = {{0, 0}, {0, 0}};
};

// e^{i k x} for k = -N..N, re-anchored every 32 steps.
void phase_table(int N, double x, std::vector<Complex>& out) {
  out.resize(static_cast<std::size_t>(2 * N + 1));
  const Complex w(std::cos(x), std::sin(x));
  Complex z;
  for (int k = -N; k <= N; ++k) {
    if ((k + N) % 32 == 0)
      z = std::polar(1.0, k * x);
    else
      z *= w;
    out[static_cast<std::size_t>(k + N)] = z;
  }
}

// Value, gradient and Hessian of the real field at x.
Taylor local_expansion(const TorusLattice& lat, const std::vector<std::size_t>& support,
                       std::span<const Complex> c, const double* x) {
  Taylor t;
  const int d = lat.dim();
  const int N = lat.radius();
  thread_local std::vector<Complex> e0, e1;
  phase_table(N, x[0], e0);
  if (d == 2) phase_table(N, x[1], e1);
  for (std::size_t i : support) {
    const WaveVector k = lat.wave(i);
    Complex e = e0[static_cast<std::size_t>(k[0] + N)];
    if (d == 2) e *= e1[static_cast<std::size_t>(k[1] + N)];
    const Complex v = c[i] * e;
    t.f += v.real();
    for (int a = 0; a < d; ++a) {
      t.g[a] += -k[a] * v.imag();
      for (int b = 0; b < d; ++b) t.h[a][b] += -static_cast<double>(k[a]) * k[b] * v.real();
    }
  }
  return t;
}

}  // namespace

double sup_norm(const SpectralField& f, int oversampling) {
  if (!f.hermitian()) throw ValidationError("sup_norm: field must be hermitian");
  if (oversampling < 4) throw ValidationError("sup_norm: oversampling must be >= 4");
  const auto& lat = f.lattice();
  const int d = lat.dim();
  const auto c = f.coeffs();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != Complex(0.0, 0.0)) support.push_back(i);
  if (support.empty()) return 0.0;
  if (support.size() == 1) return std::abs(c[support[0]]);

  const int M = fft::good_size(oversampling * lat.side());
  const auto grid = to_physical(f, M);
  const double h = 2.0 * std::numbers::pi / M;

  auto val = [&](long i0, long i1) {
    i0 = ((i0 % M) + M) % M;
    i1 = ((i1 % M) + M) % M;
    return std::abs(grid[static_cast<std::size_t>(i1 * (d == 2 ? M : 0) + i0)].real());
  };

  // local maxima of |f| on the grid
  struct Cand {
    double v;
    long i0, i1;
  };
  std::vector<Cand> cands;
  double best = 0.0;
  const long n1 = d == 2 ? M : 1;
  for (long i1 = 0; i1 < n1; ++i1) {
    for (long i0 = 0; i0 < M; ++i0) {
      const double v = val(i0, i1);
      best = std::max(best, v);
      bool is_max = v >= val(i0 - 1, i1) && v >= val(i0 + 1, i1);
      if (d == 2) is_max = is_max && v >= val(i0, i1 - 1) && v >= val(i0, i1 + 1);
      if (is_max) cands.push_back({v, i0, i1});
    }
  }
  const std::size_t keep = std::min<std::size_t>(cands.size(), 6);
  std::partial_sort(cands.begin(), cands.begin() + keep, cands.end(),
                    [](const Cand& a, const Cand& b) { return a.v > b.v; });

  for (std::size_t ci = 0; ci < keep; ++ci) {
    const double x0[2] = {cands[ci].i0 * h, cands[ci].i1 * h};
    double x[2] = {x0[0], x0[1]};
    for (int it = 0; it < 10; ++it) {
      const Taylor t = local_expansion(lat, support, c, x);
      double step[2] = {0, 0};
      if (d == 1) {
        if (t.h[0][0] == 0.0) break;
        step[0] = -t.g[0] / t.h[0][0];
      } else {
        const double det = t.h[0][0] * t.h[1][1] - t.h[0][1] * t.h[1][0];
        if (det == 0.0) break;
        step[0] = -(t.h[1][1] * t.g[0] - t.h[0][1] * t.g[1]) / det;
        step[1] = -(-t.h[1][0] * t.g[0] + t.h[0][0] * t.g[1]) / det;
      }
      double xn[2] = {x[0] + step[0], x[1] + step[1]};
      bool inside = true;
      for (int a = 0; a < d; ++a) inside = inside && std::abs(xn[a] - x0[a]) <= 1.5 * h;
      if (!inside) break;
      x[0] = xn[0];
      x[1] = xn[1];
      if (std::abs(step[0]) + std::abs(step[1]) < 1e-14) break;
    }
    best = std::max(best, std::abs(local_expansion(lat, support, c, x).f));
  }
  return best;
}

nlohmann::json to_json(const SpectralField& f) {
  const auto& lat = f.lattice();
  nlohmann::json j;
  j["d"] = lat.dim();
  j["N"] = lat.radius();
  j["hermitian"] = f.hermitian();
  j["mean_zero"] = f.mean_zero();
  nlohmann::json arr = nlohmann::json::array();
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == Complex(0.0, 0.0)) continue;
    const WaveVector k = lat.wave(i);
    nlohmann::json kv = lat.dim() == 1 ? nlohmann::json::array({k[0]}) : nlohmann::json::array({k[0], k[1]});
    arr.push_back(nlohmann::json::array({kv, c[i].real(), c[i].imag()}));
  }
  j["coeffs"] = std::move(arr);
  return j;
}

SpectralField field_from_json(const nlohmann::json& j) {
  try {
    const TorusLattice lat(j.at("d").get<int>(), j.at("N").get<int>());
    std::vector<Complex> coeffs(lat.size());
    for (const auto& e : j.at("coeffs")) {
      const auto& kv = e.at(0);
      if (static_cast<int>(kv.size()) != lat.dim()) throw ValidationError("field_from_json: wave vector dimension");
      WaveVector k{kv.at(0).get<int>(), lat.dim() == 2 ? kv.at(1).get<int>() : 0};
      coeffs[lat.index(k)] = Complex(e.at(1).get<double>(), e.at(2).get<double>());
    }
    SpectralField f(lat, std::move(coeffs), j.value("hermitian", true));
    f.set_mean_zero(j.value("mean_zero", false));
    return f;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("field_from_json: ") + ex.what());
  }
}

}  // namespace roughstart
