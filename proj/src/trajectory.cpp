#include "roughstart/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace roughstart {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw ValidationError("TimeGrid: need at least two nodes");
  if (times_.front() != 0.0) throw ValidationError("TimeGrid: first node must be 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw ValidationError("TimeGrid: nodes must be strictly increasing");
    if (!std::isfinite(times_[i])) throw ValidationError("TimeGrid: non-finite node");
  }
}

TimeGrid TimeGrid::graded(double T, double t_min, int per_decade) {
  if (!(T > 0) || !(t_min > 0) || t_min >= T) throw ValidationError("TimeGrid::graded: need 0 < t_min < T");
  if (per_decade < 1) throw ValidationError("TimeGrid::graded: per_decade must be >= 1");
  const double decades = std::log10(T / t_min);
  const int n = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> t{0.0};
  t.reserve(static_cast<std::size_t>(n) + 2);
  const double ratio = std::pow(T / t_min, 1.0 / n);
  double x = t_min;
  for (int i = 0; i < n; ++i) {
    t.push_back(x);
    x *= ratio;
  }
  t.push_back(T);
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::uniform(double T, int n) {
  if (!(T > 0) || n < 1) throw ValidationError("TimeGrid::uniform: need T > 0 and n >= 1");
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = T * i / n;
  t.back() = T;
  return TimeGrid(std::move(t));
}

bool TimeGrid::graded_toward_zero() const {
  const double T = this->T();
  const double t1 = t_first();
  if (t1 > T / 256.0) return false;
  for (double hi = T; hi / 2 >= t1; hi /= 2) {
    const double lo = hi / 2;
    auto it = std::upper_bound(times_.begin(), times_.end(), lo);
    if (it == times_.end() || *it > hi) return false;
  }
  return true;
}

TimeGrid TimeGrid::truncated(double T_new) const {
  if (!(T_new > 0)) throw ValidationError("TimeGrid::truncated: T must be positive");
  std::vector<double> t;
  for (double x : times_)
    if (x <= T_new) t.push_back(x);
  if (t.back() < T_new) t.push_back(T_new);
  return TimeGrid(std::move(t));
}

Trajectory::Trajectory(TimeGrid g, std::vector<SpectralField> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw ValidationError("Trajectory: value count does not match grid");
  for (const auto& f : values)
    if (!(f.lattice() == values.front().lattice())) throw ValidationError("Trajectory: mixed lattices");
}

Trajectory Trajectory::zeros(const TimeGrid& grid, const TorusLattice& lattice) {
  SpectralField z(lattice);
  z.set_mean_zero(true);
  return Trajectory(grid, std::vector<SpectralField>(grid.size(), z));
}

Trajectory Trajectory::constant(const TimeGrid& grid, const SpectralField& f) {
  return Trajectory(grid, std::vector<SpectralField>(grid.size(), f));
}

Trajectory& Trajectory::operator+=(const Trajectory& other) { return axpy(1.0, other); }
Trajectory& Trajectory::operator-=(const Trajectory& other) { return axpy(-1.0, other); }

Trajectory& Trajectory::operator*=(double s) {
  for (auto& f : values) f *= s;
  return *this;
}

Trajectory& Trajectory::axpy(double s, const Trajectory& other) {
  if (!(grid == other.grid)) throw ValidationError("Trajectory: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i].axpy(s, other.values[i]);
  return *this;
}

Trajectory Trajectory::truncated(double T_new) const {
  TimeGrid g = grid.truncated(T_new);
  if (g.T() != T_new || std::find(grid.times().begin(), grid.times().end(), T_new) == grid.times().end())
    throw ValidationError("Trajectory::truncated: horizon must be a grid node");
  std::vector<SpectralField> v(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(g.size()));
  return Trajectory(std::move(g), std::move(v));
}

}  // namespace roughstart
