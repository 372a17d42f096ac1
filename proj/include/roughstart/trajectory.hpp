#pragma once

#include <span>
#include <vector>

#include "roughstart/spectral_field.hpp"

namespace roughstart {

/// Time nodes 0 = t_0 < t_1 < ... < t_n = T.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  /// 0 followed by geometric nodes from t_min to T with at least
  /// `per_decade` nodes per decade (the last node is exactly T).
  static TimeGrid graded(double T, double t_min, int per_decade = 60);
  /// n uniform steps on [0, T].
  static TimeGrid uniform(double T, int n);

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  double T() const { return times_.back(); }
  /// Smallest positive node.
  double t_first() const { return times_[1]; }

  /// t_1 <= T/256 and every dyadic window (T 2^{-i-1}, T 2^{-i}] above t_1
  /// holds at least one node.
  bool graded_toward_zero() const;

  /// Nodes with t <= T_new, plus T_new itself if it is not a node.
  TimeGrid truncated(double T_new) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  std::vector<double> times_;
};

/// A field-valued function sampled on a time grid.
struct Trajectory {
  TimeGrid grid;
  std::vector<SpectralField> values;

  Trajectory(TimeGrid g, std::vector<SpectralField> v);
  /// The zero trajectory.
  static Trajectory zeros(const TimeGrid& grid, const TorusLattice& lattice);
  /// Every node holds the same field.
  static Trajectory constant(const TimeGrid& grid, const SpectralField& f);

  std::size_t size() const { return values.size(); }
  const TorusLattice& lattice() const { return values.front().lattice(); }
  const SpectralField& at(std::size_t i) const { return values.at(i); }
  const SpectralField& final() const { return values.back(); }

  Trajectory& operator+=(const Trajectory& other);
  Trajectory& operator-=(const Trajectory& other);
  Trajectory& operator*=(double s);
  Trajectory& axpy(double s, const Trajectory& other);
  friend Trajectory operator+(Trajectory a, const Trajectory& b) { return a += b; }
  friend Trajectory operator-(Trajectory a, const Trajectory& b) { return a -= b; }
  friend Trajectory operator*(double s, Trajectory a) { return a *= s; }

  /// Restriction to the nodes of grid.truncated(T_new); requires T_new to
  /// be a node.
  Trajectory truncated(double T_new) const;
};

}  // namespace roughstart
