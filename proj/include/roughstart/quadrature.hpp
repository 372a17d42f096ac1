#pragma once

#include "roughstart/equations.hpp"
#include "roughstart/trajectory.hpp"

namespace roughstart {

/// (e^z - 1)/z, series near 0.
double phi1(double z);
/// (e^z - 1 - z)/z^2, series near 0.
double phi2(double z);

/// I(t_i) = int_0^{t_i} e^{(t_i - s)A} g(s) ds per mode, with g linear
/// between grid nodes and the exponential kernel integrated exactly.
Trajectory duhamel(const LinearOperator& op, const Trajectory& g, Exec exec = Exec::parallel);

}  // namespace roughstart
