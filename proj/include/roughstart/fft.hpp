#pragma once

#include <string>
#include <vector>

#include "roughstart/common.hpp"

namespace roughstart::fft {

/// Smallest 2^a 3^b 5^c that is >= n.
int good_size(int n);

/// In-place unnormalized DFT over an M^d grid (row-major, axis 0 fastest).
/// sign = +1 evaluates sum_k c_k exp(+i k x_j); sign = -1 is the adjoint.
/// Plans are cached per (d, M, sign) and the call is thread-safe.
void transform(std::vector<Complex>& data, int d, int M, int sign);

/// Version string of the linked FFT library.
std::string library_version();

/// Index of wave number k (|k| < M/2) on a length-M periodic axis.
inline int wrap(int k, int M) { return k >= 0 ? k : k + M; }

}  // namespace roughstart::fft
