#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

namespace roughstart {

using Complex = std::complex<double>;

/// Exact exponent arithmetic for scaling and regularity bookkeeping.
using Rational = boost::rational<long long>;

/// Kernel execution policy. Serial variants are the reference
/// implementations; parallel variants must reproduce them bit-for-bit.
enum class Exec { serial, parallel };

/// Raised when a caller violates an operation's precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver a result
/// (non-contraction, unresolved window, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Best rational approximation with denominator <= max_den (continued
/// fractions). `exact` is set when the approximation reproduces x to
/// within one ulp-scale tolerance.
Rational rational_from_double(double x, long long max_den = 1'000'000,
                              bool* exact = nullptr);

/// Parses "p/q", an integer, or a decimal literal.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

inline Rational positive_part(const Rational& r) { return r > 0 ? r : Rational(0); }

}  // namespace roughstart
