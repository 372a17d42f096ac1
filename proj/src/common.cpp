#include "roughstart/common.hpp"

#include <cmath>
#include <limits>

namespace roughstart {

Rational rational_from_double(double x, long long max_den, bool* exact) {
  if (!std::isfinite(x)) throw ValidationError("rational_from_double: non-finite value");
  if (max_den < 1) throw ValidationError("rational_from_double: max_den must be >= 1");
  const bool neg = x < 0;
  double r = std::fabs(x);
  // continued-fraction convergents h/k
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = r;
  for (int it = 0; it < 64; ++it) {
    const double a_d = std::floor(frac);
    if (a_d > 9e15) break;
    const long long a = static_cast<long long>(a_d);
    const long long k2 = a * k1 + k0;
    if (k2 > max_den) break;
    const long long h2 = a * h1 + h0;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double rem = frac - a_d;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (k1 == 0) { h1 = static_cast<long long>(std::llround(r)); k1 = 1; }
  Rational q(neg ? -h1 : h1, k1);
  if (exact) {
    const double back = to_double(q);
    *exact = std::fabs(back - x) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x));
  }
  return q;
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ValidationError("parse_rational: empty string");
  auto parse_int = [&](const std::string& t) -> long long {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      throw ValidationError("parse_rational: cannot parse '" + text + "'");
    }
    if (pos != t.size()) throw ValidationError("parse_rational: cannot parse '" + text + "'");
    return v;
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const long long p = parse_int(s.substr(0, slash));
    const long long q = parse_int(s.substr(slash + 1));
    if (q == 0) throw ValidationError("parse_rational: zero denominator");
    return Rational(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip.erase(0, 1);
    if (fp.size() > 17 || ip.size() > 17) throw ValidationError("parse_rational: too many digits in '" + text + "'");
    for (char c : ip + fp)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw ValidationError("parse_rational: cannot parse '" + text + "'");
    long long den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    const long long num = (ip.empty() ? 0 : std::stoll(ip)) * den + (fp.empty() ? 0 : std::stoll(fp));
    return Rational(neg ? -num : num, den);
  }
  return Rational(parse_int(s));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace roughstart
