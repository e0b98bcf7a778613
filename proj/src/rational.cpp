#include "ringlab/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace ringlab {

Rational Rational::make_checked(__int128 n, __int128 d) {
  if (d == 0) throw RangeError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n;
  __int128 g = a, h = d;
  while (h != 0) {
    __int128 r = g % h;
    g = h;
    h = r;
  }
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
    throw RangeError("rational overflow");
  Rational r;
  r.num_ = int64_t(n);
  r.den_ = int64_t(d);
  return r;
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw UsageError("empty rational");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      int64_t n = std::stoll(text.substr(0, slash));
      int64_t d = std::stoll(text.substr(slash + 1));
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    // Decimal: digits after the dot give the power-of-ten denominator.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac_len = text.size() - dot - 1;
    if (frac_len > 18) throw UsageError("decimal too long: " + text);
    int64_t den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(std::stoll(digits), den);
  } catch (const std::invalid_argument&) {
    throw UsageError("cannot parse rational: " + text);
  } catch (const std::out_of_range&) {
    throw UsageError("rational out of range: " + text);
  }
}

Rational Rational::approximate(double x, int64_t max_den) {
  // Stern-Brocot style continued-fraction expansion.
  bool neg = x < 0;
  if (neg) x = -x;
  int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(v);
    if (fl > double(INT64_MAX) / 2) break;
    int64_t a = int64_t(fl);
    int64_t p2 = a * p1 + p0;
    int64_t q2 = a * q1 + q0;
    if (q2 > max_den || q2 <= 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double rem = v - fl;
    if (rem < 1e-15) break;
    v = 1.0 / rem;
  }
  if (q1 == 0) return Rational(0);
  return Rational(neg ? -p1 : p1, q1);
}

}  // namespace ringlab
