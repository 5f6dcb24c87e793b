#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace hlmax {

// Scalar customization point. The library is written against this interface so
// that the same algorithms run in double, long double, or the MPFR-backed
// BigReal from <hlmax/multiprecision.hpp>.
template <class Real>
struct ScalarTraits {
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real next_up(const Real& x) { return std::nextafter(x, infinity()); }
  static Real next_down(const Real& x) { return std::nextafter(x, -infinity()); }
  static int precision_bits() { return std::numeric_limits<Real>::digits; }
  static double to_double(const Real& x) { return static_cast<double>(x); }
  static std::string to_string(const Real& x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17Lg", static_cast<long double>(x));
    return buf;
  }
};

namespace math {

template <class Real> Real exp(const Real& x) { using std::exp; return exp(x); }
template <class Real> Real expm1(const Real& x) { using std::expm1; return expm1(x); }
template <class Real> Real log(const Real& x) { using std::log; return log(x); }
template <class Real> Real log1p(const Real& x) { using std::log1p; return log1p(x); }
template <class Real> Real log2(const Real& x) { using std::log2; return log2(x); }
template <class Real> Real sqrt(const Real& x) { using std::sqrt; return sqrt(x); }
template <class Real> Real abs(const Real& x) { using std::abs; return abs(x); }
template <class Real> Real floor(const Real& x) { using std::floor; return floor(x); }
template <class Real> Real ldexp(const Real& x, int e) { using std::ldexp; return ldexp(x, e); }
template <class Real> bool isfinite(const Real& x) { using std::isfinite; return isfinite(x); }
template <class Real> bool isnan(const Real& x) { using std::isnan; return isnan(x); }

template <class Real> Real inf() { return ScalarTraits<Real>::infinity(); }

}  // namespace math

template <class Real>
std::string format_real(const Real& x) {
  return ScalarTraits<Real>::to_string(x);
}

template <class Real>
double to_double(const Real& x) {
  return ScalarTraits<Real>::to_double(x);
}

}  // namespace hlmax
