#pragma once

// MPFR-backed scalar. Needed wherever positions or distribution values leave
// the double range: the block-constructed counterexample measure (vertex
// coordinates with thousands of bits) and the log weight at small lambda
// (H^{-1}(1/lambda) = e^{1/lambda} - 1).

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

#include "hlmax/real.hpp"

namespace hlmax {

using BigReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

template <>
struct ScalarTraits<BigReal> {
  static BigReal infinity() { return std::numeric_limits<BigReal>::infinity(); }
  static BigReal next_up(const BigReal& x) {
    BigReal y = x;
    mpfr_nextabove(y.backend().data());
    return y;
  }
  static BigReal next_down(const BigReal& x) {
    BigReal y = x;
    mpfr_nextbelow(y.backend().data());
    return y;
  }
  static int precision_bits() { return static_cast<int>(mpfr_get_default_prec()); }
  static double to_double(const BigReal& x) { return x.convert_to<double>(); }
  static std::string to_string(const BigReal& x) { return x.str(17); }
};

inline unsigned digits_for_bits(long bits) {
  return static_cast<unsigned>(std::ceil(static_cast<double>(bits) * 0.30103)) + 2;
}

// Sets the working precision of newly created BigReal values for the lifetime
// of the scope. BigReal values adopt the precision current at their creation,
// so every value of one computation must be created inside the same scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits)
      : saved_digits_(BigReal::default_precision()), saved_bits_(mpfr_get_default_prec()) {
    BigReal::default_precision(digits_for_bits(bits));
    mpfr_set_default_prec(static_cast<mpfr_prec_t>(bits));
  }
  ~PrecisionScope() {
    BigReal::default_precision(saved_digits_);
    mpfr_set_default_prec(saved_bits_);
  }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits_;
  mpfr_prec_t saved_bits_;
};

}  // namespace hlmax
