#include "mfci/exact.hpp"

#include <cmath>

namespace mfci {

BigInt choose_exact(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return BigInt{0};
  if (k > n - k) k = n - k;
  BigInt r{1};
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational from_double(double x) {
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // 53 significant bits fit exactly in an int64 after scaling.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{scaled};
  if (exp > 0) {
    r *= BigInt{1} << exp;
  } else if (exp < 0) {
    r /= BigInt{1} << (-exp);
  }
  return r;
}

}  // namespace mfci
