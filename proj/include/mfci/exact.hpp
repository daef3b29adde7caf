#pragma once

// Arbitrary-precision integer and rational aliases used on every exact path.

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace mfci {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Largest population size for which likelihoods, pmfs and posteriors are
// carried as exact integers alongside their floating-point values.
inline constexpr std::int64_t kExactLimit = 60;

// Exact binomial coefficient; zero when k is outside [0, n].
BigInt choose_exact(std::int64_t n, std::int64_t k);

// Nearest double to an exact rational.
double to_double(const Rational& r);

// Every finite double is a dyadic rational; this returns it exactly.
Rational from_double(double x);

}  // namespace mfci
