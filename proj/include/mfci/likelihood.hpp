#pragma once

// Randomization likelihood of (N10, N11) for a fixed number of harmed units.
//
// Complete randomization draws N1 of N units for treatment, so the observed
// table follows a multivariate hypergeometric law over the four unit types.
// When n01 = 0 the treated-arm composition is pinned down by the data and the
// likelihood is a single product of binomials; otherwise it marginalizes over
// x, the number of (1,1) units landing in treatment.

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mfci/exact.hpp"
#include "mfci/tables.hpp"

namespace mfci {

// log(0); compares below every finite log-likelihood.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_zero(double v) { return v == kLogZero; }

// Natural log of C(n, k). Throws InvalidInput unless 0 <= k <= n.
double log_choose(Count n, Count k);

// log_choose, but kLogZero for k outside [0, n]; for use inside sums.
double log_choose_or_zero(Count n, Count k);

double log_sum_exp(std::span<const double> terms);

// Range of x (treated (1,1) units) consistent with obs and the point.
struct LatentRange {
  Count lo;
  Count hi;
  bool empty() const { return lo > hi; }
};

LatentRange latent_range(const ObservedTable& obs, const ParameterPoint& p);

// Number of the C(N, N1) assignments that reproduce obs from the point's
// Science table.
BigInt likelihood_count(const ObservedTable& obs, const ParameterPoint& p);

// Exact likelihood: likelihood_count / C(N, N1).
Rational likelihood_exact(const ObservedTable& obs, const ParameterPoint& p);

// Closed form under monotonicity; the point must have n01 = 0.
double loglik_monotone(const ObservedTable& obs, const ParameterPoint& p);

double loglik_general(const ObservedTable& obs, const ParameterPoint& p);

class LikelihoodSurface {
 public:
  struct Entry {
    ParameterPoint point;
    double loglik;
  };

  LikelihoodSurface(const ObservedTable& obs, Count n01);

  Count n01() const { return n01_; }
  Count population() const { return n_; }
  Count treated() const { return n1_; }
  Count control() const { return n_ - n1_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Lexicographic in (N11, N10).
  const std::vector<Entry>& entries() const { return entries_; }

  // Assignment counts aligned with entries(); present when N <= kExactLimit.
  const std::optional<std::vector<BigInt>>& exact_counts() const { return counts_; }

 private:
  Count n01_;
  Count n_;
  Count n1_;
  std::vector<Entry> entries_;
  std::optional<std::vector<BigInt>> counts_;
};

LikelihoodSurface surface(const ObservedTable& obs, Count n01);

struct MleResult {
  std::vector<ParameterPoint> argmax;
  std::vector<double> tau;  // distinct (N10 - n01) / N over argmax, ascending
  double max_loglik;
};

// All maximizers; ties are kept. Throws Infeasible on an empty surface.
MleResult mle(const ObservedTable& obs, Count n01);
MleResult mle(const LikelihoodSurface& s);

}  // namespace mfci
