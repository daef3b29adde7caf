#pragma once

// Posterior inference over (N10, N11) for a fixed n01, and its pushforwards
// to the average effect tau and the attributable effect A.

#include <map>
#include <optional>
#include <vector>

#include "mfci/exact.hpp"
#include "mfci/likelihood.hpp"
#include "mfci/tables.hpp"

namespace mfci {

// Probability mass on an ordered grid of values numerator / denominator.
// When the inputs allow it (N <= kExactLimit and a table prior of finite
// doubles), the exact rational masses ride along and drive every comparison.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Count> numerators, Count denominator, std::vector<double> mass,
                       std::vector<Rational> exact = {});

  std::size_t size() const { return numerators_.size(); }
  Count numerator(std::size_t i) const { return numerators_[i]; }
  Count denominator() const { return denominator_; }
  double value(std::size_t i) const {
    return static_cast<double>(numerators_[i]) / static_cast<double>(denominator_);
  }
  double mass(std::size_t i) const { return mass_[i]; }
  const std::vector<Count>& numerators() const { return numerators_; }
  const std::vector<double>& masses() const { return mass_; }
  bool has_exact() const { return !exact_.empty(); }
  const std::vector<Rational>& exact_masses() const { return exact_; }

  // Index of the largest mass; the smallest value wins ties.
  std::size_t mode_index() const;
  double mode() const { return value(mode_index()); }
  double mean() const;
  // Smallest value whose cumulative mass reaches one half.
  double median() const;

 private:
  std::vector<Count> numerators_;
  Count denominator_;
  std::vector<double> mass_;
  std::vector<Rational> exact_;
};

class Prior {
 public:
  static Prior uniform() { return Prior{}; }
  // Weights for points not listed are zero. Throws InvalidInput on negative
  // or non-finite weights, or when no weight is positive.
  static Prior table(std::map<ParameterPoint, double> weights);

  bool is_uniform() const { return !weights_.has_value(); }
  double weight(const ParameterPoint& p) const;

 private:
  std::optional<std::map<ParameterPoint, double>> weights_;
};

struct PointPosterior {
  Count n01;
  Count population;
  std::vector<ParameterPoint> points;  // lexicographic in (N11, N10)
  std::vector<double> mass;
  std::vector<Rational> exact;  // empty unless exact arithmetic was possible
};

// Throws Infeasible when the likelihood surface is empty and InvalidInput when
// the prior puts zero weight on every support point.
PointPosterior posterior_points(const ObservedTable& obs, Count n01, const Prior& prior);

DiscreteDistribution tau_posterior(const PointPosterior& post);
DiscreteDistribution tau_posterior(const ObservedTable& obs, Count n01, const Prior& prior);

DiscreteDistribution a_posterior(const ObservedTable& obs, const PointPosterior& post);
DiscreteDistribution a_posterior(const ObservedTable& obs, Count n01, const Prior& prior);

// Shortest contiguous window of support values holding at least `level` of
// the mass. Equal-width windows are ranked by mass, then by how evenly they
// straddle the mode, then leftmost. The point is the mode.
IntervalEstimate hpd_interval(const DiscreteDistribution& dist, double level);

}  // namespace mfci
