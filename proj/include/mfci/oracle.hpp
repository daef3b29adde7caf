#pragma once

// Ground truth by brute force: the exact (or sampled) randomization
// distribution of the observed table for a known Science table.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfci/exact.hpp"
#include "mfci/tables.hpp"

namespace mfci {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// Treated-arm counts of each unit type: (1,1), (1,0), (0,1), (0,0).
using Composition = std::array<Count, 4>;

struct AssignmentOutcome {
  Composition treated;
  ObservedTable observed;
  Rational probability;
  Rational tau_hat;
  Count attributable;  // A = treated (1,0) units minus treated (0,1) units
};

class AssignmentDistribution {
 public:
  AssignmentDistribution(ScienceTable science, Count n1, std::vector<AssignmentOutcome> outcomes,
                         std::optional<std::uint64_t> draws = std::nullopt,
                         std::string prng = {});

  const ScienceTable& science() const { return science_; }
  Count treated() const { return n1_; }
  Count control() const { return science_.total() - n1_; }
  const std::vector<AssignmentOutcome>& outcomes() const { return outcomes_; }

  // Probabilities aggregated by observed table.
  std::map<ObservedTable, Rational> observed_law() const;

  bool empirical() const { return draws_.has_value(); }
  std::optional<std::uint64_t> draws() const { return draws_; }
  const std::string& prng() const { return prng_; }

  Rational total_probability() const;
  Rational expectation(const std::function<Rational(const AssignmentOutcome&)>& f) const;
  Rational variance(const std::function<Rational(const AssignmentOutcome&)>& f) const;

  Rational mean_tau_hat() const;
  Rational variance_tau_hat() const;
  // A - N1 * tau_hat
  Rational mean_prediction_error() const;
  Rational variance_prediction_error() const;

 private:
  ScienceTable science_;
  Count n1_;
  std::vector<AssignmentOutcome> outcomes_;
  std::optional<std::uint64_t> draws_;
  std::string prng_;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact law over treated-arm compositions. Throws CapExceeded when
// C(N, N1) > cap; use monte_carlo instead.
AssignmentDistribution enumerate(const ScienceTable& science, Count n1,
                                 std::uint64_t cap = kDefaultEnumerationCap);

// Empirical law from `draws` simple random samples of N1 units.
AssignmentDistribution monte_carlo(const ScienceTable& science, Count n1, std::uint64_t draws,
                                   std::uint64_t seed);

// Treated-arm composition of draw `index` in a run seeded with `seed`.
Composition sample_composition(const ScienceTable& science, Count n1, std::uint64_t seed,
                               std::uint64_t index);

struct Lemma1Result {
  Rational mean;
  Rational variance;
  Rational expected_mean;      // N1 * mean(c)
  Rational expected_variance;  // N1 N0 / N * S_c^2
  bool matches;
};

// Moments of sum_i W_i c_i over every size-N1 subset, against the closed form.
Lemma1Result lemma1_check(const std::vector<double>& constants, Count n1,
                          std::uint64_t cap = kDefaultEnumerationCap);

struct NormalityReport {
  Count population;
  Count treated;
  std::uint64_t draws;
  std::uint64_t used;     // draws with a positive plug-in variance
  std::uint64_t skipped;
  bool degenerate;        // true randomization variance is zero; no statistic
  double ks_distance;     // sup |F_n(z) - Phi(z)| of (tau_hat - tau) / sqrt(V_hat)
};

NormalityReport normality_check(const ScienceTable& science, Count n1, std::uint64_t draws,
                                std::uint64_t seed);

}  // namespace mfci
