#pragma once

// Inference for the attributable effect A = sum_i W_i tau_i.
//
// A is random but satisfies A = n11_obs + n01_obs - S with S = N11 + N01, and
// randomization makes n01_obs hypergeometric given S: the N0 control units
// are a simple random sample from a population holding S units with Y(0) = 1.
// None of this depends on N01, so nothing here takes a sensitivity value.

#include <vector>

#include "mfci/bayes.hpp"
#include "mfci/exact.hpp"
#include "mfci/tables.hpp"

namespace mfci {

class HypergeomLaw {
 public:
  HypergeomLaw(Count population, Count successes, Count draws);

  Count population() const { return n_; }
  Count successes() const { return s_; }
  Count draws() const { return draws_; }
  Count min_value() const;
  Count max_value() const;

  double pmf(Count h) const;
  double log_pmf(Count h) const;
  // Requires population <= kExactLimit.
  Rational pmf_exact(Count h) const;

 private:
  Count n_;
  Count s_;
  Count draws_;
};

// Two-sided p-value for S = s: total mass of outcomes no more likely than
// the observed n01_obs. Zero when n01_obs is impossible under s.
double pvalue_S(const ObservedTable& obs, Count s);
Rational pvalue_S_exact(const ObservedTable& obs, Count s);

// Every A = n11_obs + n01_obs - s where s maximizes the p-value, ascending.
std::vector<Count> hl_estimate_A(const ObservedTable& obs);

struct InversionResult {
  IntervalEstimate interval;  // hull of the retained values
  std::vector<Count> retained;  // A values with p > alpha, ascending
  bool contiguous;
};

InversionResult interval_A(const ObservedTable& obs, double alpha);

enum class PredictionMse {
  control_margin,  // N^2 N1 p0(1-p0) / (N0 (N-1))
  treated_margin,  // same with p1(1-p1)
};

IntervalEstimate neyman_predict_A(const ObservedTable& obs, double level,
                                  PredictionMse mse = PredictionMse::control_margin);

double prediction_mse(const ObservedTable& obs, PredictionMse mse);

// p(s) over every s where the observed count is possible, scaled to sum to
// one and indexed by A.
DiscreteDistribution standardized_pvalues(const ObservedTable& obs);

}  // namespace mfci
