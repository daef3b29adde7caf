#pragma once

// Moment estimators and normal-approximation inference for the average
// causal effect tau = (N10 - N01) / N.

#include <optional>
#include <vector>

#include "mfci/exact.hpp"
#include "mfci/tables.hpp"

namespace mfci {

// Randomization variance of the difference in means for a population with
// success proportions p1, p0, effect tau and n01 harmed units:
//
//   N/(N-1) * { p1(1-p1)/N1 + p0(1-p0)/N0 - tau(1-tau)/N - 2*n01/N^2 }
//
// Shared by the plug-in estimators (T = double) and the exact oracle
// comparisons (T = Rational), so both see the same algebra.
template <class T>
T variance_formula(const T& p1, const T& p0, const T& tau, Count n, Count n1, Count n01) {
  const Count n0 = n - n1;
  const T one = static_cast<T>(1);
  const T big_n = static_cast<T>(n);
  T inner = p1 * (one - p1) / static_cast<T>(n1) + p0 * (one - p0) / static_cast<T>(n0) -
            tau * (one - tau) / big_n - static_cast<T>(2 * n01) / (big_n * big_n);
  return big_n / static_cast<T>(n - 1) * inner;
}

// Exact randomization variance of tau_hat for a Science table and arm size.
Rational exact_tau_variance(const ScienceTable& science, Count n1);

double tau_hat(const ObservedTable& obs);

struct CellEstimates {
  double n11;
  double n00;
  double n10;
};

// Unbiased moment estimates of the Science-table cells given n01. These are
// unconstrained: they can be fractional or negative.
CellEstimates moment_cells(const ObservedTable& obs, Count n01);

double improved_variance(const ObservedTable& obs);

// improved_variance without the -tau(1-tau)/N correction.
double neyman_variance(const ObservedTable& obs);

// Textbook s1^2/N1 + s0^2/N0 with per-arm (N_w - 1) denominators.
double conventional_variance(const ObservedTable& obs);

// Throws Infeasible when the plug-in value is negative.
double sensitivity_variance(const ObservedTable& obs, Count n01);

enum class BoundAssumption {
  frechet,
  nonneg_correlation,
  nonneg_correlation_and_effect,
};

struct N01Range {
  Count lo;
  Count hi;
};

// Plug-in bounds on the number of harmed units, rounded inward. Throws
// Infeasible when the range is empty.
N01Range n01_bounds(const ObservedTable& obs, BoundAssumption assumption);

// Two-sided standard normal quantile for a central coverage level.
double normal_critical_value(double level);

IntervalEstimate confidence_interval(double tau_hat, double variance, double level,
                                     Method method = Method::improved);

struct SensitivityRow {
  Count n01;
  double tau_hat;
  std::optional<double> variance;  // empty when n01 is infeasible
  std::optional<IntervalEstimate> interval;

  bool feasible() const { return variance.has_value(); }
};

std::vector<SensitivityRow> sensitivity_sweep(const ObservedTable& obs,
                                              const std::vector<Count>& n01_values,
                                              double level);

std::vector<SensitivityRow> sensitivity_sweep(const ObservedTable& obs, Count n01_lo,
                                              Count n01_hi, double level);

}  // namespace mfci
