#pragma once

// Science tables, observed tables and the feasible (N10, N11) regions.
//
// A Science table counts the four potential-outcome types of a finite
// population: (Y(1), Y(0)) = (1,1), (1,0), (0,1), (0,0). The observed table
// counts units by (W, Y_obs) after a completely randomized assignment. All
// counts are exact integers and every region predicate is integer-only.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfci {

using Count = std::int64_t;

// Thrown when inputs violate a type invariant or an operation precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when the data are inconsistent with a requested assumption or
// sensitivity value (negative plug-in variance, empty bounds, ...).
class Infeasible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ScienceTable {
 public:
  ScienceTable(Count n11, Count n10, Count n01, Count n00);

  Count n11() const { return n11_; }
  Count n10() const { return n10_; }
  Count n01() const { return n01_; }
  Count n00() const { return n00_; }
  Count total() const { return n11_ + n10_ + n01_ + n00_; }
  // Units with Y(0) = 1.
  Count s() const { return n11_ + n01_; }

  auto operator<=>(const ScienceTable&) const = default;

 private:
  Count n11_, n10_, n01_, n00_;
};

class ObservedTable {
 public:
  // Cells in (W, Y_obs) order: (1,1), (1,0), (0,1), (0,0).
  ObservedTable(Count n11, Count n10, Count n01, Count n00);

  Count n11() const { return n11_; }
  Count n10() const { return n10_; }
  Count n01() const { return n01_; }
  Count n00() const { return n00_; }
  Count treated() const { return n11_ + n10_; }
  Count control() const { return n01_ + n00_; }
  Count total() const { return treated() + control(); }

  double p1_hat() const { return static_cast<double>(n11_) / treated(); }
  double p0_hat() const { return static_cast<double>(n01_) / control(); }

  auto operator<=>(const ObservedTable&) const = default;

 private:
  Count n11_, n10_, n01_, n00_;
};

// A candidate population given the sensitivity value n01 (units harmed by
// treatment). N00 is implied by the population size.
struct ParameterPoint {
  Count n10 = 0;
  Count n11 = 0;
  Count n01 = 0;

  ScienceTable science(Count total) const;
  auto operator<=>(const ParameterPoint&) const = default;
};

enum class Method {
  neyman,
  conventional,
  improved,
  sensitivity,
  bayes_hpd,
  exact_inversion,
  prediction,
};

std::string_view to_string(Method m);

struct IntervalEstimate {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  Method method = Method::improved;

  double length() const { return upper - lower; }
};

struct Margins {
  double p1;
  double p0;
  double tau;
  Count s;
};

Margins derived_margins(const ScienceTable& science);

// Points with n01 = 0 satisfying
//   n01_obs <= N11 <= n11_obs + n01_obs <= N10 + N11 <= N - n10_obs,
// ordered lexicographically in (N11, N10).
std::vector<ParameterPoint> monotone_support(const ObservedTable& obs);

// Points with the given n01 whose general likelihood is nonzero. May be empty.
std::vector<ParameterPoint> general_support(const ObservedTable& obs, Count n01);

// Membership test for general_support without materializing the set.
bool in_general_support(const ObservedTable& obs, const ParameterPoint& p);

}  // namespace mfci
