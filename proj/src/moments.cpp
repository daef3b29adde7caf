#include "mfci/moments.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

namespace mfci {
namespace {

using Wide = __int128;

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Wide ceil_div(Wide a, Wide b) { return -floor_div(-a, b); }

void check_n01(Count n01) {
  if (n01 < 0) throw InvalidInput("n01 must be nonnegative");
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidInput("level must lie strictly between 0 and 1");
  }
}

}  // namespace

Rational exact_tau_variance(const ScienceTable& science, Count n1) {
  const Count n = science.total();
  const Rational p1(science.n11() + science.n10(), n);
  const Rational p0(science.n11() + science.n01(), n);
  const Rational tau(science.n10() - science.n01(), n);
  return variance_formula(p1, p0, tau, n, n1, science.n01());
}

double tau_hat(const ObservedTable& obs) { return obs.p1_hat() - obs.p0_hat(); }

CellEstimates moment_cells(const ObservedTable& obs, Count n01) {
  check_n01(n01);
  const double n = static_cast<double>(obs.total());
  const double k = static_cast<double>(n01);
  const double scaled_control = n / obs.control() * obs.n01();
  const double scaled_treated = n / obs.treated() * obs.n10();
  return CellEstimates{
      .n11 = scaled_control - k,
      .n00 = scaled_treated - k,
      .n10 = n + k - scaled_control - scaled_treated,
  };
}

double improved_variance(const ObservedTable& obs) {
  const double p1 = obs.p1_hat();
  const double p0 = obs.p0_hat();
  return variance_formula(p1, p0, p1 - p0, obs.total(), obs.treated(), Count{0});
}

double neyman_variance(const ObservedTable& obs) {
  const double p1 = obs.p1_hat();
  const double p0 = obs.p0_hat();
  const double n = static_cast<double>(obs.total());
  return n / (n - 1) * (p1 * (1 - p1) / obs.treated() + p0 * (1 - p0) / obs.control());
}

double conventional_variance(const ObservedTable& obs) {
  if (obs.treated() < 2 || obs.control() < 2) {
    throw InvalidInput("conventional variance needs at least two units per arm");
  }
  const double n1 = static_cast<double>(obs.treated());
  const double n0 = static_cast<double>(obs.control());
  const double p1 = obs.p1_hat();
  const double p0 = obs.p0_hat();
  const double s1 = n1 / (n1 - 1) * p1 * (1 - p1);
  const double s0 = n0 / (n0 - 1) * p0 * (1 - p0);
  return s1 / n1 + s0 / n0;
}

double sensitivity_variance(const ObservedTable& obs, Count n01) {
  check_n01(n01);
  const double p1 = obs.p1_hat();
  const double p0 = obs.p0_hat();
  const double v = variance_formula(p1, p0, p1 - p0, obs.total(), obs.treated(), n01);
  if (v < 0.0) {
    throw Infeasible("plug-in variance is negative at n01 = " + std::to_string(n01));
  }
  return v;
}

N01Range n01_bounds(const ObservedTable& obs, BoundAssumption assumption) {
  const Wide n = obs.total();
  const Wide n1 = obs.treated();
  const Wide n0 = obs.control();

  // -N * tau_hat = N (n01 N1 - n11 N0) / (N1 N0)
  const Wide neg_tau_lo = ceil_div(n * (Wide{obs.n01()} * n1 - Wide{obs.n11()} * n0), n1 * n0);
  const Wide frechet_lo = neg_tau_lo > 0 ? neg_tau_lo : 0;
  // N * p0_hat * (1 - p1_hat) = N n01 n10 / (N0 N1)
  const Wide indep_hi = floor_div(n * obs.n01() * obs.n10(), n0 * n1);

  Wide lo = 0;
  Wide hi = 0;
  switch (assumption) {
    case BoundAssumption::frechet: {
      const Wide a = floor_div(n * obs.n01(), n0);
      const Wide b = floor_div(n * obs.n10(), n1);
      lo = frechet_lo;
      hi = a < b ? a : b;
      break;
    }
    case BoundAssumption::nonneg_correlation:
      lo = frechet_lo;
      hi = indep_hi;
      break;
    case BoundAssumption::nonneg_correlation_and_effect:
      lo = 0;
      hi = indep_hi;
      break;
  }
  if (hi < lo) {
    throw Infeasible("observed table is inconsistent with the chosen n01 bound assumption");
  }
  return N01Range{static_cast<Count>(lo), static_cast<Count>(hi)};
}

double normal_critical_value(double level) {
  check_level(level);
  return boost::math::quantile(boost::math::normal_distribution<double>{}, 0.5 + level / 2.0);
}

IntervalEstimate confidence_interval(double tau_hat, double variance, double level,
                                     Method method) {
  if (!(variance >= 0.0)) throw InvalidInput("variance must be nonnegative");
  const double half = normal_critical_value(level) * std::sqrt(variance);
  return IntervalEstimate{tau_hat, tau_hat - half, tau_hat + half, level, method};
}

std::vector<SensitivityRow> sensitivity_sweep(const ObservedTable& obs,
                                              const std::vector<Count>& n01_values,
                                              double level) {
  check_level(level);
  const double point = tau_hat(obs);
  std::vector<SensitivityRow> rows;
  rows.reserve(n01_values.size());
  for (Count k : n01_values) {
    SensitivityRow row{k, point, std::nullopt, std::nullopt};
    try {
      const double v = sensitivity_variance(obs, k);
      row.variance = v;
      row.interval = confidence_interval(point, v, level, Method::sensitivity);
    } catch (const Infeasible&) {
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SensitivityRow> sensitivity_sweep(const ObservedTable& obs, Count n01_lo,
                                              Count n01_hi, double level) {
  check_n01(n01_lo);
  std::vector<Count> values;
  for (Count k = n01_lo; k <= n01_hi; ++k) values.push_back(k);
  return sensitivity_sweep(obs, values, level);
}

}  // namespace mfci
