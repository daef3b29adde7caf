#include "mfci/attributable.hpp"

#include <algorithm>
#include <cmath>

#include "mfci/likelihood.hpp"
#include "mfci/moments.hpp"

namespace mfci {
namespace {

// Relative slack when comparing floating pmf values on the large-N path.
constexpr double kPmfRelTol = 1e-7;

HypergeomLaw law_for(const ObservedTable& obs, Count s) {
  return HypergeomLaw(obs.total(), s, obs.control());
}

bool exact_ok(const ObservedTable& obs) { return obs.total() <= kExactLimit; }

}  // namespace

HypergeomLaw::HypergeomLaw(Count population, Count successes, Count draws)
    : n_(population), s_(successes), draws_(draws) {
  if (successes < 0 || successes > population) {
    throw InvalidInput("hypergeometric successes must lie in [0, population]");
  }
  if (draws < 1 || draws > population - 1) {
    throw InvalidInput("hypergeometric draws must lie in [1, population - 1]");
  }
}

Count HypergeomLaw::min_value() const { return std::max<Count>(0, s_ - (n_ - draws_)); }
Count HypergeomLaw::max_value() const { return std::min(s_, draws_); }

double HypergeomLaw::log_pmf(Count h) const {
  if (h < min_value() || h > max_value()) return kLogZero;
  return log_choose(s_, h) + log_choose(n_ - s_, draws_ - h) - log_choose(n_, draws_);
}

double HypergeomLaw::pmf(Count h) const {
  if (n_ <= kExactLimit) return to_double(pmf_exact(h));
  return std::exp(log_pmf(h));
}

Rational HypergeomLaw::pmf_exact(Count h) const {
  if (n_ > kExactLimit) throw InvalidInput("exact hypergeometric pmf limited to small populations");
  if (h < min_value() || h > max_value()) return Rational{0};
  return Rational(choose_exact(s_, h) * choose_exact(n_ - s_, draws_ - h),
                  choose_exact(n_, draws_));
}

Rational pvalue_S_exact(const ObservedTable& obs, Count s) {
  const HypergeomLaw law = law_for(obs, s);
  const Rational observed = law.pmf_exact(obs.n01());
  if (observed == 0) return Rational{0};
  Rational p{0};
  for (Count h = law.min_value(); h <= law.max_value(); ++h) {
    const Rational ph = law.pmf_exact(h);
    if (ph <= observed) p += ph;
  }
  return p;
}

double pvalue_S(const ObservedTable& obs, Count s) {
  if (exact_ok(obs)) return to_double(pvalue_S_exact(obs, s));
  const HypergeomLaw law = law_for(obs, s);
  const double observed = law.log_pmf(obs.n01());
  if (is_log_zero(observed)) return 0.0;
  const double cutoff = observed + std::log1p(kPmfRelTol);
  double p = 0.0;
  for (Count h = law.min_value(); h <= law.max_value(); ++h) {
    const double lp = law.log_pmf(h);
    if (lp <= cutoff) p += std::exp(lp);
  }
  return std::min(p, 1.0);
}

std::vector<Count> hl_estimate_A(const ObservedTable& obs) {
  const Count n = obs.total();
  const Count base = obs.n11() + obs.n01();
  std::vector<Count> best_s;
  if (exact_ok(obs)) {
    Rational top{-1};
    for (Count s = 0; s <= n; ++s) {
      const Rational p = pvalue_S_exact(obs, s);
      if (p > top) {
        top = p;
        best_s.assign(1, s);
      } else if (p == top) {
        best_s.push_back(s);
      }
    }
  } else {
    std::vector<double> p(static_cast<std::size_t>(n + 1));
    for (Count s = 0; s <= n; ++s) p[static_cast<std::size_t>(s)] = pvalue_S(obs, s);
    const double top = *std::max_element(p.begin(), p.end());
    for (Count s = 0; s <= n; ++s) {
      if (p[static_cast<std::size_t>(s)] >= top * (1.0 - 1e-9)) best_s.push_back(s);
    }
  }
  std::vector<Count> a;
  for (Count s : best_s) a.push_back(base - s);
  std::sort(a.begin(), a.end());
  return a;
}

InversionResult interval_A(const ObservedTable& obs, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie strictly in (0, 1)");
  const Count n = obs.total();
  const Count base = obs.n11() + obs.n01();
  std::vector<Count> retained;
  const Rational alpha_exact = from_double(alpha);
  for (Count s = 0; s <= n; ++s) {
    const bool keep = exact_ok(obs) ? pvalue_S_exact(obs, s) > alpha_exact : pvalue_S(obs, s) > alpha;
    if (keep) retained.push_back(base - s);
  }
  std::sort(retained.begin(), retained.end());

  InversionResult out;
  out.retained = retained;
  out.contiguous = true;
  for (std::size_t i = 1; i < retained.size(); ++i) {
    if (retained[i] != retained[i - 1] + 1) out.contiguous = false;
  }
  const auto hl = hl_estimate_A(obs);
  const double point = 0.5 * static_cast<double>(hl.front() + hl.back());
  // The HL maximizer always has p(s) >= its own pmf > 0; an empty retained
  // set only happens when alpha exceeds the largest p-value.
  const double lo = retained.empty() ? point : static_cast<double>(retained.front());
  const double hi = retained.empty() ? point : static_cast<double>(retained.back());
  out.interval = IntervalEstimate{point, lo, hi, 1.0 - alpha, Method::exact_inversion};
  return out;
}

double prediction_mse(const ObservedTable& obs, PredictionMse mse) {
  const double n = static_cast<double>(obs.total());
  const double n1 = static_cast<double>(obs.treated());
  const double n0 = static_cast<double>(obs.control());
  const double p = mse == PredictionMse::control_margin ? obs.p0_hat() : obs.p1_hat();
  return n * n * n1 * p * (1 - p) / (n0 * (n - 1));
}

IntervalEstimate neyman_predict_A(const ObservedTable& obs, double level, PredictionMse mse) {
  const double point = static_cast<double>(obs.treated()) * tau_hat(obs);
  const double half = normal_critical_value(level) * std::sqrt(prediction_mse(obs, mse));
  return IntervalEstimate{point, point - half, point + half, level, Method::prediction};
}

DiscreteDistribution standardized_pvalues(const ObservedTable& obs) {
  const Count n = obs.total();
  const Count base = obs.n11() + obs.n01();
  // Iterate s downward so A = base - s ascends.
  std::vector<Count> values;
  if (exact_ok(obs)) {
    std::vector<Rational> p;
    Rational total{0};
    for (Count s = n; s >= 0; --s) {
      Rational ps = pvalue_S_exact(obs, s);
      if (ps == 0) continue;
      values.push_back(base - s);
      total += ps;
      p.push_back(std::move(ps));
    }
    std::vector<double> mass;
    for (auto& ps : p) {
      ps /= total;
      mass.push_back(to_double(ps));
    }
    return DiscreteDistribution(std::move(values), 1, std::move(mass), std::move(p));
  }
  std::vector<double> mass;
  double total = 0.0;
  for (Count s = n; s >= 0; --s) {
    const double ps = pvalue_S(obs, s);
    if (ps == 0.0) continue;
    values.push_back(base - s);
    mass.push_back(ps);
    total += ps;
  }
  for (double& m : mass) m /= total;
  return DiscreteDistribution(std::move(values), 1, std::move(mass));
}

}  // namespace mfci
