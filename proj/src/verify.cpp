#include "mfci/verify.hpp"

#include <cmath>
#include <sstream>

#include "mfci/likelihood.hpp"
#include "mfci/moments.hpp"
#include "mfci/random.hpp"

namespace mfci {
namespace {

constexpr std::size_t kMaxRecordedFailures = 200;

std::string str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

class Recorder {
 public:
  explicit Recorder(VerifyReport& report) : report_(report) {}

  void check(const std::string& name, bool ok, const ScienceTable& t, Count n1,
             const std::string& detail = {}) {
    if (ok) {
      ++report_.passed[name];
      return;
    }
    ++report_.failed[name];
    if (report_.failures.size() < kMaxRecordedFailures) {
      report_.failures.push_back({name, t, n1, detail});
    }
  }

 private:
  VerifyReport& report_;
};

Rational variance_under_test(const ScienceTable& t, Count n1, InjectedFault fault) {
  const Rational exact = exact_tau_variance(t, n1);
  if (fault == InjectedFault::variance_off_by_one) {
    const Count n = t.total();
    return exact * Rational(n - 1, n);
  }
  return exact;
}

void check_design(const ScienceTable& t, Count n1, const VerifyOptions& opt, Recorder& rec) {
  const Count n = t.total();
  const Count n0 = n - n1;
  const AssignmentDistribution dist = enumerate(t, n1, opt.cap);
  const ParameterPoint truth{t.n10(), t.n11(), t.n01()};

  rec.check("probability-sum", dist.total_probability() == 1, t, n1);

  const auto law = dist.observed_law();
  for (Count a = 0; a <= n1; ++a) {
    for (Count c = 0; c <= n0; ++c) {
      const ObservedTable obs(a, n1 - a, c, n0 - c);
      const auto it = law.find(obs);
      const Rational prob = it == law.end() ? Rational{0} : it->second;
      const Rational lik = likelihood_exact(obs, truth);
      rec.check("likelihood-exact", lik == prob, t, n1,
                "obs " + std::to_string(a) + "," + std::to_string(n1 - a) + "," +
                    std::to_string(c) + "," + std::to_string(n0 - c) + ": " + str(lik) +
                    " vs oracle " + str(prob));
      rec.check("support", (prob != 0) == in_general_support(obs, truth), t, n1);
      const double ll = loglik_general(obs, truth);
      rec.check("likelihood-log", std::abs(std::exp(ll) - to_double(prob)) <= 1e-12, t, n1);
      if (t.n01() == 0) {
        const double lm = loglik_monotone(obs, truth);
        const bool same = (is_log_zero(lm) && is_log_zero(ll)) || std::abs(lm - ll) <= 1e-12;
        rec.check("monotone-reduction", same, t, n1);
      }
    }
  }

  const Rational tau(t.n10() - t.n01(), n);
  const Rational mean_tau = dist.mean_tau_hat();
  rec.check("mean-tau", mean_tau == tau, t, n1, str(mean_tau) + " vs " + str(tau));
  const Rational var_tau = dist.variance_tau_hat();
  const Rational formula = variance_under_test(t, n1, opt.fault);
  rec.check("var-tau", var_tau == formula, t, n1, str(var_tau) + " vs formula " + str(formula));

  rec.check("mean-prediction", dist.mean_prediction_error() == 0, t, n1);
  const Rational p0(t.s(), n);
  const Rational mse = Rational(n * n * n1, n0 * (n - 1)) * p0 * (1 - p0);
  const Rational var_pred = dist.variance_prediction_error();
  rec.check("var-prediction", var_pred == mse, t, n1, str(var_pred) + " vs " + str(mse));

  const Count k = t.n01();
  const Rational e11 = dist.expectation([&](const AssignmentOutcome& o) {
    return Rational(n * o.observed.n01(), n0) - k;
  });
  const Rational e00 = dist.expectation([&](const AssignmentOutcome& o) {
    return Rational(n * o.observed.n10(), n1) - k;
  });
  const Rational e10 = dist.expectation([&](const AssignmentOutcome& o) {
    return Rational(n + k) - Rational(n * o.observed.n01(), n0) - Rational(n * o.observed.n10(), n1);
  });
  rec.check("identification", e11 == t.n11() && e00 == t.n00() && e10 == t.n10(), t, n1);

  // Subset-sum moments of c_i = Y_i(1) + 2 Y_i(0), one value per unit type.
  std::vector<double> c;
  c.insert(c.end(), static_cast<std::size_t>(t.n11()), 3.0);
  c.insert(c.end(), static_cast<std::size_t>(t.n10()), 1.0);
  c.insert(c.end(), static_cast<std::size_t>(t.n01()), 2.0);
  c.insert(c.end(), static_cast<std::size_t>(t.n00()), 0.0);
  rec.check("lemma1", lemma1_check(c, n1, opt.cap).matches, t, n1);
}

void check_monte_carlo(const ScienceTable& t, Count n1, const VerifyOptions& opt, Recorder& rec) {
  const auto a = monte_carlo(t, n1, opt.mc_draws, opt.seed);
  const auto b = monte_carlo(t, n1, opt.mc_draws, opt.seed);
  bool same = a.outcomes().size() == b.outcomes().size();
  for (std::size_t i = 0; same && i < a.outcomes().size(); ++i) {
    same = a.outcomes()[i].treated == b.outcomes()[i].treated &&
           a.outcomes()[i].probability == b.outcomes()[i].probability;
  }
  rec.check("mc-determinism", same, t, n1);

  const double tau = derived_margins(t).tau;
  const double se = std::sqrt(to_double(exact_tau_variance(t, n1)) / opt.mc_draws);
  const double mean = to_double(a.mean_tau_hat());
  rec.check("mc-mean", std::abs(mean - tau) <= 4.0 * se + 1e-12, t, n1,
            "mean " + std::to_string(mean) + " vs tau " + std::to_string(tau));
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opt) {
  if (opt.max_n < 2) throw InvalidInput("max-N must be at least 2");
  VerifyReport report;
  report.prng = std::string(kPrngName) + " seed=" + std::to_string(opt.seed);
  Recorder rec(report);

  for (Count n = 2; n <= opt.max_n; ++n) {
    for (Count a = 0; a <= n; ++a) {
      for (Count b = 0; a + b <= n; ++b) {
        for (Count c = 0; a + b + c <= n; ++c) {
          const ScienceTable t(a, b, c, n - a - b - c);
          ++report.science_tables;
          for (Count n1 = 1; n1 < n; ++n1) {
            ++report.designs;
            check_design(t, n1, opt, rec);
          }
        }
      }
    }
  }

  // Sampling spot checks on a fixed family at the largest size.
  const Count n = opt.max_n;
  const Count q = std::max<Count>(1, n / 4);
  const std::vector<ScienceTable> family = {
      ScienceTable(q, q, 0, n - 2 * q),
      ScienceTable(q, q, n - 3 * q > 0 ? q : 0, n - 2 * q - (n - 3 * q > 0 ? q : 0)),
      ScienceTable(0, n / 2, 0, n - n / 2),
  };
  for (const auto& t : family) check_monte_carlo(t, n / 2, opt, rec);
  return report;
}

}  // namespace mfci
