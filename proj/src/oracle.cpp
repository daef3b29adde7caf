#include "mfci/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfci/moments.hpp"
#include "mfci/random.hpp"

namespace mfci {
namespace {

void check_design(const ScienceTable& science, Count n1) {
  if (n1 < 1 || n1 > science.total() - 1) {
    throw InvalidInput("treated arm size must lie in [1, N - 1]");
  }
}

AssignmentOutcome outcome_for(const ScienceTable& t, Count n1, const Composition& x,
                              Rational probability) {
  const Count n0 = t.total() - n1;
  const Count n11 = x[0] + x[1];
  const Count n10 = x[2] + x[3];
  const Count n01 = (t.n11() - x[0]) + (t.n01() - x[2]);
  const Count n00 = (t.n10() - x[1]) + (t.n00() - x[3]);
  return AssignmentOutcome{
      x,
      ObservedTable(n11, n10, n01, n00),
      std::move(probability),
      Rational(n11, n1) - Rational(n01, n0),
      x[1] - x[2],
  };
}

std::array<Count, 4> type_counts(const ScienceTable& t) {
  return {t.n11(), t.n10(), t.n01(), t.n00()};
}

}  // namespace

AssignmentDistribution::AssignmentDistribution(ScienceTable science, Count n1,
                                               std::vector<AssignmentOutcome> outcomes,
                                               std::optional<std::uint64_t> draws,
                                               std::string prng)
    : science_(science),
      n1_(n1),
      outcomes_(std::move(outcomes)),
      draws_(draws),
      prng_(std::move(prng)) {}

std::map<ObservedTable, Rational> AssignmentDistribution::observed_law() const {
  std::map<ObservedTable, Rational> law;
  for (const auto& o : outcomes_) law[o.observed] += o.probability;
  return law;
}

Rational AssignmentDistribution::total_probability() const {
  Rational total{0};
  for (const auto& o : outcomes_) total += o.probability;
  return total;
}

Rational AssignmentDistribution::expectation(
    const std::function<Rational(const AssignmentOutcome&)>& f) const {
  Rational acc{0};
  for (const auto& o : outcomes_) acc += o.probability * f(o);
  return acc;
}

Rational AssignmentDistribution::variance(
    const std::function<Rational(const AssignmentOutcome&)>& f) const {
  const Rational mu = expectation(f);
  return expectation([&](const AssignmentOutcome& o) {
    const Rational d = f(o) - mu;
    return d * d;
  });
}

Rational AssignmentDistribution::mean_tau_hat() const {
  return expectation([](const AssignmentOutcome& o) { return o.tau_hat; });
}

Rational AssignmentDistribution::variance_tau_hat() const {
  return variance([](const AssignmentOutcome& o) { return o.tau_hat; });
}

Rational AssignmentDistribution::mean_prediction_error() const {
  const Count n1 = n1_;
  return expectation(
      [n1](const AssignmentOutcome& o) { return Rational(o.attributable) - n1 * o.tau_hat; });
}

Rational AssignmentDistribution::variance_prediction_error() const {
  const Count n1 = n1_;
  return variance(
      [n1](const AssignmentOutcome& o) { return Rational(o.attributable) - n1 * o.tau_hat; });
}

AssignmentDistribution enumerate(const ScienceTable& science, Count n1, std::uint64_t cap) {
  check_design(science, n1);
  const BigInt assignments = choose_exact(science.total(), n1);
  if (assignments > cap) {
    throw CapExceeded("C(" + std::to_string(science.total()) + ", " + std::to_string(n1) +
                      ") assignments exceed the enumeration cap of " + std::to_string(cap) +
                      "; use monte_carlo");
  }
  const auto c = type_counts(science);
  std::vector<AssignmentOutcome> outcomes;
  for (Count a = 0; a <= std::min(c[0], n1); ++a) {
    for (Count b = 0; b <= std::min(c[1], n1 - a); ++b) {
      for (Count d = 0; d <= std::min(c[2], n1 - a - b); ++d) {
        const Count e = n1 - a - b - d;
        if (e > c[3]) continue;
        const BigInt ways = choose_exact(c[0], a) * choose_exact(c[1], b) *
                            choose_exact(c[2], d) * choose_exact(c[3], e);
        outcomes.push_back(outcome_for(science, n1, {a, b, d, e}, Rational(ways, assignments)));
      }
    }
  }
  return AssignmentDistribution(science, n1, std::move(outcomes));
}

Composition sample_composition(const ScienceTable& science, Count n1, std::uint64_t seed,
                               std::uint64_t index) {
  auto remaining = type_counts(science);
  Count left = science.total();
  Composition x{0, 0, 0, 0};
  SplitMix64 rng = SplitMix64::for_draw(seed, index);
  for (Count i = 0; i < n1; ++i) {
    auto u = static_cast<Count>(rng.below(static_cast<std::uint64_t>(left)));
    std::size_t type = 0;
    while (u >= remaining[type]) {
      u -= remaining[type];
      ++type;
    }
    --remaining[type];
    ++x[type];
    --left;
  }
  return x;
}

AssignmentDistribution monte_carlo(const ScienceTable& science, Count n1, std::uint64_t draws,
                                   std::uint64_t seed) {
  check_design(science, n1);
  if (draws < 1) throw InvalidInput("monte_carlo needs at least one draw");
  std::map<Composition, std::uint64_t> tally;
  for (std::uint64_t d = 0; d < draws; ++d) ++tally[sample_composition(science, n1, seed, d)];

  std::vector<AssignmentOutcome> outcomes;
  outcomes.reserve(tally.size());
  const BigInt total{draws};
  for (const auto& [x, count] : tally) {
    outcomes.push_back(outcome_for(science, n1, x, Rational(BigInt{count}, total)));
  }
  return AssignmentDistribution(science, n1, std::move(outcomes), draws,
                                std::string(kPrngName) + " seed=" + std::to_string(seed));
}

Lemma1Result lemma1_check(const std::vector<double>& constants, Count n1, std::uint64_t cap) {
  const auto n = static_cast<Count>(constants.size());
  if (n < 2) throw InvalidInput("lemma1_check needs at least two constants");
  if (n1 < 1 || n1 > n - 1) throw InvalidInput("treated arm size must lie in [1, N - 1]");
  const BigInt subsets = choose_exact(n, n1);
  if (subsets > cap) throw CapExceeded("too many subsets to enumerate for lemma1_check");

  std::vector<Rational> c;
  c.reserve(constants.size());
  for (double v : constants) {
    if (!std::isfinite(v)) throw InvalidInput("constants must be finite");
    c.push_back(from_double(v));
  }

  // Walk all size-n1 index subsets in lexicographic order.
  std::vector<Count> idx(static_cast<std::size_t>(n1));
  for (Count i = 0; i < n1; ++i) idx[static_cast<std::size_t>(i)] = i;
  Rational sum{0};
  Rational sum_sq{0};
  while (true) {
    Rational s{0};
    for (Count i : idx) s += c[static_cast<std::size_t>(i)];
    sum += s;
    sum_sq += s * s;
    Count pos = n1 - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - n1 + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (Count j = pos + 1; j < n1; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  Lemma1Result r;
  const Rational count{subsets};
  r.mean = sum / count;
  r.variance = sum_sq / count - r.mean * r.mean;

  Rational cbar{0};
  for (const auto& v : c) cbar += v;
  cbar /= n;
  Rational ss{0};
  for (const auto& v : c) ss += (v - cbar) * (v - cbar);
  const Rational s2 = ss / (n - 1);
  r.expected_mean = n1 * cbar;
  r.expected_variance = Rational(n1 * (n - n1), n) * s2;
  r.matches = r.mean == r.expected_mean && r.variance == r.expected_variance;
  return r;
}

NormalityReport normality_check(const ScienceTable& science, Count n1, std::uint64_t draws,
                                std::uint64_t seed) {
  check_design(science, n1);
  if (draws < 10'000) throw InvalidInput("normality_check needs at least 10^4 draws");
  NormalityReport rep{science.total(), n1, draws, 0, 0, false, std::nan("")};
  if (exact_tau_variance(science, n1) == 0) {
    rep.degenerate = true;
    rep.skipped = draws;
    return rep;
  }

  const double tau = derived_margins(science).tau;
  std::vector<double> z;
  z.reserve(draws);
  for (std::uint64_t d = 0; d < draws; ++d) {
    const Composition x = sample_composition(science, n1, seed, d);
    const ObservedTable obs = outcome_for(science, n1, x, Rational{0}).observed;
    const double v = improved_variance(obs);
    if (!(v > 0.0)) {
      ++rep.skipped;
      continue;
    }
    z.push_back((tau_hat(obs) - tau) / std::sqrt(v));
  }
  rep.used = z.size();
  if (z.empty()) return rep;

  std::sort(z.begin(), z.end());
  const double m = static_cast<double>(z.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    // Evaluate the step function at the end of each run of equal values.
    if (i + 1 < z.size() && z[i + 1] == z[i]) continue;
    const double phi = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    std::size_t first = i;
    while (first > 0 && z[first - 1] == z[i]) --first;
    const double below = static_cast<double>(first) / m;
    const double upto = static_cast<double>(i + 1) / m;
    ks = std::max({ks, std::abs(upto - phi), std::abs(phi - below)});
  }
  rep.ks_distance = ks;
  return rep;
}

}  // namespace mfci
