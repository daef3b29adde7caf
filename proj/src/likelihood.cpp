#include "mfci/likelihood.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <string>

namespace mfci {
namespace {

// C(n, k) in 64 bits; exact for n <= 66, so comfortably for n <= kExactLimit.
std::uint64_t choose_u64(Count n, Count k) {
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (Count i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i; split to stay inside 64 bits.
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    r = (r / g) * (num / (static_cast<std::uint64_t>(i) / g));
  }
  return r;
}

double log_big(const BigInt& v) {
  // Values here are at most C(N, N1) for N <= kExactLimit, well inside double range.
  return std::log(v.convert_to<double>());
}

double log_from_count(const BigInt& count, Count n, Count n1) {
  if (count == 0) return kLogZero;
  return log_big(count) - log_big(choose_exact(n, n1));
}

}  // namespace

double log_choose(Count n, Count k) {
  if (k < 0 || n < 0 || k > n) {
    throw InvalidInput("log_choose needs 0 <= k <= n (got n=" + std::to_string(n) +
                       ", k=" + std::to_string(k) + ")");
  }
  if (k == 0 || k == n) return 0.0;
  if (n <= kExactLimit) return std::log(static_cast<double>(choose_u64(n, k)));
  const long double r = std::lgammal(static_cast<long double>(n) + 1) -
                        std::lgammal(static_cast<long double>(k) + 1) -
                        std::lgammal(static_cast<long double>(n - k) + 1);
  return static_cast<double>(r);
}

double log_choose_or_zero(Count n, Count k) {
  if (k < 0 || n < 0 || k > n) return kLogZero;
  return log_choose(n, k);
}

double log_sum_exp(std::span<const double> terms) {
  double hi = kLogZero;
  for (double t : terms) hi = std::max(hi, t);
  if (is_log_zero(hi)) return kLogZero;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - hi);
  return hi + std::log(acc);
}

LatentRange latent_range(const ObservedTable& obs, const ParameterPoint& p) {
  const Count n = obs.total();
  const Count k = p.n01;
  const Count lo = std::max({Count{0}, obs.n11() - p.n10, p.n11 - obs.n01(),
                             k + p.n11 - obs.n10() - obs.n01()});
  const Count hi = std::min({p.n11, obs.n11(), k + p.n11 - obs.n01(),
                             n - p.n10 - obs.n10() - obs.n01()});
  return {lo, hi};
}

BigInt likelihood_count(const ObservedTable& obs, const ParameterPoint& p) {
  if (!in_general_support(obs, p)) return BigInt{0};
  const Count n = obs.total();
  const Count k = p.n01;
  const Count n00 = n - p.n11 - p.n10 - k;
  const LatentRange r = latent_range(obs, p);
  BigInt sum{0};
  for (Count x = r.lo; x <= r.hi; ++x) {
    sum += choose_exact(p.n11, x) * choose_exact(p.n10, obs.n11() - x) *
           choose_exact(k, k + p.n11 - obs.n01() - x) *
           choose_exact(n00, obs.n10() + obs.n01() + x - k - p.n11);
  }
  return sum;
}

Rational likelihood_exact(const ObservedTable& obs, const ParameterPoint& p) {
  return Rational(likelihood_count(obs, p), choose_exact(obs.total(), obs.treated()));
}

double loglik_monotone(const ObservedTable& obs, const ParameterPoint& p) {
  if (p.n01 != 0) throw InvalidInput("loglik_monotone requires n01 = 0");
  if (!in_general_support(obs, p)) return kLogZero;
  const Count n = obs.total();
  if (n <= kExactLimit) {
    const BigInt count = choose_exact(p.n11, p.n11 - obs.n01()) *
                         choose_exact(p.n10, obs.n11() + obs.n01() - p.n11) *
                         choose_exact(n - p.n10 - p.n11, obs.n10());
    return log_from_count(count, n, obs.treated());
  }
  return log_choose(p.n11, p.n11 - obs.n01()) +
         log_choose(p.n10, obs.n11() + obs.n01() - p.n11) +
         log_choose(n - p.n10 - p.n11, obs.n10()) - log_choose(n, obs.treated());
}

double loglik_general(const ObservedTable& obs, const ParameterPoint& p) {
  if (!in_general_support(obs, p)) return kLogZero;
  const Count n = obs.total();
  if (n <= kExactLimit) return log_from_count(likelihood_count(obs, p), n, obs.treated());

  const Count k = p.n01;
  const Count n00 = n - p.n11 - p.n10 - k;
  const LatentRange r = latent_range(obs, p);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(r.hi - r.lo + 1));
  for (Count x = r.lo; x <= r.hi; ++x) {
    terms.push_back(log_choose_or_zero(p.n11, x) + log_choose_or_zero(p.n10, obs.n11() - x) +
                    log_choose_or_zero(k, k + p.n11 - obs.n01() - x) +
                    log_choose_or_zero(n00, obs.n10() + obs.n01() + x - k - p.n11));
  }
  return log_sum_exp(terms) - log_choose(n, obs.treated());
}

LikelihoodSurface::LikelihoodSurface(const ObservedTable& obs, Count n01)
    : n01_(n01), n_(obs.total()), n1_(obs.treated()) {
  const auto support = general_support(obs, n01);
  entries_.reserve(support.size());
  if (n_ <= kExactLimit) {
    std::vector<BigInt> counts;
    counts.reserve(support.size());
    for (const auto& p : support) {
      counts.push_back(likelihood_count(obs, p));
      entries_.push_back({p, log_from_count(counts.back(), n_, n1_)});
    }
    counts_ = std::move(counts);
  } else {
    for (const auto& p : support) entries_.push_back({p, loglik_general(obs, p)});
  }
}

LikelihoodSurface surface(const ObservedTable& obs, Count n01) {
  return LikelihoodSurface(obs, n01);
}

MleResult mle(const LikelihoodSurface& s) {
  if (s.empty()) throw Infeasible("likelihood surface is empty for this n01");
  const auto& entries = s.entries();
  std::vector<std::size_t> best;

  if (const auto& counts = s.exact_counts()) {
    BigInt top{0};
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const BigInt& c = (*counts)[i];
      if (c > top) {
        top = c;
        best.assign(1, i);
      } else if (c == top) {
        best.push_back(i);
      }
    }
  } else {
    double top = kLogZero;
    for (const auto& e : entries) top = std::max(top, e.loglik);
    // Floating ties: agree to within rounding of the log-sum.
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].loglik >= top - 1e-12 * std::max(1.0, std::abs(top))) best.push_back(i);
    }
  }

  MleResult out;
  out.max_loglik = entries[best.front()].loglik;
  for (std::size_t i : best) {
    out.argmax.push_back(entries[i].point);
    out.tau.push_back(static_cast<double>(entries[i].point.n10 - s.n01()) / s.population());
  }
  std::sort(out.tau.begin(), out.tau.end());
  out.tau.erase(std::unique(out.tau.begin(), out.tau.end()), out.tau.end());
  return out;
}

MleResult mle(const ObservedTable& obs, Count n01) { return mle(surface(obs, n01)); }

}  // namespace mfci
