#include "mfci/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace mfci {
namespace {

template <class T>
std::size_t argmax_first(const std::vector<T>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

struct Window {
  std::size_t lo;
  std::size_t hi;
};

template <class T>
Window shortest_window(const std::vector<T>& mass, const T& level, std::size_t mode) {
  const std::size_t n = mass.size();
  std::vector<T> prefix(n + 1, T{0});
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + mass[i];

  for (std::size_t width = 1; width <= n; ++width) {
    std::optional<Window> best;
    T best_mass{0};
    for (std::size_t lo = 0; lo + width <= n; ++lo) {
      const std::size_t hi = lo + width - 1;
      const T m = prefix[hi + 1] - prefix[lo];
      if (m < level) continue;
      if (!best || m > best_mass) {
        best = Window{lo, hi};
        best_mass = m;
        continue;
      }
      if (m == best_mass) {
        auto skew = [mode](const Window& w) {
          const auto left = static_cast<long long>(mode) - static_cast<long long>(w.lo);
          const auto right = static_cast<long long>(w.hi) - static_cast<long long>(mode);
          return std::llabs(left - right);
        };
        if (skew(Window{lo, hi}) < skew(*best)) best = Window{lo, hi};
      }
    }
    if (best) return *best;
  }
  // Rounding can leave the total a hair under `level`; the hull is the answer.
  return Window{0, n - 1};
}

template <class Key>
DiscreteDistribution push_forward(const PointPosterior& post, Count denominator, Key key) {
  std::map<Count, double> mass;
  std::map<Count, Rational> exact;
  const bool has_exact = !post.exact.empty();
  for (std::size_t i = 0; i < post.points.size(); ++i) {
    if (has_exact ? post.exact[i] == 0 : post.mass[i] == 0.0) continue;
    const Count k = key(post.points[i]);
    mass[k] += post.mass[i];
    if (has_exact) exact[k] += post.exact[i];
  }
  std::vector<Count> values;
  std::vector<double> masses;
  std::vector<Rational> exacts;
  for (const auto& [k, m] : mass) {
    values.push_back(k);
    if (has_exact) {
      exacts.push_back(exact[k]);
      masses.push_back(to_double(exact[k]));
    } else {
      masses.push_back(m);
    }
  }
  return DiscreteDistribution(std::move(values), denominator, std::move(masses), std::move(exacts));
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<Count> numerators, Count denominator,
                                           std::vector<double> mass, std::vector<Rational> exact)
    : numerators_(std::move(numerators)),
      denominator_(denominator),
      mass_(std::move(mass)),
      exact_(std::move(exact)) {
  if (denominator_ <= 0) throw InvalidInput("distribution denominator must be positive");
  if (numerators_.empty()) throw InvalidInput("distribution support is empty");
  if (mass_.size() != numerators_.size() || (!exact_.empty() && exact_.size() != mass_.size())) {
    throw InvalidInput("distribution support and mass lengths differ");
  }
  for (std::size_t i = 1; i < numerators_.size(); ++i) {
    if (numerators_[i] <= numerators_[i - 1]) {
      throw InvalidInput("distribution support must be strictly increasing");
    }
  }
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) throw InvalidInput("distribution masses must be nonnegative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("distribution masses must sum to 1");
}

std::size_t DiscreteDistribution::mode_index() const {
  return has_exact() ? argmax_first(exact_) : argmax_first(mass_);
}

double DiscreteDistribution::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) acc += value(i) * mass_[i];
  return acc;
}

double DiscreteDistribution::median() const {
  if (has_exact()) {
    Rational acc{0};
    for (std::size_t i = 0; i < size(); ++i) {
      acc += exact_[i];
      if (acc * 2 >= 1) return value(i);
    }
  } else {
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      acc += mass_[i];
      if (acc >= 0.5) return value(i);
    }
  }
  return value(size() - 1);
}

Prior Prior::table(std::map<ParameterPoint, double> weights) {
  bool any_positive = false;
  for (const auto& [p, w] : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidInput("prior weights must be finite and >= 0");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw InvalidInput("prior has no positive weight");
  Prior prior;
  prior.weights_ = std::move(weights);
  return prior;
}

double Prior::weight(const ParameterPoint& p) const {
  if (!weights_) return 1.0;
  const auto it = weights_->find(p);
  return it == weights_->end() ? 0.0 : it->second;
}

PointPosterior posterior_points(const ObservedTable& obs, Count n01, const Prior& prior) {
  const LikelihoodSurface surf = surface(obs, n01);
  if (surf.empty()) throw Infeasible("no Science table with this n01 can produce the data");

  PointPosterior post{n01, obs.total(), {}, {}, {}};
  const auto& entries = surf.entries();
  post.points.reserve(entries.size());
  for (const auto& e : entries) post.points.push_back(e.point);

  if (const auto& counts = surf.exact_counts()) {
    std::vector<Rational> w(entries.size());
    Rational total{0};
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const double pw = prior.weight(entries[i].point);
      w[i] = prior.is_uniform() ? Rational((*counts)[i]) : from_double(pw) * (*counts)[i];
      total += w[i];
    }
    if (total == 0) throw InvalidInput("prior assigns zero weight to every feasible point");
    post.exact.reserve(w.size());
    post.mass.reserve(w.size());
    for (auto& wi : w) {
      post.exact.push_back(wi / total);
      post.mass.push_back(to_double(post.exact.back()));
    }
    return post;
  }

  std::vector<double> logw(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double pw = prior.weight(entries[i].point);
    logw[i] = pw > 0.0 ? std::log(pw) + entries[i].loglik : kLogZero;
  }
  const double norm = log_sum_exp(logw);
  if (is_log_zero(norm)) throw InvalidInput("prior assigns zero weight to every feasible point");
  post.mass.reserve(logw.size());
  for (double lw : logw) post.mass.push_back(std::exp(lw - norm));
  return post;
}

DiscreteDistribution tau_posterior(const PointPosterior& post) {
  const Count k = post.n01;
  return push_forward(post, post.population, [k](const ParameterPoint& p) { return p.n10 - k; });
}

DiscreteDistribution tau_posterior(const ObservedTable& obs, Count n01, const Prior& prior) {
  return tau_posterior(posterior_points(obs, n01, prior));
}

DiscreteDistribution a_posterior(const ObservedTable& obs, const PointPosterior& post) {
  const Count base = obs.n11() + obs.n01();
  return push_forward(post, 1, [base](const ParameterPoint& p) { return base - p.n01 - p.n11; });
}

DiscreteDistribution a_posterior(const ObservedTable& obs, Count n01, const Prior& prior) {
  return a_posterior(obs, posterior_points(obs, n01, prior));
}

IntervalEstimate hpd_interval(const DiscreteDistribution& dist, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidInput("level must lie strictly in (0, 1)");
  const std::size_t mode = dist.mode_index();
  const Window w = dist.has_exact()
                       ? shortest_window(dist.exact_masses(), from_double(level), mode)
                       : shortest_window(dist.masses(), level, mode);
  return IntervalEstimate{dist.value(mode), dist.value(w.lo), dist.value(w.hi), level,
                          Method::bayes_hpd};
}

}  // namespace mfci
