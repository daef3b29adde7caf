#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "mfci/likelihood.hpp"
#include "support/brute.hpp"

using namespace mfci;
using doctest::Approx;

TEST_CASE("log_choose") {
  CHECK(log_choose(10, 0) == 0.0);
  CHECK(log_choose(10, 10) == 0.0);
  // C(53, 32) = 317986441828055 by exact big-integer arithmetic.
  CHECK(choose_exact(53, 32) == BigInt("317986441828055"));
  CHECK(std::abs(log_choose(53, 32) - std::log(317986441828055.0)) <= 1e-10);
  CHECK_THROWS_AS(log_choose(5, 6), InvalidInput);
  CHECK_THROWS_AS(log_choose(5, -1), InvalidInput);
  CHECK(is_log_zero(log_choose_or_zero(5, 6)));
  // Large-n path against a Stirling-free reference built from the exact path.
  double ref = 0.0;
  for (Count i = 1; i <= 400; ++i) ref += std::log(static_cast<double>(1000 - 400 + i) / i);
  CHECK(std::abs(log_choose(1000, 400) - ref) <= 1e-9);
}

TEST_CASE("log_sum_exp") {
  const std::vector<double> t = {std::log(1.0), std::log(2.0), kLogZero};
  CHECK(log_sum_exp(t) == Approx(std::log(3.0)));
  const std::vector<double> z = {kLogZero, kLogZero};
  CHECK(is_log_zero(log_sum_exp(z)));
  const std::vector<double> big = {-1000.0, -1000.0};
  CHECK(log_sum_exp(big) == Approx(-1000.0 + std::log(2.0)));
}

TEST_CASE("monotone likelihood (1,0,1,1) at (N10 = 1, N11 = 1) is 1/3") {
  const ObservedTable obs(1, 0, 1, 1);
  const ParameterPoint p{1, 1, 0};
  const auto law = brute::observed_law(ScienceTable(1, 1, 0, 1), 1);
  CHECK(law.at(obs) == Rational(1, 3));
  CHECK(likelihood_exact(obs, p) == Rational(1, 3));
  CHECK(std::exp(loglik_monotone(obs, p)) == Approx(1.0 / 3));
  CHECK(is_log_zero(loglik_monotone(obs, ParameterPoint{0, 0, 0})));
  CHECK_THROWS_AS(loglik_monotone(obs, ParameterPoint{0, 1, 1}), InvalidInput);
}

TEST_CASE("general likelihood (1,0,1,1) at (N10 = 0, N11 = 1, n01 = 1)") {
  const ObservedTable obs(1, 0, 1, 1);
  const auto law = brute::observed_law(ScienceTable(1, 0, 1, 1), 1);
  CHECK(law.at(obs) == Rational(1, 3));
  CHECK(likelihood_exact(obs, ParameterPoint{0, 1, 1}) == Rational(1, 3));
  CHECK(std::exp(loglik_general(obs, ParameterPoint{0, 1, 1})) == Approx(1.0 / 3));
}

TEST_CASE("likelihood equals brute-force probability for every table up to N = 7") {
  for (Count n = 2; n <= 7; ++n) {
    for (const auto& t : brute::tables_of_size(n)) {
      const ParameterPoint p{t.n10(), t.n11(), t.n01()};
      for (Count n1 = 1; n1 < n; ++n1) {
        const auto law = brute::observed_law(t, n1);
        Rational total = 0;
        for (Count a = 0; a <= n1; ++a) {
          for (Count c = 0; c <= n - n1; ++c) {
            const ObservedTable obs(a, n1 - a, c, n - n1 - c);
            const auto it = law.find(obs);
            const Rational want = it == law.end() ? Rational{0} : it->second;
            CHECK(likelihood_exact(obs, p) == want);
            total += likelihood_exact(obs, p);
            const double ll = loglik_general(obs, p);
            CHECK(std::abs(std::exp(ll) - to_double(want)) <= 1e-12);
          }
        }
        CHECK(total == 1);
      }
    }
  }
}

TEST_CASE("property: reduction to the closed form at n01 = 0") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Count> cell(0, 30);
  for (int i = 0; i < 40; ++i) {
    const ObservedTable obs(cell(rng), cell(rng) + 1, cell(rng), cell(rng) + 1);
    for (const auto& p : monotone_support(obs)) {
      const double a = loglik_monotone(obs, p);
      const double b = loglik_general(obs, p);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("log path agrees with exact path above the exact limit") {
  // N = 80 takes the log-space route; compare against big-integer counts.
  const ObservedTable obs(20, 20, 15, 25);
  for (Count k : {0, 3}) {
    for (const auto& p : general_support(obs, k)) {
      if ((p.n10 + p.n11) % 7 != 0) continue;
      const double exact = std::log(likelihood_count(obs, p).convert_to<double>()) -
                           std::log(choose_exact(80, 40).convert_to<double>());
      CHECK(std::abs(loglik_general(obs, p) - exact) <= 1e-9 * std::abs(exact));
    }
  }
}

TEST_CASE("surface") {
  const ObservedTable obs(18, 14, 5, 16);
  const auto s = surface(obs, 0);
  CHECK(s.size() == 323);
  REQUIRE(s.exact_counts().has_value());
  for (const auto& e : s.entries()) CHECK(!is_log_zero(e.loglik));
  CHECK(surface(obs, 40).empty());
}

TEST_CASE("MLE of the worked example") {
  // Exhaustive grid evaluation: unique maximizer (N10, N11) = (18, 12).
  const auto m = mle(ObservedTable(18, 14, 5, 16), 0);
  REQUIRE(m.argmax.size() == 1);
  CHECK(m.argmax[0] == ParameterPoint{18, 12, 0});
  REQUIRE(m.tau.size() == 1);
  CHECK(m.tau[0] == Approx(18.0 / 53));
  CHECK(m.max_loglik == Approx(-2.7368655641865622).epsilon(1e-12));
  CHECK_THROWS_AS(mle(ObservedTable(18, 14, 5, 16), 40), Infeasible);
}

TEST_CASE("MLE ties are symmetric for (1,1,1,1)") {
  const ObservedTable obs(1, 1, 1, 1);
  const auto m = mle(obs, 0);
  std::set<ParameterPoint> got(m.argmax.begin(), m.argmax.end());
  for (const auto& p : m.argmax) {
    // Swapping arms maps (N11, N10, N00) to (N00, N10, N11) with the same likelihood.
    const ParameterPoint mirror{p.n10, 4 - p.n10 - p.n11, 0};
    CHECK(got.contains(mirror));
  }
}

TEST_CASE("MLE maximizes the brute-force likelihood on small instances") {
  for (const auto& obs : {ObservedTable(2, 1, 1, 2), ObservedTable(3, 0, 1, 2), ObservedTable(1, 2, 2, 1)}) {
    for (Count k = 0; k <= 2; ++k) {
      const auto sup = general_support(obs, k);
      if (sup.empty()) continue;
      Rational best = 0;
      for (const auto& p : sup) {
        const auto law = brute::observed_law(p.science(obs.total()), obs.treated());
        best = std::max(best, law.at(obs));
      }
      const auto m = mle(obs, k);
      for (const auto& p : m.argmax) {
        CHECK(brute::observed_law(p.science(obs.total()), obs.treated()).at(obs) == best);
      }
    }
  }
}
