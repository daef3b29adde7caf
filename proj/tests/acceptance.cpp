// Acceptance suite: one PASS/FAIL line per criterion, sub-checks indented
// beneath it. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mfci/attributable.hpp"
#include "mfci/bayes.hpp"
#include "mfci/cli/commands.hpp"
#include "mfci/likelihood.hpp"
#include "mfci/moments.hpp"
#include "mfci/oracle.hpp"

using namespace mfci;

namespace {

const ObservedTable kExample(18, 14, 5, 16);

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    lines_.push_back(fmt::format("    {} {}", ok ? "ok  " : "FAIL", what));
  }
  void note(const std::string& what) { lines_.push_back("    note " + what); }

  bool report() const {
    std::printf("%s %s\n", ok_ ? "PASS" : "FAIL", title_.c_str());
    for (const auto& l : lines_) std::printf("%s\n", l.c_str());
    return ok_;
  }

 private:
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> lines_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string show(const IntervalEstimate& e) {
  return fmt::format("[{:.4f}, {:.4f}] length {:.4f}", e.lower, e.upper, e.length());
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// -------------------------------------------------------------------------

bool criterion1() {
  Criterion c("1 moment intervals for (18,14,5,16)");
  const auto t0 = std::chrono::steady_clock::now();
  const double tau = tau_hat(kExample);
  struct Row {
    std::string name;
    IntervalEstimate ci;
    double lo, hi, len;
  };
  const std::vector<Row> rows = {
      {"improved", confidence_interval(tau, improved_variance(kExample), 0.95), 0.106, 0.543, 0.437},
      {"neyman", confidence_interval(tau, neyman_variance(kExample), 0.95, Method::neyman), 0.072,
       0.577, 0.505},
      {"n01=2", confidence_interval(tau, sensitivity_variance(kExample, 2), 0.95), 0.119, 0.530,
       0.411},
      {"n01=5", confidence_interval(tau, sensitivity_variance(kExample, 5), 0.95), 0.141, 0.508,
       0.367},
  };
  const double elapsed = seconds_since(t0);
  for (const auto& r : rows) {
    c.check(near(r.ci.lower, r.lo, 0.002) && near(r.ci.upper, r.hi, 0.002),
            fmt::format("{:<9} {} vs [{:.3f}, {:.3f}] +-0.002", r.name, show(r.ci), r.lo, r.hi));
  }
  c.check(elapsed < 1.0, fmt::format("runtime {:.4f} s < 1 s", elapsed));
  return c.report();
}

bool criterion2() {
  Criterion c("2 Bayes posterior of tau for (18,14,5,16), uniform prior");
  const auto t0 = std::chrono::steady_clock::now();
  struct Row {
    Count n01;
    Count lo_k, hi_k;  // reference endpoints on the k/53 grid
  };
  const Row rows[] = {{0, 4, 27}, {2, 4, 26}, {5, 5, 25}};
  const double grid = 1.0 / 53;
  for (const auto& r : rows) {
    const auto d = tau_posterior(kExample, r.n01, Prior::uniform());
    const auto hpd = hpd_interval(d, 0.95);
    const double mode = d.mode();
    c.check(near(mode, 16.0 / 53, 0.001),
            fmt::format("n01={} mode {}/53 = {:.4f} vs 16/53 = {:.4f} +-0.001", r.n01,
                        d.numerator(d.mode_index()), mode, 16.0 / 53));
    const Count lo_k = std::llround(hpd.lower * 53);
    const Count hi_k = std::llround(hpd.upper * 53);
    c.check(std::abs(lo_k - r.lo_k) <= 1 && std::abs(hi_k - r.hi_k) <= 1,
            fmt::format("n01={} hpd [{}/53, {}/53] = [{:.4f}, {:.4f}] vs [{}/53, {}/53] within one "
                        "grid step",
                        r.n01, lo_k, hi_k, hpd.lower, hpd.upper, r.lo_k, r.hi_k));
    c.note(fmt::format("n01={} median {:.4f}, mean {:.4f}, mass at 16/53 {:.5f}, at 17/53 {:.5f}",
                       r.n01, d.median(), d.mean(), d.mass(d.mode_index() - 1),
                       d.mass(d.mode_index())));
  }
  const double elapsed = seconds_since(t0);
  c.note(fmt::format("grid step 1/53 = {:.4f}", grid));
  c.check(elapsed < 5.0, fmt::format("runtime {:.3f} s < 5 s", elapsed));
  return c.report();
}

bool criterion3() {
  Criterion c("3 attributable effect for (18,14,5,16)");
  const auto hl = hl_estimate_A(kExample);
  c.check(hl == std::vector<Count>{9, 10, 11},
          fmt::format("Hodges-Lehmann set {{{}}} == {{9, 10, 11}}", fmt::join(hl, ", ")));
  const auto inv = interval_A(kExample, 0.05);
  c.check(inv.interval.lower == 2 && inv.interval.upper == 16,
          fmt::format("exact inversion [{}, {}] == [2, 16]", inv.interval.lower, inv.interval.upper));
  const auto post = a_posterior(kExample, 0, Prior::uniform());
  const auto hpd = hpd_interval(post, 0.95);
  c.check(post.mode() == 10, fmt::format("posterior mode {} == 10", post.mode()));
  c.check(hpd.lower == 1 && hpd.upper == 16,
          fmt::format("posterior hpd [{}, {}] == [1, 16]", hpd.lower, hpd.upper));
  double mass = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    if (post.value(i) >= hpd.lower && post.value(i) <= hpd.upper) mass += post.mass(i);
  }
  c.note(fmt::format("hpd mass {:.4f}; P(A = 1) = {:.5f}", mass, post.mass(1)));
  const auto pred = neyman_predict_A(kExample, 0.95);
  c.check(near(pred.point, 10.38, 0.01), fmt::format("prediction point {:.4f} vs 10.38 +-0.01", pred.point));
  const auto compat = neyman_predict_A(kExample, 0.95, PredictionMse::treated_margin);
  c.check(near(compat.lower, 1.56, 0.01) && near(compat.upper, 19.20, 0.01),
          fmt::format("compat interval [{:.4f}, {:.4f}] vs [1.56, 19.20] +-0.01", compat.lower,
                      compat.upper));
  c.check(near(pred.lower, 2.81, 0.01) && near(pred.upper, 17.96, 0.01),
          fmt::format("default interval [{:.4f}, {:.4f}] vs [2.81, 17.96] +-0.01", pred.lower,
                      pred.upper));
  return c.report();
}

template <class F>
void for_each_design(Count max_n, F&& f) {
  for (Count n = 2; n <= max_n; ++n)
    for (Count a = 0; a <= n; ++a)
      for (Count b = 0; a + b <= n; ++b)
        for (Count d = 0; a + b + d <= n; ++d)
          for (Count n1 = 1; n1 < n; ++n1) f(ScienceTable(a, b, d, n - a - b - d), n1);
}

bool criterion4() {
  Criterion c("4 likelihood equals oracle probability, N <= 8");
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t designs = 0, cells = 0, exact_bad = 0, log_bad = 0;
  for_each_design(8, [&](const ScienceTable& t, Count n1) {
    ++designs;
    const Count n = t.total();
    const auto law = enumerate(t, n1).observed_law();
    const ParameterPoint p{t.n10(), t.n11(), t.n01()};
    for (Count a = 0; a <= n1; ++a) {
      for (Count d = 0; d <= n - n1; ++d) {
        const ObservedTable obs(a, n1 - a, d, n - n1 - d);
        const auto it = law.find(obs);
        const Rational want = it == law.end() ? Rational{0} : it->second;
        ++cells;
        if (likelihood_exact(obs, p) != want) ++exact_bad;
        if (std::abs(std::exp(loglik_general(obs, p)) - to_double(want)) > 1e-12) ++log_bad;
      }
    }
  });
  const double elapsed = seconds_since(t0);
  c.check(exact_bad == 0, fmt::format("{} designs, {} observed tables, {} exact mismatches", designs,
                                      cells, exact_bad));
  c.check(log_bad == 0, fmt::format("log path within 1e-12 of the oracle: {} mismatches", log_bad));
  c.check(elapsed < 300.0, fmt::format("runtime {:.2f} s < 300 s", elapsed));
  return c.report();
}

bool criterion5() {
  Criterion c("5 moment identities against the oracle, N <= 8");
  std::uint64_t designs = 0, mean_bad = 0, var_bad = 0, pmean_bad = 0, pvar_bad = 0, lemma_bad = 0;
  for_each_design(8, [&](const ScienceTable& t, Count n1) {
    ++designs;
    const Count n = t.total();
    const Count n0 = n - n1;
    const auto dist = enumerate(t, n1);
    const Rational p1(t.n11() + t.n10(), n);
    const Rational p0(t.s(), n);
    const Rational tau(t.n10() - t.n01(), n);
    if (dist.mean_tau_hat() != tau) ++mean_bad;
    if (dist.variance_tau_hat() != variance_formula<Rational>(p1, p0, tau, n, n1, t.n01())) ++var_bad;
    if (dist.mean_prediction_error() != 0) ++pmean_bad;
    if (dist.variance_prediction_error() != Rational(n * n * n1, n0 * (n - 1)) * p0 * (1 - p0)) {
      ++pvar_bad;
    }
    std::vector<double> cs;
    for (Count i = 0; i < t.n11(); ++i) cs.push_back(2.0);
    for (Count i = 0; i < t.n10(); ++i) cs.push_back(1.0);
    for (Count i = 0; i < t.n01(); ++i) cs.push_back(-1.0);
    for (Count i = 0; i < t.n00(); ++i) cs.push_back(0.5);
    if (!lemma1_check(cs, n1).matches) ++lemma_bad;
  });
  c.check(mean_bad == 0, fmt::format("E(tau_hat) = tau over {} designs: {} failures", designs, mean_bad));
  c.check(var_bad == 0, fmt::format("var(tau_hat) = variance formula with N01: {} failures", var_bad));
  c.check(pmean_bad == 0, fmt::format("E(A - N1 tau_hat) = 0: {} failures", pmean_bad));
  c.check(pvar_bad == 0, fmt::format("var(A - N1 tau_hat) = N^2 N1 p0(1-p0)/(N0(N-1)): {} failures", pvar_bad));
  c.check(lemma_bad == 0, fmt::format("subset-sum moments: {} failures", lemma_bad));

  const auto named = enumerate(ScienceTable(1, 2, 0, 1), 2);
  c.check(named.variance_tau_hat() == Rational(1, 6) && named.mean_tau_hat() == Rational(1, 2),
          "science (1,2,0,1), N1=2: E(tau_hat) = 1/2, var(tau_hat) = 1/6");
  c.check(named.variance_prediction_error() == 1 && named.mean_prediction_error() == 0,
          "science (1,2,0,1), N1=2: E(A - N1 tau_hat) = 0, var = 1");
  const auto l = lemma1_check({1, 0, 0}, 1);
  c.check(l.mean == Rational(1, 3) && l.variance == Rational(2, 9) && l.matches,
          "constants (1,0,0), N1=1: mean 1/3, variance 2/9");
  return c.report();
}

bool criterion6() {
  Criterion c("6 structural properties");
  std::mt19937_64 rng(20160101);
  std::uniform_int_distribution<Count> cell(0, 60);
  int card_bad = 0, tables = 0;
  double worst = 0.0;
  std::uint64_t points = 0;
  for (int i = 0; i < 500; ++i) {
    const ObservedTable obs(cell(rng), cell(rng) + 1, cell(rng), cell(rng) + 1);
    ++tables;
    const auto sup = monotone_support(obs);
    if (sup.size() != static_cast<std::size_t>((obs.n11() + 1) * (obs.n00() + 1))) ++card_bad;
    if (i % 5 != 0) continue;
    for (const auto& p : sup) {
      const double a = loglik_monotone(obs, p);
      const double b = loglik_general(obs, p);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      ++points;
    }
  }
  c.check(card_bad == 0, fmt::format("support cardinality (n11+1)(n00+1) on {} random tables: {} "
                                     "failures", tables, card_bad));
  c.check(worst <= 1e-12, fmt::format("reduction at n01=0 over {} points: max relative gap {:.3g} <= "
                                      "1e-12", points, worst));

  // Every curve the CLI emits for the worked example.
  int curves = 0;
  double worst_sum = 0.0;
  auto sum_csv = [&](const std::vector<std::string>& args, std::size_t key_col, std::size_t mass_col) {
    std::ostringstream out, err;
    if (cli::run(args, out, err) != 0) {
      worst_sum = 1.0;
      return;
    }
    std::map<std::string, double> totals;
    std::istringstream in(out.str());
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        continue;
      }
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string x;
      while (std::getline(ss, x, ',')) f.push_back(x);
      totals[key_col < f.size() ? f[key_col] : ""] += std::stod(f[mass_col]);
    }
    for (const auto& [k, t] : totals) {
      ++curves;
      worst_sum = std::max(worst_sum, std::abs(t - 1.0));
    }
  };
  const std::vector<std::string> table = {"18", "14", "5", "16"};
  auto args = [&](std::vector<std::string> head, std::vector<std::string> tail) {
    head.insert(head.end(), table.begin(), table.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  };
  sum_csv(args({"posterior"}, {"--n01", "0,1,2,3,4,5", "--format", "csv"}), 1, 5);
  sum_csv(args({"posterior"}, {"--n01", "0,1,2,3,4,5", "--target", "A", "--format", "csv"}), 1, 5);
  sum_csv(args({"attributable"}, {"--format", "csv"}), 99, 2);
  sum_csv(args({"attributable"}, {"--format", "csv"}), 99, 3);
  c.check(worst_sum <= 1e-9, fmt::format("{} emitted curves sum to 1 within {:.3g} <= 1e-9", curves,
                                         worst_sum));
  return c.report();
}

bool criterion7() {
  Criterion c("7 normal approximation distance shrinks from N=40 to N=400 (report-only)");
  const std::uint64_t draws = 100000;
  const std::uint64_t seed = 20160101;
  // Monotone family: the plug-in variance is only consistent when N01 = 0.
  const auto small = normality_check(ScienceTable(10, 10, 0, 20), 20, draws, seed);
  const auto large = normality_check(ScienceTable(100, 100, 0, 200), 200, draws, seed);
  c.note(fmt::format("science (N/4, N/4, 0, N/2), N1 = N/2, {} draws, seed {}", draws, seed));
  c.note(fmt::format("N=40  KS {:.4f} (baseline 0.0748)", small.ks_distance));
  c.note(fmt::format("N=400 KS {:.4f} (baseline 0.0252)", large.ks_distance));
  c.check(!small.degenerate && !large.degenerate && large.ks_distance < small.ks_distance,
          "distance decreases");
  return c.report();
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7};
  int failed = 0;
  for (const auto& f : criteria) failed += f() ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
