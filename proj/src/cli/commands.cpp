#include "mfci/cli/commands.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "mfci/attributable.hpp"
#include "mfci/bayes.hpp"
#include "mfci/likelihood.hpp"
#include "mfci/moments.hpp"
#include "mfci/oracle.hpp"
#include "mfci/random.hpp"
#include "mfci/verify.hpp"

namespace mfci::cli {
namespace {

using nlohmann::json;

enum class Format { text, csv, json };

const std::map<std::string, Format> kFormats{
    {"text", Format::text}, {"csv", Format::csv}, {"json", Format::json}};

// Machine-readable reals carry 12 significant digits, human ones 3 decimals.
std::string num(double v) { return fmt::format("{:.12g}", v); }
std::string hum(double v) { return fmt::format("{:.3f}", v); }

// JSON numbers go through the same 12-digit rounding as CSV.
json jnum(double v) { return json::parse(num(v)); }

std::string schema_line(std::string_view schema) { return fmt::format("# {} v1\n", schema); }

struct TableArg {
  std::vector<Count> cells;

  ObservedTable observed() const {
    if (cells.size() != 4) throw InvalidInput("expected four counts: n11 n10 n01 n00");
    return ObservedTable(cells[0], cells[1], cells[2], cells[3]);
  }
  ScienceTable science() const {
    if (cells.size() != 4) throw InvalidInput("expected four counts: N11 N10 N01 N00");
    return ScienceTable(cells[0], cells[1], cells[2], cells[3]);
  }
};

void add_table(CLI::App* cmd, TableArg& t, const std::string& what) {
  cmd->add_option("table", t.cells, what)->expected(4)->required();
}

void add_format(CLI::App* cmd, Format& f) {
  cmd->add_option("--format", f, "Output format: text, csv or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

json interval_json(const IntervalEstimate& e) {
  return json{{"method", std::string(to_string(e.method))},
              {"point", jnum(e.point)},
              {"lower", jnum(e.lower)},
              {"upper", jnum(e.upper)},
              {"length", jnum(e.length())},
              {"level", jnum(e.level)}};
}

std::string interval_text(const IntervalEstimate& e) {
  return fmt::format("{} [{}, {}] {}", hum(e.point), hum(e.lower), hum(e.upper), hum(e.length()));
}

std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv(kCapEnv)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw InvalidInput(std::string(kCapEnv) + " must be a positive integer");
  }
  return kDefaultEnumerationCap;
}

// ---------------------------------------------------------------- estimate

struct EstimateOpts {
  TableArg table;
  std::string method = "all";
  std::optional<Count> n01;
  double level = 0.95;
  Format format = Format::text;
};

int cmd_estimate(const EstimateOpts& o, std::ostream& out) {
  const ObservedTable obs = o.table.observed();
  const double point = tau_hat(obs);
  const Count k = o.n01.value_or(0);

  std::vector<IntervalEstimate> rows;
  auto want = [&](std::string_view m) { return o.method == "all" || o.method == m; };
  if (want("neyman")) rows.push_back(confidence_interval(point, neyman_variance(obs), o.level, Method::neyman));
  if (o.method == "conventional") {
    rows.push_back(confidence_interval(point, conventional_variance(obs), o.level, Method::conventional));
  }
  if (want("improved")) rows.push_back(confidence_interval(point, improved_variance(obs), o.level, Method::improved));
  if (o.method == "sensitivity" || (o.method == "all" && o.n01)) {
    rows.push_back(confidence_interval(point, sensitivity_variance(obs, k), o.level, Method::sensitivity));
  }

  switch (o.format) {
    case Format::text:
      for (const auto& r : rows) out << fmt::format("{:<12} {}\n", to_string(r.method), interval_text(r));
      break;
    case Format::csv:
      out << schema_line("mfci.estimate") << "method,point,lower,upper,length,level,n01\n";
      for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{}\n", to_string(r.method), num(r.point), num(r.lower),
                           num(r.upper), num(r.length()), num(r.level),
                           r.method == Method::sensitivity ? k : 0);
      }
      break;
    case Format::json: {
      json j{{"schema", "mfci.estimate/v1"},
             {"input", {{"command", "estimate"}, {"table", o.table.cells}, {"method", o.method},
                        {"level", o.level}}},
             {"estimates", json::array()}};
      if (o.n01) j["input"]["n01"] = *o.n01;
      for (const auto& r : rows) j["estimates"].push_back(interval_json(r));
      out << j.dump(2) << "\n";
      break;
    }
  }
  return kOk;
}

// ------------------------------------------------------------- sensitivity

const std::map<std::string, BoundAssumption> kAssumptions{
    {"frechet", BoundAssumption::frechet},
    {"nonneg-correlation", BoundAssumption::nonneg_correlation},
    {"nonneg-correlation-and-effect", BoundAssumption::nonneg_correlation_and_effect}};

struct SensitivityOpts {
  TableArg table;
  std::string n01_max = "auto";
  std::vector<Count> n01_values;
  BoundAssumption assumption = BoundAssumption::nonneg_correlation_and_effect;
  double level = 0.95;
  Format format = Format::text;
};

struct BayesSummary {
  std::optional<IntervalEstimate> hpd;
};

int cmd_sensitivity(const SensitivityOpts& o, std::ostream& out) {
  const ObservedTable obs = o.table.observed();
  std::vector<Count> values = o.n01_values;
  if (values.empty()) {
    Count lo = 0;
    Count hi = 0;
    if (o.n01_max == "auto") {
      const N01Range r = n01_bounds(obs, o.assumption);
      lo = r.lo;
      hi = r.hi;
    } else {
      try {
        std::size_t used = 0;
        hi = std::stoll(o.n01_max, &used);
        if (used != o.n01_max.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw InvalidInput("--n01-max must be an integer or 'auto'");
      }
      if (hi < 0) throw InvalidInput("--n01-max must be nonnegative");
    }
    for (Count k = lo; k <= hi; ++k) values.push_back(k);
  }

  const auto rows = sensitivity_sweep(obs, values, o.level);
  std::vector<BayesSummary> bayes;
  for (const auto& r : rows) {
    BayesSummary b;
    try {
      b.hpd = hpd_interval(tau_posterior(obs, r.n01, Prior::uniform()), o.level);
    } catch (const Infeasible&) {
    }
    bayes.push_back(b);
  }

  switch (o.format) {
    case Format::text:
      out << fmt::format("{:>4}  {:<30} {:<30}\n", "n01", "moment (point [ci] length)",
                         "bayes (mode [hpd] length)");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << fmt::format("{:>4}  {:<30} {:<30}\n", r.n01,
                           r.interval ? interval_text(*r.interval) : "infeasible",
                           bayes[i].hpd ? interval_text(*bayes[i].hpd) : "infeasible");
      }
      break;
    case Format::csv:
      out << schema_line("mfci.sensitivity")
          << "n01,feasible,tau_hat,variance,ci_lower,ci_upper,ci_length,bayes_mode,hpd_lower,"
             "hpd_upper,hpd_length,level\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto& h = bayes[i].hpd;
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.n01, r.feasible() ? 1 : 0,
                           num(r.tau_hat), r.variance ? num(*r.variance) : "",
                           r.interval ? num(r.interval->lower) : "",
                           r.interval ? num(r.interval->upper) : "",
                           r.interval ? num(r.interval->length()) : "", h ? num(h->point) : "",
                           h ? num(h->lower) : "", h ? num(h->upper) : "",
                           h ? num(h->length()) : "", num(o.level));
      }
      break;
    case Format::json: {
      json j{{"schema", "mfci.sensitivity/v1"},
             {"input", {{"command", "sensitivity"}, {"table", o.table.cells}, {"n01", values},
                        {"level", o.level}}},
             {"rows", json::array()}};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        json row{{"n01", r.n01}, {"feasible", r.feasible()}, {"tau_hat", jnum(r.tau_hat)}};
        row["variance"] = r.variance ? jnum(*r.variance) : json(nullptr);
        row["moment"] = r.interval ? interval_json(*r.interval) : json(nullptr);
        row["bayes"] = bayes[i].hpd ? interval_json(*bayes[i].hpd) : json(nullptr);
        j["rows"].push_back(row);
      }
      out << j.dump(2) << "\n";
      break;
    }
  }
  return kOk;
}

// --------------------------------------------------------------- posterior

struct PosteriorOpts {
  TableArg table;
  std::vector<Count> n01{0};
  std::string target = "tau";
  std::string prior_file;
  double level = 0.95;
  Format format = Format::csv;
};

int cmd_posterior(const PosteriorOpts& o, std::ostream& out) {
  const ObservedTable obs = o.table.observed();
  struct Curve {
    Count n01;
    DiscreteDistribution dist;
    IntervalEstimate hpd;
  };
  std::vector<Curve> curves;
  for (Count k : o.n01) {
    const Prior prior = o.prior_file.empty() ? Prior::uniform() : read_prior_file(o.prior_file, k);
    const PointPosterior post = posterior_points(obs, k, prior);
    DiscreteDistribution d = o.target == "tau" ? tau_posterior(post) : a_posterior(obs, post);
    const IntervalEstimate h = hpd_interval(d, o.level);
    curves.push_back({k, std::move(d), h});
  }

  switch (o.format) {
    case Format::text:
      for (const auto& c : curves) {
        out << fmt::format("n01 = {}: mode {} hpd [{}, {}] (level {})\n", c.n01, hum(c.hpd.point),
                           hum(c.hpd.lower), hum(c.hpd.upper), o.level);
        for (std::size_t i = 0; i < c.dist.size(); ++i) {
          out << fmt::format("  {:>8}  {:.6f}\n", hum(c.dist.value(i)), c.dist.mass(i));
        }
      }
      break;
    case Format::csv:
      out << schema_line("mfci.posterior") << "target,n01,value,numerator,denominator,mass\n";
      for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.dist.size(); ++i) {
          out << fmt::format("{},{},{},{},{},{}\n", o.target, c.n01, num(c.dist.value(i)),
                             c.dist.numerator(i), c.dist.denominator(), num(c.dist.mass(i)));
        }
      }
      break;
    case Format::json: {
      json j{{"schema", "mfci.posterior/v1"},
             {"input", {{"command", "posterior"}, {"table", o.table.cells}, {"n01", o.n01},
                        {"target", o.target}, {"level", o.level}}},
             {"curves", json::array()}};
      if (!o.prior_file.empty()) j["input"]["prior_file"] = o.prior_file;
      for (const auto& c : curves) {
        json curve{{"n01", c.n01}, {"denominator", c.dist.denominator()},
                   {"numerators", c.dist.numerators()}, {"hpd", interval_json(c.hpd)}};
        json support = json::array();
        json mass = json::array();
        for (std::size_t i = 0; i < c.dist.size(); ++i) {
          support.push_back(jnum(c.dist.value(i)));
          mass.push_back(jnum(c.dist.mass(i)));
        }
        curve["support"] = support;
        curve["mass"] = mass;
        j["curves"].push_back(curve);
      }
      out << j.dump(2) << "\n";
      break;
    }
  }
  return kOk;
}

// ------------------------------------------------------------ attributable

struct AttributableOpts {
  TableArg table;
  double alpha = 0.05;
  double level = 0.95;
  Count n01 = 0;
  bool compat_paper_mse = false;
  bool curve = false;
  Format format = Format::text;
};

int cmd_attributable(const AttributableOpts& o, std::ostream& out) {
  const ObservedTable obs = o.table.observed();
  const auto hl = hl_estimate_A(obs);
  const InversionResult inv = interval_A(obs, o.alpha);
  const IntervalEstimate pred = neyman_predict_A(
      obs, o.level, o.compat_paper_mse ? PredictionMse::treated_margin : PredictionMse::control_margin);
  const PointPosterior post = posterior_points(obs, o.n01, Prior::uniform());
  const DiscreteDistribution a_post = a_posterior(obs, post);
  const IntervalEstimate a_hpd = hpd_interval(a_post, o.level);
  const DiscreteDistribution std_p = standardized_pvalues(obs);

  auto posterior_mass = [&](Count a) {
    for (std::size_t i = 0; i < a_post.size(); ++i) {
      if (a_post.numerator(i) == a) return a_post.mass(i);
    }
    return 0.0;
  };
  auto join = [](const std::vector<Count>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
  };

  switch (o.format) {
    case Format::text:
      out << fmt::format("hodges-lehmann   {{{}}}\n", join(hl));
      out << fmt::format("exact interval   [{}, {}] at alpha {}\n", inv.interval.lower,
                         inv.interval.upper, o.alpha);
      if (!inv.contiguous) out << fmt::format("  retained set   {{{}}}\n", join(inv.retained));
      out << fmt::format("prediction       {} [{}, {}]{}\n", fmt::format("{:.2f}", pred.point),
                         fmt::format("{:.2f}", pred.lower), fmt::format("{:.2f}", pred.upper),
                         o.compat_paper_mse ? " (treated-margin mse)" : "");
      out << fmt::format("posterior (n01={}) mode {} hpd [{}, {}]\n", o.n01, a_hpd.point,
                         a_hpd.lower, a_hpd.upper);
      if (o.curve) {
        out << fmt::format("{:>4}  {:>10}  {:>10}\n", "A", "std p", "posterior");
        for (std::size_t i = 0; i < std_p.size(); ++i) {
          out << fmt::format("{:>4}  {:>10.6f}  {:>10.6f}\n", std_p.numerator(i), std_p.mass(i),
                             posterior_mass(std_p.numerator(i)));
        }
      }
      break;
    case Format::csv:
      out << schema_line("mfci.attributable") << "A,pvalue,standardized_pvalue,posterior\n";
      for (std::size_t i = 0; i < std_p.size(); ++i) {
        const Count a = std_p.numerator(i);
        out << fmt::format("{},{},{},{}\n", a, num(pvalue_S(obs, obs.n11() + obs.n01() - a)),
                           num(std_p.mass(i)), num(posterior_mass(a)));
      }
      break;
    case Format::json: {
      json j{{"schema", "mfci.attributable/v1"},
             {"input", {{"command", "attributable"}, {"table", o.table.cells}, {"alpha", o.alpha},
                        {"level", o.level}, {"n01", o.n01},
                        {"compat_paper_mse", o.compat_paper_mse}}},
             {"hodges_lehmann", hl},
             {"exact_interval", interval_json(inv.interval)},
             {"retained", inv.retained},
             {"contiguous", inv.contiguous},
             {"prediction", interval_json(pred)},
             {"posterior_hpd", interval_json(a_hpd)}};
      if (o.curve) {
        json curve = json::array();
        for (std::size_t i = 0; i < std_p.size(); ++i) {
          curve.push_back({{"A", std_p.numerator(i)},
                           {"standardized_pvalue", jnum(std_p.mass(i))},
                           {"posterior", jnum(posterior_mass(std_p.numerator(i)))}});
        }
        j["curve"] = curve;
      }
      out << j.dump(2) << "\n";
      break;
    }
  }
  return kOk;
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
  Count max_n = 8;
  std::uint64_t seed = 20160101;
  std::string fault = "none";
  Format format = Format::text;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
  VerifyOptions opt;
  opt.max_n = o.max_n;
  opt.seed = o.seed;
  opt.cap = enumeration_cap();
  if (o.fault == "variance-off-by-one") opt.fault = InjectedFault::variance_off_by_one;
  if (choose_exact(o.max_n, o.max_n / 2) > opt.cap) {
    throw InvalidInput("max-N exceeds the enumeration cap; raise " + std::string(kCapEnv));
  }
  const VerifyReport rep = run_verification(opt);

  std::set<std::string> names;
  for (const auto& [k, v] : rep.passed) names.insert(k);
  for (const auto& [k, v] : rep.failed) names.insert(k);
  auto count = [](const std::map<std::string, std::uint64_t>& m, const std::string& k) {
    const auto it = m.find(k);
    return it == m.end() ? std::uint64_t{0} : it->second;
  };

  if (o.format == Format::json) {
    json j{{"schema", "mfci.verify/v1"},
           {"input", {{"command", "verify"}, {"max_n", o.max_n}, {"seed", o.seed}, {"fault", o.fault}}},
           {"prng", rep.prng},
           {"science_tables", rep.science_tables},
           {"designs", rep.designs},
           {"ok", rep.ok()},
           {"checks", json::object()},
           {"failures", json::array()}};
    for (const auto& n : names) {
      j["checks"][n] = {{"passed", count(rep.passed, n)}, {"failed", count(rep.failed, n)}};
    }
    for (const auto& f : rep.failures) {
      j["failures"].push_back({{"check", f.check},
                               {"science", {f.science.n11(), f.science.n10(), f.science.n01(), f.science.n00()}},
                               {"n1", f.treated},
                               {"detail", f.detail}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << fmt::format("verify: {} science tables, {} designs, N <= {}, {}\n", rep.science_tables,
                       rep.designs, o.max_n, rep.prng);
    for (const auto& n : names) {
      const auto bad = count(rep.failed, n);
      out << fmt::format("  {:<20} {:>8} passed {:>6} failed  {}\n", n, count(rep.passed, n), bad,
                         bad ? "FAIL" : "ok");
    }
    for (const auto& f : rep.failures) {
      out << fmt::format("  FAIL {} science=({},{},{},{}) N1={} {}\n", f.check, f.science.n11(),
                         f.science.n10(), f.science.n01(), f.science.n00(), f.treated, f.detail);
    }
    out << (rep.ok() ? "all identities hold\n" : "verification FAILED\n");
  }
  return rep.ok() ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  TableArg science;
  Count n1 = 0;
  std::uint64_t draws = 100'000;
  std::uint64_t seed = 20160101;
  bool exact = false;
  bool normality = false;
  bool law = false;
  Format format = Format::text;
};

int cmd_simulate(const SimulateOpts& o, std::ostream& out) {
  const ScienceTable t = o.science.science();
  if (o.normality) {
    const NormalityReport r = normality_check(t, o.n1, o.draws, o.seed);
    if (o.format == Format::json) {
      json j{{"schema", "mfci.normality/v1"},
             {"input", {{"command", "simulate"}, {"science", o.science.cells}, {"n1", o.n1},
                        {"draws", o.draws}, {"seed", o.seed}}},
             {"prng", std::string(kPrngName)},
             {"used", r.used},
             {"skipped", r.skipped},
             {"degenerate", r.degenerate}};
      j["ks_distance"] = r.degenerate || r.used == 0 ? json(nullptr) : jnum(r.ks_distance);
      out << j.dump(2) << "\n";
    } else {
      out << fmt::format("normality N={} N1={} draws={} used={} skipped={} {}\n", r.population,
                         r.treated, r.draws, r.used, r.skipped,
                         r.degenerate ? "degenerate (zero variance): skipped"
                                      : "ks=" + num(r.ks_distance));
    }
    return kOk;
  }

  const AssignmentDistribution d =
      o.exact ? enumerate(t, o.n1, enumeration_cap()) : monte_carlo(t, o.n1, o.draws, o.seed);
  const Margins m = derived_margins(t);
  const double mean_tau = to_double(d.mean_tau_hat());
  const double var_tau = to_double(d.variance_tau_hat());
  const double formula_var = to_double(exact_tau_variance(t, o.n1));
  const double mean_err = to_double(d.mean_prediction_error());
  const double var_err = to_double(d.variance_prediction_error());
  const double n = static_cast<double>(t.total());
  const double n1 = static_cast<double>(o.n1);
  const double formula_mse = n * n * n1 * m.p0 * (1 - m.p0) / ((n - n1) * (n - 1));
  const std::string source = d.empirical() ? d.prng() : "exact enumeration";

  switch (o.format) {
    case Format::text:
      out << fmt::format("source            {}\n", source);
      if (d.draws()) out << fmt::format("draws             {}\n", *d.draws());
      out << fmt::format("tau               {}\n", num(m.tau));
      out << fmt::format("mean tau_hat      {}\n", num(mean_tau));
      out << fmt::format("var tau_hat       {} (formula {})\n", num(var_tau), num(formula_var));
      out << fmt::format("mean A - N1 tau   {}\n", num(mean_err));
      out << fmt::format("var A - N1 tau    {} (formula {})\n", num(var_err), num(formula_mse));
      break;
    case Format::csv:
      out << schema_line("mfci.simulate") << "# source: " << source << "\n"
          << "n11,n10,n01,n00,probability,tau_hat,A\n";
      for (const auto& oc : d.outcomes()) {
        out << fmt::format("{},{},{},{},{},{},{}\n", oc.observed.n11(), oc.observed.n10(),
                           oc.observed.n01(), oc.observed.n00(), num(to_double(oc.probability)),
                           num(to_double(oc.tau_hat)), oc.attributable);
      }
      break;
    case Format::json: {
      json j{{"schema", "mfci.simulate/v1"},
             {"input", {{"command", "simulate"}, {"science", o.science.cells}, {"n1", o.n1},
                        {"draws", o.draws}, {"seed", o.seed}, {"exact", o.exact}}},
             {"source", source},
             {"tau", jnum(m.tau)},
             {"mean_tau_hat", jnum(mean_tau)},
             {"var_tau_hat", jnum(var_tau)},
             {"var_tau_hat_formula", jnum(formula_var)},
             {"mean_prediction_error", jnum(mean_err)},
             {"var_prediction_error", jnum(var_err)},
             {"var_prediction_error_formula", jnum(formula_mse)}};
      out << j.dump(2) << "\n";
      break;
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomization-based inference for binary-outcome completely randomized experiments",
               "mfci"};
  app.require_subcommand(1);

  const std::string table_help = "Observed counts n11 n10 n01 n00 (treated-success, "
                                 "treated-failure, control-success, control-failure)";

  EstimateOpts est;
  auto* c_est = app.add_subcommand("estimate", "Moment point estimate and normal intervals for tau");
  add_table(c_est, est.table, table_help);
  c_est->add_option("--method", est.method, "neyman, conventional, improved, sensitivity or all")
      ->check(CLI::IsMember({"neyman", "conventional", "improved", "sensitivity", "all"}));
  c_est->add_option("--n01", est.n01, "Hypothesized number of harmed units")->check(CLI::NonNegativeNumber);
  c_est->add_option("--level", est.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  add_format(c_est, est.format);

  SensitivityOpts sen;
  auto* c_sen = app.add_subcommand("sensitivity", "Sweep the number of harmed units n01");
  add_table(c_sen, sen.table, table_help);
  c_sen->add_option("--n01-max", sen.n01_max, "Largest n01, or 'auto' for the plug-in bound");
  c_sen->add_option("--n01", sen.n01_values, "Explicit n01 values (overrides --n01-max)")
      ->delimiter(',');
  c_sen->add_option("--assumption", sen.assumption, "Bound used by --n01-max auto")
      ->transform(CLI::CheckedTransformer(kAssumptions, CLI::ignore_case));
  c_sen->add_option("--level", sen.level, "Confidence / credibility level")->check(CLI::Range(0.0, 1.0));
  add_format(c_sen, sen.format);

  PosteriorOpts pos;
  auto* c_pos = app.add_subcommand("posterior", "Posterior curve of tau or A under a fixed n01");
  add_table(c_pos, pos.table, table_help);
  c_pos->add_option("--n01", pos.n01, "Number of harmed units (repeat or comma-separate for several)")
      ->delimiter(',');
  c_pos->add_option("--target", pos.target, "tau or A")->check(CLI::IsMember({"tau", "A"}));
  c_pos->add_option("--prior-file", pos.prior_file, "CSV of n10,n11,weight (default: uniform)");
  c_pos->add_option("--level", pos.level, "HPD level")->check(CLI::Range(0.0, 1.0));
  add_format(c_pos, pos.format);

  AttributableOpts att;
  auto* c_att = app.add_subcommand("attributable", "Exact, Neyman and Bayes inference for A");
  add_table(c_att, att.table, table_help);
  c_att->add_option("--alpha", att.alpha, "Test-inversion significance level")->check(CLI::Range(0.0, 1.0));
  c_att->add_option("--level", att.level, "Prediction / HPD level")->check(CLI::Range(0.0, 1.0));
  c_att->add_option("--n01", att.n01, "Harmed units for the posterior of A")->check(CLI::NonNegativeNumber);
  c_att->add_flag("--compat-paper-mse", att.compat_paper_mse,
                  "Use p1(1-p1) instead of p0(1-p0) in the prediction MSE");
  c_att->add_flag("--curve", att.curve, "Emit standardized p-values beside the posterior of A");
  add_format(c_att, att.format);

  VerifyOpts ver;
  auto* c_ver = app.add_subcommand("verify", "Check every formula against exact enumeration");
  c_ver->add_option("--max-n", ver.max_n, "Largest population size")->check(CLI::Range(2, 64));
  c_ver->add_option("--seed", ver.seed, "Seed for the Monte Carlo checks");
  c_ver->add_option("--inject-fault", ver.fault, "Mutation test: none or variance-off-by-one")
      ->check(CLI::IsMember({"none", "variance-off-by-one"}));
  add_format(c_ver, ver.format);

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand("simulate", "Randomization distribution for a Science table");
  add_table(c_sim, sim.science, "Science counts N11 N10 N01 N00");
  c_sim->add_option("--n1", sim.n1, "Treated arm size")->required();
  c_sim->add_option("--draws", sim.draws, "Monte Carlo draws");
  c_sim->add_option("--seed", sim.seed, "PRNG seed");
  c_sim->add_flag("--exact", sim.exact, "Enumerate instead of sampling");
  c_sim->add_flag("--normality", sim.normality, "Report the normal-approximation distance");
  add_format(c_sim, sim.format);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("mfci");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_est->parsed()) return cmd_estimate(est, out);
    if (c_sen->parsed()) return cmd_sensitivity(sen, out);
    if (c_pos->parsed()) return cmd_posterior(pos, out);
    if (c_att->parsed()) return cmd_attributable(att, out);
    if (c_ver->parsed()) return cmd_verify(ver, out);
    if (c_sim->parsed()) return cmd_simulate(sim, out);
  } catch (const PriorFileError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  }
  return kUsage;
}

}  // namespace mfci::cli
