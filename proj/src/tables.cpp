#include "mfci/tables.hpp"

#include <algorithm>

namespace mfci {

ScienceTable::ScienceTable(Count n11, Count n10, Count n01, Count n00)
    : n11_(n11), n10_(n10), n01_(n01), n00_(n00) {
  if (n11 < 0 || n10 < 0 || n01 < 0 || n00 < 0) {
    throw InvalidInput("science table counts must be nonnegative");
  }
  if (total() < 2) throw InvalidInput("science table needs at least two units");
}

ObservedTable::ObservedTable(Count n11, Count n10, Count n01, Count n00)
    : n11_(n11), n10_(n10), n01_(n01), n00_(n00) {
  if (n11 < 0 || n10 < 0 || n01 < 0 || n00 < 0) {
    throw InvalidInput("observed counts must be nonnegative");
  }
  if (treated() < 1) throw InvalidInput("treatment arm is empty");
  if (control() < 1) throw InvalidInput("control arm is empty");
}

ScienceTable ParameterPoint::science(Count total) const {
  return ScienceTable(n11, n10, n01, total - n11 - n10 - n01);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::neyman: return "neyman";
    case Method::conventional: return "conventional";
    case Method::improved: return "improved";
    case Method::sensitivity: return "sensitivity";
    case Method::bayes_hpd: return "bayes-hpd";
    case Method::exact_inversion: return "exact-inversion";
    case Method::prediction: return "prediction";
  }
  return "unknown";
}

Margins derived_margins(const ScienceTable& t) {
  const double n = static_cast<double>(t.total());
  Margins m{};
  m.p1 = static_cast<double>(t.n11() + t.n10()) / n;
  m.p0 = static_cast<double>(t.n11() + t.n01()) / n;
  m.tau = static_cast<double>(t.n10() - t.n01()) / n;
  m.s = t.s();
  return m;
}

std::vector<ParameterPoint> monotone_support(const ObservedTable& obs) {
  const Count n = obs.total();
  const Count successes = obs.n11() + obs.n01();
  std::vector<ParameterPoint> out;
  out.reserve(static_cast<std::size_t>((obs.n11() + 1) * (obs.n00() + 1)));
  for (Count n11 = obs.n01(); n11 <= successes; ++n11) {
    for (Count sum = successes; sum <= n - obs.n10(); ++sum) {
      out.push_back({sum - n11, n11, 0});
    }
  }
  return out;
}

bool in_general_support(const ObservedTable& obs, const ParameterPoint& p) {
  const Count n = obs.total();
  const Count k = p.n01;
  if (k < 0 || p.n10 < 0 || p.n11 < 0) return false;
  // N00 >= 0, and harmed units must fit in the two mixed observed cells.
  if (p.n10 + p.n11 + k > n) return false;
  if (k > obs.n10() + obs.n01()) return false;

  const Count n11_lo = std::max<Count>(0, obs.n01() - k);
  const Count n11_hi = std::min(obs.n01() + obs.n11(), n - obs.n00() - k);
  if (p.n11 < n11_lo || p.n11 > n11_hi) return false;
  if (p.n10 > n - obs.n01() - obs.n10()) return false;
  const Count sum = p.n10 + p.n11;
  const Count sum_lo = std::max(obs.n11() + obs.n01() - k, obs.n11());
  return sum >= sum_lo && sum <= n - obs.n10();
}

std::vector<ParameterPoint> general_support(const ObservedTable& obs, Count n01) {
  if (n01 < 0) throw InvalidInput("n01 must be nonnegative");
  std::vector<ParameterPoint> out;
  const Count n = obs.total();
  for (Count n11 = 0; n11 <= n - n01; ++n11) {
    for (Count n10 = 0; n10 + n11 + n01 <= n; ++n10) {
      ParameterPoint p{n10, n11, n01};
      if (in_general_support(obs, p)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace mfci
