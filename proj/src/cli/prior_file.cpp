#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mfci/cli/commands.hpp"

namespace mfci::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  if (s.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
  } else {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += "\n  " + x;
  return s;
}

}  // namespace

PriorFileError::PriorFileError(const std::string& path, std::vector<std::string> problems)
    : std::runtime_error("malformed prior file " + path + ":" + join(problems)),
      problems_(std::move(problems)) {}

Prior parse_prior(std::istream& in, const std::string& source, Count n01) {
  std::map<ParameterPoint, double> weights;
  std::vector<std::string> problems;
  std::string line;
  int lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));

    if (header_allowed && fields.size() == 3 && fields[0] == "n10") {
      header_allowed = false;
      continue;
    }
    header_allowed = false;

    const std::string where = "line " + std::to_string(lineno) + ": '" + t + "'";
    Count n10 = 0;
    Count n11 = 0;
    double w = 0.0;
    if (fields.size() != 3) {
      problems.push_back(where + " (expected 3 fields n10,n11,weight)");
      continue;
    }
    if (!parse_number(fields[0], n10) || !parse_number(fields[1], n11) || n10 < 0 || n11 < 0) {
      problems.push_back(where + " (n10 and n11 must be nonnegative integers)");
      continue;
    }
    if (!parse_number(fields[2], w) || w < 0.0) {
      problems.push_back(where + " (weight must be a finite nonnegative number)");
      continue;
    }
    const ParameterPoint p{n10, n11, n01};
    if (weights.contains(p)) {
      problems.push_back(where + " (duplicate point)");
      continue;
    }
    weights[p] = w;
  }
  if (problems.empty() && weights.empty()) problems.push_back("no prior entries");
  if (problems.empty()) {
    bool positive = false;
    for (const auto& [p, w] : weights) positive = positive || w > 0.0;
    if (!positive) problems.push_back("every weight is zero");
  }
  if (!problems.empty()) throw PriorFileError(source, std::move(problems));
  return Prior::table(std::move(weights));
}

Prior read_prior_file(const std::string& path, Count n01) {
  std::ifstream in(path);
  if (!in) throw PriorFileError(path, {"cannot open file"});
  return parse_prior(in, path, n01);
}

}  // namespace mfci::cli
