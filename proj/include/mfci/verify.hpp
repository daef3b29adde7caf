#pragma once

// Oracle-versus-formula identity suite over every Science table up to a
// population size, plus a seeded Monte Carlo spot check.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfci/oracle.hpp"

namespace mfci {

enum class InjectedFault {
  none,
  // Replaces N/(N-1) by N/N in the tau_hat variance formula under test.
  variance_off_by_one,
};

struct VerifyOptions {
  Count max_n = 8;
  std::uint64_t seed = 20160101;
  std::uint64_t mc_draws = 20'000;
  std::uint64_t cap = kDefaultEnumerationCap;
  InjectedFault fault = InjectedFault::none;
};

struct VerifyFailure {
  std::string check;
  ScienceTable science;
  Count treated;
  std::string detail;
};

struct VerifyReport {
  std::map<std::string, std::uint64_t> passed;  // per check name
  std::map<std::string, std::uint64_t> failed;
  std::vector<VerifyFailure> failures;  // first few hundred, in run order
  std::uint64_t science_tables = 0;
  std::uint64_t designs = 0;  // (science, N1) pairs
  std::string prng;

  bool ok() const { return failed.empty(); }
};

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace mfci
