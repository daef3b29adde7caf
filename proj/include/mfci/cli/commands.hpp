#pragma once

// Command-line front end. `run` is the whole program minus process setup, so
// tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mfci/bayes.hpp"

namespace mfci::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInfeasible = 2,
  kVerificationFailed = 3,
};

// Environment variable overriding the oracle enumeration cap.
inline constexpr const char* kCapEnv = "MFCI_ENUM_CAP";

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

class PriorFileError : public std::runtime_error {
 public:
  PriorFileError(const std::string& path, std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Reads `n10,n11,weight` rows (header line and `#` comments allowed). Every
// malformed row is reported, not just the first.
Prior read_prior_file(const std::string& path, Count n01);
Prior parse_prior(std::istream& in, const std::string& source, Count n01);

}  // namespace mfci::cli
