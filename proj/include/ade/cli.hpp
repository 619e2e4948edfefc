#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace ade::cli {

constexpr const char* kSchema = "ade-report/1";

enum ExitCode { kOk = 0, kVerificationFailed = 1, kBudgetOrIo = 2 };

struct RunConfig {
  std::string subcommand;
  std::string field = "Q";
  std::string type = "A2";
  std::string X = "0";
  std::uint64_t prime_bound = 100;
  std::vector<std::uint64_t> M_grid{10, 20, 40, 80, 160};
  int workers = 1;
  std::string out;
  std::vector<std::uint64_t> excluded_primes;
  bool exclude_set = false;
  std::string dump;
  std::string p;
  std::string b;
  std::string poly;
  std::string m = "1";
  std::string method = "auto";

  nlohmann::json to_json() const;
};

// Parses args (without the program name), runs the subcommand and writes the
// JSON report to cfg.out or to out. Usage errors go to err and return 2.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ade::cli
