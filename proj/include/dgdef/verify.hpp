#ifndef DGDEF_VERIFY_HPP
#define DGDEF_VERIFY_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgdef/algebra.hpp"
#include "json.hpp"

namespace dgdef {

enum class Status { verified, refuted, inconclusive_truncation };
std::string status_name(Status s);
// 0 verified, 2 refuted, 3 inconclusive-truncation.
int exit_code(Status s);

struct Evidence {
  std::string claim;
  bool holds = false;
  bool certified = false;  // exact certificate, not a bounded observation
  std::string witness;
  nlohmann::json to_json() const;
};

struct VerificationReport {
  std::string id;
  std::string kind;  // "example" or "suite"
  Status status = Status::inconclusive_truncation;
  std::vector<Evidence> evidence;
  std::string truncation;
  std::vector<std::string> notes;
  double wall_ms = 0;
  std::optional<std::uint64_t> seed;
  int trials = 0;
  int passed = 0;
  std::optional<std::string> counterexample;  // shrunk failing input

  Evidence* find(const std::string& claim);
  nlohmann::json to_json() const;
};

struct ExampleOptions {
  std::optional<int> max_wordlen;
  std::optional<std::pair<int, int>> window;
};

const std::vector<std::string>& example_ids();
const std::vector<std::string>& suite_names();

// Raises UnknownExample.
VerificationReport run_example(const std::string& id, const ExampleOptions& opts = {});
// Raises UnknownSuite; trials >= 1.
VerificationReport run_suite(const std::string& name, int trials, std::uint64_t seed);

AlgPtr parse_algebra_file(const std::filesystem::path& path);

// Per-trial seed from a suite seed (splitmix64).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

}  // namespace dgdef

#endif
