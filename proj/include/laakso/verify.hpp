#pragma once

// Acceptance checks, grouped into suites. Every check is exact except the
// regularity spread, which is a floating ratio.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace laakso {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // exact values behind the verdict
};

struct VerifyConfig {
  std::uint64_t seed = 20231;
  std::optional<unsigned> depth;  // suite-specific scale, see suite_depth_help()
};

constexpr int kCriterionCount = 13;

std::string criterion_title(int id);

/// Throws std::invalid_argument for ids outside 1..kCriterionCount.
std::vector<CheckResult> run_criterion(int id, const VerifyConfig& config);

/// oracle, geodesics, kinks, parallel, constructions, porosity, regularity, census, all.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyConfig& config);

std::string suite_depth_help();

/// Columns: criterion,check,passed,detail.
void write_results_csv(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace laakso
