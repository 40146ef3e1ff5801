#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace magswim {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;      // worst observed quantity
  double threshold = 0.0;  // pass limit for `value`
  std::string relation;    // "<=", ">=" or "=="
  std::string detail;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
  nlohmann::ordered_json to_json() const;
};

inline constexpr std::uint64_t kDefaultValidationSeed = 20150601;

/// Cross-check suite over seeded random parameter sets. No wall-clock data
/// enters the report, so equal seeds give byte-identical output.
ValidationReport run_validation(std::uint64_t seed = kDefaultValidationSeed, int parameter_sets = 10);

}  // namespace magswim
