#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sqss {

struct ChecklistItem {
  int id = 0;
  std::string name;
  std::string claim;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct Checklist {
  std::uint64_t seed = 0;
  std::vector<ChecklistItem> items;
  bool all_pass = false;
};

/// Runs the full quantitative validation suite: state algebra, honest
/// correlations and completeness for both protocols, both attacks, both
/// countermeasures, sampler/oracle agreement, and a byte-identical replay
/// of everything. Every expected value is either algebraically fixed or a
/// stated probability with an explicit sampling tolerance.
Checklist run_claim_suite(std::uint64_t seed);

}  // namespace sqss
