#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rule.hpp"
#include "words.hpp"

namespace lrswap {

/// One verified statement. A failed exact check carries the basis word at
/// which the two sides differ.
struct CheckResult {
  std::string name;
  std::string category;  // "structure", "reducibility", "ybe", "bc-sum", "scatter"
  bool pass = false;
  std::optional<Word> witness;
  std::optional<double> discrepancy;
  std::optional<std::uint64_t> seed;
};

struct IdentityReport {
  RuleType rule = RuleType::DropPushType;
  int particles = 0;  // n
  int species = 0;    // N
  std::vector<CheckResult> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }

  std::vector<const CheckResult*> failures(const std::string& category = {}) const {
    std::vector<const CheckResult*> out;
    for (const auto& c : checks)
      if (!c.pass && (category.empty() || c.category == category)) out.push_back(&c);
    return out;
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace lrswap
