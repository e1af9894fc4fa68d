#pragma once

#include <string>
#include <string_view>

#include "errors.hpp"

namespace lrswap {

/// Interaction type of the two-particle boundary condition.
///   DropPushType     - equal species treat each other as stronger (jump over).
///   TasepType        - equal species block each other as in the ordinary TASEP.
///   NonIntegrableAlt - forward push / backward jump hybrid; algebra only.
enum class RuleType { DropPushType, TasepType, NonIntegrableAlt };

inline bool is_integrable(RuleType rule) { return rule != RuleType::NonIntegrableAlt; }

inline const char* to_string(RuleType rule) {
  switch (rule) {
    case RuleType::DropPushType: return "drop-push";
    case RuleType::TasepType: return "tasep";
    case RuleType::NonIntegrableAlt: return "non-integrable";
  }
  return "unknown";
}

inline RuleType parse_rule(std::string_view text) {
  if (text == "drop-push" || text == "droppush" || text == "DropPushType") return RuleType::DropPushType;
  if (text == "tasep" || text == "TasepType") return RuleType::TasepType;
  if (text == "non-integrable" || text == "nonintegrable" || text == "NonIntegrableAlt")
    return RuleType::NonIntegrableAlt;
  throw Error(ErrorKind::InvalidParameter, "unknown rule type '" + std::string(text) + "'");
}

inline void require_integrable(RuleType rule) {
  require(is_integrable(rule), ErrorKind::UnsupportedRule,
          "the non-integrable alternative has no well-defined multi-particle dynamics");
}

}  // namespace lrswap
