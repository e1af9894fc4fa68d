#pragma once

#include <stdexcept>
#include <string>

namespace lrswap {

enum class ErrorKind {
  InvalidParameter,
  ResourceLimit,
  Singularity,
  UnsupportedRule,
  NumericalInconsistency,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::UnsupportedRule: return "unsupported-rule";
    case ErrorKind::NumericalInconsistency: return "numerical-inconsistency";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace lrswap
