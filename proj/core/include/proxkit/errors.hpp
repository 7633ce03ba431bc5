#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proxkit {

/// Failure categories shared by every module. The CLI maps these onto exit
/// codes, so the set is part of the public contract.
enum class ErrorKind {
  kInput,         // dimension mismatch, malformed arguments
  kZeroOperator,  // a linear operator that must be nonzero is zero
  kCapability,    // requested combination is outside the closed catalog
  kDomain,        // starting point outside the domain of a nonsmooth term
  kConfig,        // step schedule / solver configuration violates hypotheses
  kReference,     // a reference optimal value is inconsistent with a run
  kSampling,      // oracle could not find feasible competitors
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace proxkit
