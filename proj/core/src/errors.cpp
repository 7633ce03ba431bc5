#include "proxkit/errors.hpp"

namespace proxkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kZeroOperator: return "zero-operator error";
    case ErrorKind::kCapability: return "capability error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kReference: return "reference error";
    case ErrorKind::kSampling: return "sampling error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace proxkit
