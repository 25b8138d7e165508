#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace posext {

enum class ErrorKind {
  NonHermitianInput,
  DimensionMismatch,
  NonFiniteEntry,
  IdentityNotInSpan,
  NotSelfAdjointClosed,
  NonHermitianGenerator,
  ClosureNotReached,
  NotInDomain,
  DomainNotFull,
  NotInProductSpan,
  NotPositiveAtIdentity,
  ZeroMap,
  InconsistentAffine,
  BadCompositeDimension,
  InvalidSpec,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; `kind()` identifies the failed
// precondition so callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace posext
