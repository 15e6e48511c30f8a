#pragma once

#include <stdexcept>
#include <string>

namespace bcg {

// Root of every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed game, profile or player id.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An exact cost computation left the 128-bit range.
class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

// Exhaustive search was asked to walk more states than the configured cap.
class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

// An operation was called on input that violates its documented contract
// (e.g. partitioning a player that is not in equilibrium).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The transformation reached a state its invariants say is impossible.
// `diagnostic()` holds a JSON dump of the workspace at the point of failure.
class StructuralError : public Error {
 public:
  StructuralError(const std::string& what, std::string diagnostic)
      : Error(what), diagnostic_(std::move(diagnostic)) {}
  const std::string& diagnostic() const { return diagnostic_; }

 private:
  std::string diagnostic_;
};

class DominationViolation : public Error {
 public:
  using Error::Error;
};

// Game-file problems. The message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bcg
