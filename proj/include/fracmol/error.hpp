// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fracmol {

/// Raised when an argument or configuration lies outside its valid domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot produce a trustworthy result.
class NumericError : public std::runtime_error {
 public:
  enum class Kind {
    NonConvergent,     // Mellin-Barnes integral diverges for these parameters
    PoleCollision,     // a Gamma pole is shared by both pole families
    NoSeparatingLine,  // families interleave, no vertical contour separates them
    ToleranceNotMet,   // contour truncation or panel error above tolerance
    BracketNotFound,   // no interior maximum inside the scan range
    ConsistencyCheck,  // an internal cross-check between two routes failed
    DegenerateFit,     // too few usable points for a regression
  };

  NumericError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Throws DomainError with `message` unless `condition` holds.
inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace fracmol
