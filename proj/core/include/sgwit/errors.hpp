#pragma once

#include <stdexcept>
#include <string>

namespace sgwit {

/// Input and precondition errors: bad grammar, non-invertible input,
/// dimension or ring mismatch. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Text that does not parse under the ring/element/matrix/word grammars.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// An oracle enumeration exceeded its element budget (CLI exit code 3).
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// A proved invariant failed at runtime. Always a bug, never user error.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sgwit
