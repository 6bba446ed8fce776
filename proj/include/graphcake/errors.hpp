#pragma once

#include <stdexcept>
#include <string>

namespace graphcake {

// Bad user input: unknown ids, points off the cake, malformed partitions,
// parameter violations. The CLI maps this to exit code 2.
struct InvalidInputError : std::runtime_error {
  explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// An exhaustive search ran out of its step budget. Exit code 3. Never a
// silent wrong answer.
struct BudgetExceededError : std::runtime_error {
  explicit BudgetExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

// A postcondition the algorithms promise failed to hold. Indicates a bug or
// an input that slipped past validation.
struct InternalCheckError : std::logic_error {
  explicit InternalCheckError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace graphcake
