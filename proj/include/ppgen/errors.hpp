#pragma once

#include <stdexcept>
#include <string>

namespace ppgen {

// Invalid input to an operation: bad arguments, mismatched moduli, broken
// preconditions. The CLI maps these to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed request whose mathematics has no answer (inverse of zero,
// ramified prime, ...). The CLI maps these to exit code 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotAPermutation : public DomainError {
 public:
  using DomainError::DomainError;
};

// An exhaustive computation would exceed its configured state budget.
class BudgetExceeded : public DomainError {
 public:
  BudgetExceeded(const std::string& what, unsigned long long required, unsigned long long budget)
      : DomainError(what + ": requires " + std::to_string(required) + " states, budget is " +
                    std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  unsigned long long required() const noexcept { return required_; }
  unsigned long long budget() const noexcept { return budget_; }

 private:
  unsigned long long required_;
  unsigned long long budget_;
};

}  // namespace ppgen
