#pragma once

#include <stdexcept>

namespace hoqmc {

// Invalid inputs and violated preconditions are reported with std::invalid_argument.

/// Raised when an enumeration or evaluation would exceed its configured work limit.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a result contradicts an invariant that must hold mathematically.
class InvariantFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hoqmc
