#pragma once

#include <stdexcept>
#include <string>

namespace banditkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (bad parameter, arm out of
// range, reward outside [0,1], ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// All arm means are equal, so the minimal positive gap does not exist.
class DegenerateEnvironment : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

// The infimum divergence is +inf (best mean is 1).
class InfiniteDivergence : public Error {
 public:
  using Error::Error;
};

// Requested a computation that only exists for Bernoulli arms.
class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

}  // namespace banditkit
