#pragma once

#include <stdexcept>
#include <string>

namespace limsup {

// Argument outside the mathematical domain of an operation (negative radius,
// exponent outside [0, total(s)], probability outside [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a structural precondition (mismatched dimensions, unsorted
// blocks, ...). Indicates a programming error rather than bad data.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The requested quantity cannot be decided from the information available,
// e.g. a critical exponent for a finite schedule with no declared tail.
class Undecidable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace limsup
