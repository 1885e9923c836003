#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iset {

/// Input outside an operation's mathematical domain (zero denominator,
/// composite prime, cosine outside [-1, 1], mismatched primes, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A declared enumeration or allocation budget was exceeded. Carries how
/// much work had been completed when the budget ran out.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t partial_count)
      : std::runtime_error(what), partial_count_(partial_count) {}

  std::uint64_t partial_count() const noexcept { return partial_count_; }

 private:
  std::uint64_t partial_count_;
};

}  // namespace iset
