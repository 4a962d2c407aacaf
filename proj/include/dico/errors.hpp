#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dico {

/// Composition or application with mismatched endpoints.
class EndpointError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A family, tuple or table whose shape does not match its declared type.
class ShapeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Out-of-range element or object index.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Input data violating the laws of its declared structure.
class LawError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised instead of silently truncating an enumeration.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, std::uint64_t requested, std::uint64_t limit)
      : std::runtime_error(what + ": " + std::to_string(requested) +
                           " exceeds enumeration budget " + std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t requested_;
  std::uint64_t limit_;
};

/// Invalid experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dico
