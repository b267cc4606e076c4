#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace foliage {

/// A model definition violates a structural rule (dimensions, domain, ranks).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies outside the strict interior of a chart domain.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed frame-coefficient expression. `position` is a 0-based column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position, const std::string& context = {})
      : std::runtime_error((context.empty() ? "" : context + ": ") + "column " + std::to_string(position + 1) + ": " +
                           message),
        message_(message),
        position_(position) {}

  /// Same error, prefixed with where the offending text came from.
  ParseError withContext(const std::string& context) const { return ParseError(message_, position_, context); }

  std::size_t position() const { return position_; }

 private:
  std::string message_;
  std::size_t position_;
};

}  // namespace foliage
