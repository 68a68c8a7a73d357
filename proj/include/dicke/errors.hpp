#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dicke {

enum class ErrorKind {
  InvalidParameter,
  InvalidDistribution,
  InvalidInput,
  Index,
  Domain,
  Numerical,
  Bracket,
  Cutoff,
  Capacity,
  Critical,
  InsufficientData,
  Internal,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Name of the offending field, mode or bound when one applies.
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

}  // namespace dicke
