#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace woms {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A walk position that admits no inscribed generalized spheroid.
class GeometryError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class StepLimitExceeded : public std::runtime_error {
  public:
    StepLimitExceeded(std::uint64_t limit, double position)
        : std::runtime_error("step limit " + std::to_string(limit) +
                             " exceeded at position " + std::to_string(position)),
          limit_(limit) {}

    [[nodiscard]] std::uint64_t limit() const noexcept { return limit_; }

  private:
    std::uint64_t limit_;
};

/// Failure of one replicate inside a batch; carries the replicate index.
class BatchError : public std::runtime_error {
  public:
    BatchError(std::size_t replicate, const std::string& what)
        : std::runtime_error("replicate " + std::to_string(replicate) + ": " + what),
          replicate_(replicate) {}

    [[nodiscard]] std::size_t replicate() const noexcept { return replicate_; }

  private:
    std::size_t replicate_;
};

/// Configuration rejected; `field` names the offending key, `constraint` the rule.
class ValidationError : public std::invalid_argument {
  public:
    ValidationError(std::string field, std::string constraint)
        : std::invalid_argument(field + ": " + constraint),
          field_(std::move(field)),
          constraint_(std::move(constraint)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] const std::string& constraint() const noexcept { return constraint_; }

  private:
    std::string field_;
    std::string constraint_;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace woms
