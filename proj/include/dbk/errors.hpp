#pragma once

#include <stdexcept>
#include <string>

namespace dbk {

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series or iteration ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical rank decision fell inside the ambiguity window.
class IllConditionedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input violates a structural hypothesis (division property,
/// deficiency indices, zero-free conditions). `stage` names where.
class StructuralError : public std::runtime_error {
 public:
  StructuralError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Evaluation at a genuine pole (a point of the exceptional set).
class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dbk
