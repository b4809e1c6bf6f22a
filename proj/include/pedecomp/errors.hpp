#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pedecomp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed field expression. offset is a byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Field evaluation left its mathematical domain or produced a non-finite value.
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string subexpression)
      : Error(message + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

// Inconsistent game description (dimensions, radii, mode constraints).
class SpecError : public Error {
 public:
  using Error::Error;
};

// Grid construction or sizing problem, including unresolved targets.
class GridError : public Error {
 public:
  using Error::Error;
};

// The game cannot be split into per-pursuer subproblems.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

// A requested full-dimensional grid exceeds the node budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& message, double nodes, double budget)
      : Error(message), nodes_(nodes), budget_(budget) {}
  double nodes() const { return nodes_; }
  double budget() const { return budget_; }

 private:
  double nodes_;
  double budget_;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pedecomp
