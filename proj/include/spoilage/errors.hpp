#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spoilage {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data or configuration. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// A broken internal contract (shape mismatch, NaN in a network, misuse of an
// API). The CLI maps these to exit code 3.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NonFiniteField : public DataError {
 public:
  explicit NonFiniteField(std::string field)
      : DataError("non-finite value in field '" + field + "'"), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class InvalidConfig : public DataError {
 public:
  using DataError::DataError;
};

class CorruptCheckpoint : public DataError {
 public:
  explicit CorruptCheckpoint(const std::string& what) : DataError("checkpoint: " + what) {}
};

class EmptyDataset : public DataError {
 public:
  EmptyDataset() : DataError("dataset has no rows") {}
};

class EmptyInput : public DataError {
 public:
  explicit EmptyInput(const std::string& what) : DataError(what + ": empty input") {}
};

class LengthMismatch : public DataError {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : DataError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class TooFewLosses : public DataError {
 public:
  TooFewLosses(std::size_t have, std::size_t need)
      : DataError("need at least " + std::to_string(need) + " losses, have " +
                  std::to_string(have)) {}
};

class TooFewRecords : public DataError {
 public:
  explicit TooFewRecords(std::size_t have)
      : DataError("need at least 2 records, have " + std::to_string(have)) {}
};

// Errors tied to a line of an input file (1-based line numbers).
class LineError : public DataError {
 public:
  LineError(const std::string& what, std::size_t line)
      : DataError(what + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MalformedHeader : public LineError {
 public:
  MalformedHeader() : LineError("malformed CSV header", 1) {}
};

class MalformedRow : public LineError {
 public:
  explicit MalformedRow(std::size_t line) : LineError("malformed CSV row", line) {}
};

class LevelOutOfRange : public LineError {
 public:
  explicit LevelOutOfRange(std::size_t line) : LineError("spoilage level out of range", line) {}
};

class MalformedLine : public LineError {
 public:
  explicit MalformedLine(std::size_t line) : LineError("malformed serial log line", line) {}
};

class SteppedAfterDone : public InvariantViolation {
 public:
  SteppedAfterDone() : InvariantViolation("step() called on a finished episode") {}
};

class ShapeMismatch : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class MissingCache : public InvariantViolation {
 public:
  MissingCache() : InvariantViolation("backward() called without a matching forward cache") {}
};

class EmptyBatch : public InvariantViolation {
 public:
  EmptyBatch() : InvariantViolation("empty training batch") {}
};

class InsufficientExperience : public InvariantViolation {
 public:
  InsufficientExperience(std::size_t have, std::size_t need)
      : InvariantViolation("replay buffer holds " + std::to_string(have) +
                           " transitions, batch needs " + std::to_string(need)) {}
};

class NonFiniteValue : public InvariantViolation {
 public:
  explicit NonFiniteValue(const std::string& where)
      : InvariantViolation("non-finite value produced in " + where) {}
};

}  // namespace spoilage
