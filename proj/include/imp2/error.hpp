#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imp2 {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Source text does not derive from the grammar. Carries the byte offset of
/// the offending token and a description of what was expected there.
class ParseError : public Error {
public:
  ParseError(std::size_t offset, std::string expected, std::string found)
      : Error("syntax error at byte " + std::to_string(offset) + ": expected " +
              expected + ", found " + found),
        offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::string expected_;
};

/// Bit string is not a well-formed self-delimiting program prefix.
class DecodeError : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Aggregates that cannot be merged (metadata or partition coverage).
class MergeError : public Error {
public:
  using Error::Error;
};

/// Correlation with n < 2 or zero variance on one side.
class UndefinedCorrelation : public Error {
public:
  using Error::Error;
};

/// No sampled program terminated under the provisional budget.
class NoTermination : public Error {
public:
  using Error::Error;
};

} // namespace imp2
