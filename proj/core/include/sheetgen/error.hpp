#pragma once

#include <stdexcept>
#include <string>

namespace sheetgen {

enum class ErrorCode {
  Parse,
  EmptyInput,
  DegenerateCloud,
  Containment,
  InvalidArgument,
  Domain,
  Numeric,
  InsufficientFeatures,
  AmbiguousSplit,
  EmptyCluster,
  NoPores,
  Division,
  EmptyInterval,
  OracleFailure,
  Io,
  Config,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code so the
/// pipeline can tag it with the stage that produced it.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Parse errors remember the 1-based line that failed.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace sheetgen
