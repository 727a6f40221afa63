#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flunow {

enum class ErrorCode {
  InvalidArgument,
  InvalidSeries,
  InvalidWeek,
  InvalidShift,
  EmptyOverlap,
  InsufficientOverlap,
  EmptySlice,
  NegativeValue,
  ZeroVariance,
  TooFewPairs,
  InvalidDof,
  Underdetermined,
  SingularDesign,
  MissingQuery,
  NoUsableQuery,
  InvalidPanel,
  InvalidUtf8,
  MalformedHeader,
  MalformedRow,
  NonContiguousAfterFill,
  ValueOutOfRange,
  GapInCases,
  NegativeCount,
  DuplicateEntry,
  EmptyQuery,
  InvalidConfig,
  InvalidLabel,
  OutOfRange,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Structured failure raised by every fallible operation in the library.
/// `location()` is empty unless the error points at input data (e.g. "line 7").
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string location = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& location() const noexcept { return location_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string location_;
  std::string detail_;
};

}  // namespace flunow
