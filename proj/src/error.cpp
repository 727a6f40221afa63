#include "flunow/error.hpp"

namespace flunow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSeries: return "InvalidSeries";
    case ErrorCode::InvalidWeek: return "InvalidWeek";
    case ErrorCode::InvalidShift: return "InvalidShift";
    case ErrorCode::EmptyOverlap: return "EmptyOverlap";
    case ErrorCode::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::InvalidDof: return "InvalidDof";
    case ErrorCode::Underdetermined: return "Underdetermined";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::MissingQuery: return "MissingQuery";
    case ErrorCode::NoUsableQuery: return "NoUsableQuery";
    case ErrorCode::InvalidPanel: return "InvalidPanel";
    case ErrorCode::InvalidUtf8: return "InvalidUtf8";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonContiguousAfterFill: return "NonContiguousAfterFill";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::GapInCases: return "GapInCases";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, const std::string& location) {
  std::string out(to_string(code));
  if (!location.empty()) out += " at " + location;
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string location)
    : std::runtime_error(compose(code, message, location)),
      code_(code),
      location_(std::move(location)),
      detail_(message) {}

}  // namespace flunow
