#pragma once

#include <stdexcept>
#include <string>

namespace regemp {

enum class ErrorKind {
  // panel ingestion
  MissingColumn,
  NonPositiveEmployment,
  NonPositiveValue,
  UnbalancedPanel,
  NonContiguousYears,
  TotalsInconsistent,
  // feature construction
  NonPositiveLogArgument,
  InsufficientYears,
  RankDeficientByConstruction,
  UnknownUnitInExclusionList,
  // solver
  AllColumnsDropped,
  DegreesOfFreedomExhausted,
  // estimators
  InsufficientConsecutiveYears,
  // diagnostics
  MissingSymbol,
  SingularCovarianceDifference,
  EmptyUnit,
  // synthetic generator
  DegenerateState,
  // config / io
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind);

/// All domain failures are thrown as Error; `kind()` identifies the
/// contract that was violated, `what()` carries the offending cell or term.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonPositiveEmployment: return "NonPositiveEmployment";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::UnbalancedPanel: return "UnbalancedPanel";
    case ErrorKind::NonContiguousYears: return "NonContiguousYears";
    case ErrorKind::TotalsInconsistent: return "TotalsInconsistent";
    case ErrorKind::NonPositiveLogArgument: return "NonPositiveLogArgument";
    case ErrorKind::InsufficientYears: return "InsufficientYears";
    case ErrorKind::RankDeficientByConstruction: return "RankDeficientByConstruction";
    case ErrorKind::UnknownUnitInExclusionList: return "UnknownUnitInExclusionList";
    case ErrorKind::AllColumnsDropped: return "AllColumnsDropped";
    case ErrorKind::DegreesOfFreedomExhausted: return "DegreesOfFreedomExhausted";
    case ErrorKind::InsufficientConsecutiveYears: return "InsufficientConsecutiveYears";
    case ErrorKind::MissingSymbol: return "MissingSymbol";
    case ErrorKind::SingularCovarianceDifference: return "SingularCovarianceDifference";
    case ErrorKind::EmptyUnit: return "EmptyUnit";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace regemp
