#include "yfwl/error.hpp"

namespace yfwl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::OverlappingRoles: return "OverlappingRoles";
    case ErrorKind::OrderConditionViolated: return "OrderConditionViolated";
    case ErrorKind::NotExactlyIdentified: return "NotExactlyIdentified";
    case ErrorKind::EmptyInterestSet: return "EmptyInterestSet";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::DuplicateHeader: return "DuplicateHeader";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::MissingLeverages: return "MissingLeverages";
    case ErrorKind::LeverageAtOne: return "LeverageAtOne";
    case ErrorKind::SingleCluster: return "SingleCluster";
    case ErrorKind::ZeroResidual: return "ZeroResidual";
  }
  return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownColumn:
    case ErrorKind::OverlappingRoles:
    case ErrorKind::OrderConditionViolated:
    case ErrorKind::NotExactlyIdentified:
    case ErrorKind::EmptyInterestSet:
    case ErrorKind::InvalidConfig:
    case ErrorKind::ParseError:
    case ErrorKind::EmptyFile:
    case ErrorKind::DuplicateHeader:
    case ErrorKind::MissingValue:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace yfwl
