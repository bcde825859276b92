#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace yfwl {

enum class ErrorKind {
  // validation / configuration
  UnknownColumn,
  OverlappingRoles,
  OrderConditionViolated,
  NotExactlyIdentified,
  EmptyInterestSet,
  InvalidConfig,
  ParseError,
  EmptyFile,
  DuplicateHeader,
  MissingValue,
  // numerical
  RankDeficient,
  NotPositiveDefinite,
  SingularSystem,
  MissingLeverages,
  LeverageAtOne,
  SingleCluster,
  ZeroResidual,
};

std::string_view to_string(ErrorKind kind);

/// True for failures caused by the input configuration rather than the
/// numerics of a particular data set.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  // Index payload: offending column for RankDeficient, observation for
  // ZeroResidual / LeverageAtOne, line for ParseError. -1 when unused.
  long index() const noexcept { return index_; }
  long column() const noexcept { return column_; }

  Error& with_index(long index) {
    index_ = index;
    return *this;
  }
  Error& with_column(long column) {
    column_ = column;
    return *this;
  }

 private:
  ErrorKind kind_;
  long index_ = -1;
  long column_ = -1;
};

}  // namespace yfwl
