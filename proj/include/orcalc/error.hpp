#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orcalc {

enum class ErrorKind {
  DimensionMismatch,
  NotPositive,
  NoSolution,
  NotInRange,
  NotContraction,
  Overlap,
  RangeMismatch,
  Singular,
  DomainNotFull,
  NotOptimal,
  NullspaceViolation,
  NotInDomain,
  NotSpanning,
  NotWeaklyComplementable,
  WrongNullspace,
  InadmissibleW,
  NotMember,
  NotBSymmetric,
  ParseError,
  NotHermitian,
  BadModel,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NotInRange: return "NotInRange";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::Overlap: return "Overlap";
    case ErrorKind::RangeMismatch: return "RangeMismatch";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DomainNotFull: return "DomainNotFull";
    case ErrorKind::NotOptimal: return "NotOptimal";
    case ErrorKind::NullspaceViolation: return "NullspaceViolation";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::NotSpanning: return "NotSpanning";
    case ErrorKind::NotWeaklyComplementable: return "NotWeaklyComplementable";
    case ErrorKind::WrongNullspace: return "WrongNullspace";
    case ErrorKind::InadmissibleW: return "InadmissibleW";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::NotBSymmetric: return "NotBSymmetric";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::BadModel: return "BadModel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace orcalc
