#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quadmet {

enum class Errc {
  InvalidArgument,
  NonSymmetric,
  NonzeroDiagonal,
  NonpositiveOffDiagonal,
  NegativeEntry,
  DuplicatePoint,
  NotATree,
  AlphaOutOfRange,
  NonpositiveScale,
  SyntaxError,
  UnknownVariable,
  DivisionByZero,
  DomainError,
  NonFiniteResult,
  UnvalidatedFunction,
  QBelowOne,
  NonDistinctTetrad,
  TooFewPoints,
  PreconditionUnmet,
  MapVerificationFailed,
  ParseError,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::NonpositiveOffDiagonal: return "NonpositiveOffDiagonal";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::NotATree: return "NotATree";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::NonpositiveScale: return "NonpositiveScale";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::DomainError: return "DomainError";
    case Errc::NonFiniteResult: return "NonFiniteResult";
    case Errc::UnvalidatedFunction: return "UnvalidatedFunction";
    case Errc::QBelowOne: return "QBelowOne";
    case Errc::NonDistinctTetrad: return "NonDistinctTetrad";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::PreconditionUnmet: return "PreconditionUnmet";
    case Errc::MapVerificationFailed: return "MapVerificationFailed";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(Errc code, const std::string& message, std::size_t offset = npos)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        offset_(offset) {}

  Errc code() const noexcept { return code_; }

  // Byte offset into the source text; meaningful for parser errors only.
  std::size_t offset() const noexcept { return offset_; }

 private:
  Errc code_;
  std::size_t offset_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message,
                              std::size_t offset = Error::npos) {
  throw Error(code, message, offset);
}

}  // namespace quadmet
