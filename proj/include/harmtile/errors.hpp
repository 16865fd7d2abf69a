#pragma once
#include <stdexcept>
#include <string>

namespace harmtile {

// Exit-code buckets for the CLI (and coarse classification for callers).
enum class ErrorClass : int {
  Validation = 2,  // bad input / malformed complex / bad arcs
  Solver     = 3,  // linear system failures
  Index      = 4,  // ties, degenerate levels, index mismatches
  Tiling     = 5,  // decomposition / tiling / gluing failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), cls_(cls), kind_(std::move(kind)) {}
  ErrorClass cls() const { return cls_; }
  const std::string& kind() const { return kind_; }

 private:
  ErrorClass cls_;
  std::string kind_;
};

#define HARMTILE_ERROR_TYPE(NAME, CLASS)                      \
  class NAME : public Error {                                 \
   public:                                                    \
    explicit NAME(const std::string& msg)                     \
        : Error(ErrorClass::CLASS, #NAME, msg) {}             \
  };

HARMTILE_ERROR_TYPE(ParseError, Validation)
HARMTILE_ERROR_TYPE(ValidationError, Validation)
HARMTILE_ERROR_TYPE(UnknownVertex, Validation)
HARMTILE_ERROR_TYPE(NotBoundary, Validation)
HARMTILE_ERROR_TYPE(BadSubset, Validation)
HARMTILE_ERROR_TYPE(MissingValue, Validation)
HARMTILE_ERROR_TYPE(OutsideComplex, Validation)
HARMTILE_ERROR_TYPE(UnknownFixture, Validation)

HARMTILE_ERROR_TYPE(SingularSystem, Solver)
HARMTILE_ERROR_TYPE(SolverDivergence, Solver)

HARMTILE_ERROR_TYPE(TieError, Index)
HARMTILE_ERROR_TYPE(DegenerateLevel, Index)
HARMTILE_ERROR_TYPE(IndexMismatch, Index)
HARMTILE_ERROR_TYPE(SideUndefined, Index)

HARMTILE_ERROR_TYPE(ConsistencyViolation, Tiling)
HARMTILE_ERROR_TYPE(UnclassifiableComponent, Tiling)
HARMTILE_ERROR_TYPE(GluingMismatch, Tiling)
HARMTILE_ERROR_TYPE(CoverageGap, Tiling)
HARMTILE_ERROR_TYPE(OverlapDetected, Tiling)

#undef HARMTILE_ERROR_TYPE

}  // namespace harmtile
