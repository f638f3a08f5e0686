#pragma once

#include <stdexcept>
#include <string>

namespace hidisc {

enum class ErrorCode {
  InvalidEdge,
  InvalidVertex,
  InvalidArgument,
  EmptySubgraph,
  CountOverflow,
  Parse,
  SizeLimit,
  TooSmall,
  ConstructionNotFound,
  Structure,
  Overlap,
  NotAComponent,
  StageCollision,
  ArityMismatch,
  UnknownPositiveCount,
  Precondition,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace hidisc
