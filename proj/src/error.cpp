#include "hidisc/error.hpp"

namespace hidisc {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidEdge: return "invalid-edge";
    case ErrorCode::InvalidVertex: return "invalid-vertex";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::EmptySubgraph: return "empty-subgraph";
    case ErrorCode::CountOverflow: return "count-overflow";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::SizeLimit: return "size-limit";
    case ErrorCode::TooSmall: return "too-small";
    case ErrorCode::ConstructionNotFound: return "construction-not-found";
    case ErrorCode::Structure: return "structure";
    case ErrorCode::Overlap: return "overlap";
    case ErrorCode::NotAComponent: return "not-a-component";
    case ErrorCode::StageCollision: return "stage-collision";
    case ErrorCode::ArityMismatch: return "arity-mismatch";
    case ErrorCode::UnknownPositiveCount: return "unknown-positive-count";
    case ErrorCode::Precondition: return "precondition";
  }
  return "error";
}

}  // namespace hidisc
