#pragma once

#include <stdexcept>
#include <string>

namespace depthrefine {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto process exit codes (see README).
enum class ErrorCode {
  InvalidArgument,      // violated precondition or type invariant
  DegenerateRay,        // sigma transform anchored at the camera origin
  BehindCamera,         // projection of a point with z <= 0
  EmptyGeometry,        // mesh without triangles
  NoOverlap,            // rendered support and valid real pixels are disjoint
  DegenerateScene,      // RANSAC consensus below the configured fraction
  Numerical,            // non-finite objective
  NoFeasibleCandidate,  // every grasp candidate was filtered out
  Io,                   // file could not be opened or written
  ParseSyntax,          // malformed text record (OBJ / JSON)
  ParseIndexRange,      // OBJ face index outside the vertex list
  ParseMagic,           // PFM/PGM header magic mismatch
  ParseDimensions,      // non-positive or overflowing image dimensions
  ParseTruncated,       // payload shorter than the header announces
  ParseEndianness,      // big-endian PFM scale header
};

const char* to_string(ErrorCode code) noexcept;

inline bool is_parse_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseSyntax:
    case ErrorCode::ParseIndexRange:
    case ErrorCode::ParseMagic:
    case ErrorCode::ParseDimensions:
    case ErrorCode::ParseTruncated:
    case ErrorCode::ParseEndianness:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace depthrefine
