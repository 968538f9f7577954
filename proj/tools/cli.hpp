#pragma once

#include <iosfwd>

#include "depthrefine/error.hpp"

namespace depthrefine::cli {

// Process exit codes. Each error class maps to exactly one code.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kParse = 3,
  kIo = 4,
  kInvalidInput = 5,
  kEmptyGeometry = 6,
  kNoOverlap = 7,
  kDegenerateScene = 8,
  kNumerical = 9,
  kNoFeasibleGrasp = 10,
};

int exit_code(ErrorCode code) noexcept;

// Entry point of the `depthrefine` binary; `out` receives primary output when
// no --out path is given, `err` receives diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace depthrefine::cli
