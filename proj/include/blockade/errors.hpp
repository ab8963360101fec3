#pragma once

#include <stdexcept>

namespace blockade {

// One exception type per failure mode so callers (notably the sweep engine,
// which turns solver errors into row flags) can branch on what went wrong.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitianError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct StepTooLargeError : Error { using Error::Error; };
struct ZeroChiError : Error { using Error::Error; };
struct NoPhotonsError : Error { using Error::Error; };
struct PositivityViolationError : Error { using Error::Error; };
struct TruncationTooSmallError : Error { using Error::Error; };
struct InvalidParamsError : Error { using Error::Error; };

}  // namespace blockade
