#pragma once

#include <stdexcept>
#include <string>

namespace ergopt {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// sft
struct StrandedSymbolError : Error { using Error::Error; };
struct NonPrimitiveError : Error { using Error::Error; };
struct RangeTooSmallError : Error { using Error::Error; };
struct NoCycleError : Error { using Error::Error; };
struct NotAdmissibleError : Error { using Error::Error; };

// maxplus
struct PositiveCycleError : Error { using Error::Error; };

// potential
struct MissingCylinderValueError : Error { using Error::Error; };
struct RangeMismatchError : Error { using Error::Error; };
struct WordTooShortError : Error { using Error::Error; };
struct NormalizationFailureError : Error { using Error::Error; };

// barriers
struct DiagonalNotNegativeError : Error { using Error::Error; };

// pressure
struct PrecisionError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };
struct InsufficientPointsError : Error { using Error::Error; };
struct EmptyTermListError : Error { using Error::Error; };

// oracle
struct TooLargeError : Error { using Error::Error; };

// io
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

} // namespace ergopt
