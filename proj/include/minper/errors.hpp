#pragma once
#include <stdexcept>
#include <string>

namespace minper {

// Base of everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad caller input: malformed files, out-of-range arguments, dimension
// mismatches.  The CLI maps these to exit code 2.
struct InputError : Error {
    using Error::Error;
};

// The computation itself broke down (solver divergence, non-finite state).
// The CLI maps these to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

struct InvalidArgument : InputError { using InputError::InputError; };
struct MalformedNorm : InputError { using InputError::InputError; };
struct DimensionMismatch : InputError { using InputError::InputError; };
struct NonSquare : InputError { using InputError::InputError; };
struct DimensionTooSmall : InputError { using InputError::InputError; };
struct DimensionTooLarge : InputError { using InputError::InputError; };
struct NonpositiveL : InputError { using InputError::InputError; };
struct MissingL : InputError { using InputError::InputError; };
struct HorizonTooShort : InputError { using InputError::InputError; };
struct ComponentOutOfRange : InputError { using InputError::InputError; };
struct OddGridCount : InputError { using InputError::InputError; };
struct DegenerateBox : InputError { using InputError::InputError; };
struct ScalarFieldMismatch : InputError { using InputError::InputError; };
struct ParseError : InputError { using InputError::InputError; };
struct StepTooLarge : InputError { using InputError::InputError; };
struct ZeroEigenvalue : InputError { using InputError::InputError; };
struct NormNotComplexHomogeneous : InputError { using InputError::InputError; };
struct EmptyDifference : InputError { using InputError::InputError; };
struct ZeroDenominator : InputError { using InputError::InputError; };

struct RootSolverDiverged : NumericError { using NumericError::NumericError; };
struct NonfiniteState : NumericError { using NumericError::NumericError; };
struct VerificationFailed : NumericError { using NumericError::NumericError; };

// Contextual conditions: a caller may treat these as "no result" rather
// than failure (e.g. the bound check degrades to a vacuous report).
struct NoPeriodFound : Error { using Error::Error; };
struct ConstantSolution : Error { using Error::Error; };

} // namespace minper
