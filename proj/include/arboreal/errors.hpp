#pragma once

#include <stdexcept>
#include <string>

namespace arboreal {

// Base class for all library errors. The CLI maps subclasses to exit
// codes: InputError -> 2, CapExceeded -> 3, InvariantViolation -> 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad letters, bad matrices, parse errors).
struct InputError : Error {
    using Error::Error;
};

struct AlphabetMismatch : InputError {
    using InputError::InputError;
};

struct LetterOutOfRange : InputError {
    using InputError::InputError;
};

struct DegreeMismatch : InputError {
    using InputError::InputError;
};

struct NotUnimodular : InputError {
    using InputError::InputError;
};

struct BadIndices : InputError {
    using InputError::InputError;
};

struct BadParameters : InputError {
    using InputError::InputError;
};

struct PreconditionFailed : InputError {
    using InputError::InputError;
};

struct NotRepresentable : InputError {
    using InputError::InputError;
};

struct NotSymmetric : InputError {
    using InputError::InputError;
};

struct NotHomomorphism : InputError {
    using InputError::InputError;
};

struct ParseError : InputError {
    using InputError::InputError;
};

// A bounded search ran out of budget. Signals "not witnessed finite within
// the cap" rather than a definite negative.
struct CapExceeded : Error {
    using Error::Error;
};

// An identity that is guaranteed by theory failed to hold. Raising this
// means either a bug or a genuine counterexample; never swallow it.
struct InvariantViolation : Error {
    using Error::Error;
};

} // namespace arboreal
