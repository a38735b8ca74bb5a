#pragma once

#include <stdexcept>
#include <string>

namespace ergo {

// Base class for every error the library raises on purpose.  Catch this at
// the CLI boundary; anything else escaping is a bug.
struct ErgoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands belong to structurally different group descriptors.
struct GroupMismatch : ErgoError {
    using ErgoError::ErgoError;
};

// A cross-kind operation was requested, e.g. convolving a free-group measure
// with a finite-group measure.
struct DescriptorMismatch : ErgoError {
    using ErgoError::ErgoError;
};

// A signed letter index falls outside the rank of a free group.
struct LetterOutOfRange : ErgoError {
    using ErgoError::ErgoError;
};

// An iterated convolution grew past the configured support cap.
struct SupportCapExceeded : ErgoError {
    using ErgoError::ErgoError;
};

// Two spaces or vectors that must have equal size do not.
struct SizeMismatch : ErgoError {
    using ErgoError::ErgoError;
};

// A partition block id or atom index is out of bounds, or the blocks fail to
// cover the space.
struct BlockOutOfRange : ErgoError {
    using ErgoError::ErgoError;
};

// A constructed space would exceed the atom-count cap.
struct SizeCapExceeded : ErgoError {
    using ErgoError::ErgoError;
};

// A claimed cocycle fails the defining equation; the message carries a
// witness triple (g, h, x).
struct CocycleEquationViolated : ErgoError {
    using ErgoError::ErgoError;
};

// An operation that requires an ergodic action received a non-ergodic one.
struct NotErgodic : ErgoError {
    using ErgoError::ErgoError;
};

// An operation that requires an invariant function or partition received one
// that is not.
struct NotInvariant : ErgoError {
    using ErgoError::ErgoError;
};

// Inducing onto a partition block failed because some group element maps the
// block off itself.
struct OrbitNotPermuted : ErgoError {
    using ErgoError::ErgoError;
};

// An iterative solver hit its iteration cap before reaching tolerance.
struct IterationCapExceeded : ErgoError {
    using ErgoError::ErgoError;
};

// A tensor-product dimension would exceed the configured bound.
struct DimensionOverflow : ErgoError {
    using ErgoError::ErgoError;
};

// An exponent outside [1, inf] was passed to a p-norm.
struct BadExponent : ErgoError {
    using ErgoError::ErgoError;
};

// Malformed text input: measures, spaces, actions, configs.
struct ParseError : ErgoError {
    using ErgoError::ErgoError;
};

}  // namespace ergo
