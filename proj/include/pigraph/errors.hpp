#pragma once

#include <stdexcept>
#include <string>

namespace pigraph {

// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Path composition was requested between paths whose endpoints do not meet.
struct NotComposableError : Error {
    using Error::Error;
};

// A cycle-only operation was handed a path that is not a cycle.
struct NotACycleError : Error {
    using Error::Error;
};

// A cylinder set lies outside the domain of the requested bisection action.
struct NotInDomainError : Error {
    using Error::Error;
};

// The decomposition precondition fails at the requested vertex.
struct NotDIError : Error {
    using Error::Error;
};

// Witness synthesis preconditions fail: the cylinder set is provably
// non-paradoxical at the requested vertex.
struct NotParadoxicalError : Error {
    using Error::Error;
};

// The exponent search exhausted its budget without a verified assignment.
struct SynthesisBudgetExceededError : Error {
    using Error::Error;
};

// Subset enumeration was asked to run on a graph above its size cap.
struct CapExceededError : Error {
    using Error::Error;
};

// A nonempty vertex set was required.
struct EmptySetError : Error {
    using Error::Error;
};

// The operation requires a sink-free graph.
struct SinksPresentError : Error {
    using Error::Error;
};

struct UnknownVertexError : Error {
    using Error::Error;
};

struct UnknownEdgeError : Error {
    using Error::Error;
};

// Input file could not be parsed; carries a byte offset when known.
struct ParseError : Error {
    explicit ParseError(const std::string& msg, std::size_t byte_offset = 0)
        : Error(msg), offset(byte_offset) {}
    std::size_t offset;
};

// An internal invariant that theorems guarantee was observed to fail.
// Seeing this exception always indicates a bug, never bad input.
struct InternalError : Error {
    using Error::Error;
};

} // namespace pigraph
