#pragma once

#include <stdexcept>
#include <string>

namespace chu3 {

// Base class for all failures this library reports deliberately. Anything thrown
// that is not a chu3::Error indicates a bug in the library itself.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A pair of elements has no greatest lower bound, or an order table is not a
// meet semilattice for some other structural reason.
class NotALattice : public Error {
public:
    using Error::Error;
};

// The order has no unique least element.
class NoBottom : public Error {
public:
    using Error::Error;
};

// The cover relation is cyclic, so it does not describe a partial order.
class CycleDetected : public Error {
public:
    using Error::Error;
};

// A meet (or other aggregate that requires at least one operand) was requested
// over an empty collection.
class EmptySet : public Error {
public:
    using Error::Error;
};

// A valuation violates monotonicity; the message names a witnessing pair.
class NotMonotone : public Error {
public:
    using Error::Error;
};

// A valuation fails to commute with meets; the message names a witnessing pair.
class NotMeetPreserving : public Error {
public:
    using Error::Error;
};

// A candidate family is not an orthonormal basis; the message says which of the
// three defining conditions broke and where.
class NotABasis : public Error {
public:
    using Error::Error;
};

// A generator list exceeds the configured cap for an exponential-cost routine.
class GeneratorCapExceeded : public Error {
public:
    using Error::Error;
};

// An enumeration would exceed the configured size cap.
class EnumerationTooLarge : public Error {
public:
    using Error::Error;
};

// A relationship that is supposed to hold unconditionally was observed to fail.
// Seeing this exception always means a bug, either here or in a caller that
// fed inconsistent structures.
class ImplicationViolated : public Error {
public:
    using Error::Error;
};

// An operation that is only defined on pure states was applied elsewhere.
class NotPure : public Error {
public:
    using Error::Error;
};

// Vectors or subspaces of different ambient dimensions were mixed.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A pair of subspaces required to be orthogonal is not.
class NotOrthogonal : public Error {
public:
    using Error::Error;
};

// Malformed input: JSON syntax, schema violations, unknown labels, duplicate
// labels, or unparsable scalars.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace chu3
