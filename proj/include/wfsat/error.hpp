#pragma once

#include <stdexcept>
#include <string>

namespace wfsat {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance text (JSON syntax or document shape).
class SyntaxError : public Error {
public:
    using Error::Error;
};

/// An operation that needs an xor-free workflow received one with xor nodes.
class XorPresent : public Error {
public:
    using Error::Error;
};

/// Sequences passed to concat/interleave share an element.
class OverlapError : public Error {
public:
    using Error::Error;
};

class NotInSequence : public Error {
public:
    using Error::Error;
};

/// The sequence is not an execution sequence of the given instance.
class NotASequence : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed its configured cap.
class SizeLimit : public Error {
public:
    using Error::Error;
};

class TooManyBlocks : public Error {
public:
    using Error::Error;
};

/// A zero constraint weight or zero applicable penalty makes a violation
/// indistinguishable from a satisfied plan.
class ZeroWeight : public Error {
public:
    using Error::Error;
};

} // namespace wfsat
