#pragma once

#include <stdexcept>
#include <string>

namespace clutternav {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed an argument that violates an operation's precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// An object was placed on a cell that cannot hold it.
class PlacementError : public Error {
public:
    using Error::Error;
};

/// An id does not name a known object, room or drop zone.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Procedural generation could not satisfy its constraints.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Malformed or incompatible file / document.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid suite or reasoner configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Ground-truth world is in a state that forbids the request.
class StateError : public Error {
public:
    using Error::Error;
};

}  // namespace clutternav
