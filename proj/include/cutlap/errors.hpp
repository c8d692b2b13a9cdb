#pragma once

#include <stdexcept>
#include <string>

namespace cutlap {

// Base class for all toolkit errors; subclasses select the CLI exit code
// (usage/format errors -> 2, numerical failures -> 3).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid mesh topology/geometry (non-manifold input, inconsistent orientation, ...).
class MeshError : public Error {
public:
    explicit MeshError(const std::string& msg) : Error(msg) {}
};

// Malformed files or unresolvable references (e.g. a cut line that is not a mesh edge).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Bad arguments to an operation (violated precondition).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// Factorization or eigensolver failure; carries diagnostics in the message.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

}  // namespace cutlap
