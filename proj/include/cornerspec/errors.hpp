#pragma once

#include <stdexcept>
#include <string>

namespace cornerspec {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller-supplied parameter violates a documented precondition.
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of the function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computed value would overflow; never returned as a silent infinity.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Sampling or grid density is insufficient for the requested accuracy.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// An iteration failed to converge within its cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A consistency check that should be unreachable by valid inputs failed.
class InternalError : public Error {
public:
    using Error::Error;
};

/// Geometry construction produced an inconsistent or degenerate shape.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Triangulation failed the conformity or quality requirements.
class MeshError : public Error {
public:
    using Error::Error;
};

/// Matrix assembly could not reach quadrature convergence.
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue or linear solve failure, with diagnostics in what().
class SolverError : public Error {
public:
    using Error::Error;
};

/// Too little data, or ill-conditioned data, for an asymptotic fit.
class FitError : public Error {
public:
    using Error::Error;
};

/// Configuration file is malformed or contains unknown/invalid entries.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace cornerspec
