#pragma once

#include <stdexcept>
#include <string>

namespace appell {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Degree or dimension mismatch between tensor/series operands.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

/// Series inversion attempted on a germ with vanishing constant term.
class SingularGermError : public Error {
public:
    explicit SingularGermError(const std::string& msg) : Error(msg) {}
};

/// Argument outside the validity region of an analytic object.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Measure fails the non-degeneracy requirement at the requested degree.
class DegenerateMeasureError : public Error {
public:
    explicit DegenerateMeasureError(const std::string& msg) : Error(msg) {}
};

/// Operation not available for the given measure/dimension.
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

/// Symbol germ whose blocks are not homogeneous of the declared bidegree.
class MalformedGermError : public Error {
public:
    explicit MalformedGermError(const std::string& msg) : Error(msg) {}
};

/// Cauchy coefficient extraction did not converge on the chosen circles.
class ExtractionError : public Error {
public:
    explicit ExtractionError(const std::string& msg) : Error(msg) {}
};

} // namespace appell
