// errors.hpp: Exception hierarchy shared by every layer of the engine

#pragma once

#include <stdexcept>
#include <string>

namespace tcrelax {

/// Base for all engine errors. `category()` lets front ends map failures
/// onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    enum class Category { validation, numerical, io };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

// Input / contract violations.

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(Category::validation, what) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(Category::validation, what) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(Category::validation, what) {}
};

class SizeError : public Error {
public:
    explicit SizeError(const std::string& what) : Error(Category::validation, what) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(Category::validation, what) {}
};

class UnsupportedRegimeError : public Error {
public:
    explicit UnsupportedRegimeError(const std::string& what) : Error(Category::validation, what) {}
};

class AmbiguityError : public Error {
public:
    explicit AmbiguityError(const std::string& what) : Error(Category::validation, what) {}
};

class StateValidityError : public Error {
public:
    explicit StateValidityError(const std::string& what) : Error(Category::validation, what) {}
};

// Numerical failures.

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(Category::numerical, what) {}
};

class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegrationAccuracyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NearDefectiveError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitWindowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(Category::io, what) {}
};

} // namespace tcrelax
