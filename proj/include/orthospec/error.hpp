#pragma once

#include <stdexcept>
#include <string>

namespace orthospec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterDomainError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations)
        : Error(what + " (iterations: " + std::to_string(iterations) + ")"), iterations_(iterations) {}
    int iterations() const { return iterations_; }

private:
    int iterations_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DivergentIntegralError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, int pivot)
        : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
    int pivot() const { return pivot_; }

private:
    int pivot_;
};

class ConditioningError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace orthospec
