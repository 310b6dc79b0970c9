#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace plcc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

class IncompatibleFields : public Error {
public:
    using Error::Error;
};

/// Negative nodal value fed into a fractional power, non-positive weight, ...
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class InvalidObstacle : public Error {
public:
    using Error::Error;
};

/// An internal ordering that must hold by construction did not.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Iterative solve gave up. Carries the last iterate (nodal values).
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::vector<double> last_iterate, bool diverged)
        : Error(what), last_iterate_(std::move(last_iterate)), diverged_(diverged) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    bool diverged() const noexcept { return diverged_; }

private:
    std::vector<double> last_iterate_;
    bool diverged_;
};

}  // namespace plcc
