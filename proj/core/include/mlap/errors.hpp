#pragma once

#include <stdexcept>
#include <string>

namespace mlap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A ProblemSpec inequality failed. `which()` names the violated constraint.
class AdmissibilityViolation : public Error {
public:
    AdmissibilityViolation(std::string which, const std::string& detail)
        : Error("admissibility violation (" + which + "): " + detail), which_(std::move(which)) {}
    const std::string& which() const noexcept { return which_; }

private:
    std::string which_;
};

class NonPositiveK : public Error {
public:
    using Error::Error;
};

class InvalidGrading : public Error {
public:
    using Error::Error;
};

class InvalidGrid : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class IndefiniteJacobian : public Error {
public:
    using Error::Error;
};

class BarrierOrderViolation : public Error {
public:
    using Error::Error;
};

class SignChange : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NonPositiveCandidate : public Error {
public:
    using Error::Error;
};

class NoCertifiableScale : public Error {
public:
    using Error::Error;
};

class InsufficientWindow : public Error {
public:
    using Error::Error;
};

class NonPositiveValues : public Error {
public:
    using Error::Error;
};

class SolveFailed : public Error {
public:
    using Error::Error;
};

}  // namespace mlap
