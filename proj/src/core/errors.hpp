#pragma once

#include <stdexcept>
#include <string>

namespace airq {

enum class ErrorKind {
    Parse,
    EmptyInput,
    InsufficientData,
    WindowOutOfRange,
    Shape,
    InvalidHorizon,
    Stationarity,
    NoModel,
    Divergence,
    DegenerateScale,
    State,
    Io,
    InvalidArgument,
};

/// Library-wide exception. Every failure mode of the engine maps onto one
/// ErrorKind so the C API can translate it into a status code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace airq
