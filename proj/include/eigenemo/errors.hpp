#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eigenemo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data rejected before any computation (non-finite entries, zero vector, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge or produced non-finite output.
class NumericError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class PairingError : public Error {
public:
    using Error::Error;
};

/// Sequence has too few frames for the requested order parameter.
class TooShortError : public Error {
public:
    TooShortError(std::size_t frames, std::size_t order)
        : Error("sequence too short: N=" + std::to_string(frames) + " frames, order d=" +
                std::to_string(order) + " needs N >= d + 1"),
          frames_(frames),
          order_(order) {}

    std::size_t frames() const noexcept { return frames_; }
    std::size_t order() const noexcept { return order_; }

private:
    std::size_t frames_;
    std::size_t order_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class MetricError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace eigenemo
