#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace eiac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quotient or parallel denominator evaluated to exactly zero.
class DivisionByZero : public Error {
public:
    explicit DivisionByZero(std::string what, std::optional<double> frequency_hz = std::nullopt);

    std::optional<double> frequency_hz() const noexcept { return frequency_hz_; }

    // Same error with the sweep frequency attached.
    DivisionByZero at_frequency(double f_hz) const;

private:
    std::string base_;
    std::optional<double> frequency_hz_;
};

/// An open-circuit (infinite) impedance was evaluated directly.
class InfiniteValue : public Error {
public:
    using Error::Error;
};

class AllZeroDenominator : public Error {
public:
    AllZeroDenominator() : Error("polynomial denominator has all-zero coefficients") {}
};

class NonPositive : public Error {
public:
    NonPositive(const std::string& name, double value);
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class TabulatedOutOfRange : public Error {
public:
    TabulatedOutOfRange(double f_hz, double f_lo, double f_hi);
};

class AlreadyAbsorbed : public Error {
public:
    AlreadyAbsorbed() : Error("output capacitor already absorbed into B_o") {}
};

class WrongCapFlag : public Error {
public:
    using Error::Error;
};

class WrongVariant : public Error {
public:
    using Error::Error;
};

class MissingCoefficient : public Error {
public:
    explicit MissingCoefficient(const std::string& name) : Error("missing coefficient " + name) {}
};

class SingularSystem : public Error {
public:
    SingularSystem(double f_hz, const std::string& detail);
    double frequency_hz() const noexcept { return frequency_hz_; }

private:
    double frequency_hz_;
};

class InconsistentConfig : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& path, const std::string& message);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace eiac
