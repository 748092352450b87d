#include "eiac/errors.hpp"

#include <cstdio>

namespace eiac {

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string with_freq(const std::string& base, std::optional<double> f) {
    if (!f) return base;
    return base + " at f = " + fmt_num(*f) + " Hz";
}

} // namespace

DivisionByZero::DivisionByZero(std::string what, std::optional<double> frequency_hz)
    : Error(with_freq(what, frequency_hz)), base_(std::move(what)), frequency_hz_(frequency_hz) {}

DivisionByZero DivisionByZero::at_frequency(double f_hz) const {
    return DivisionByZero(base_, f_hz);
}

NonPositive::NonPositive(const std::string& name, double value)
    : Error(name + " must be positive (got " + fmt_num(value) + ")") {}

TabulatedOutOfRange::TabulatedOutOfRange(double f_hz, double f_lo, double f_hi)
    : Error("tabulated impedance evaluated at " + fmt_num(f_hz) + " Hz outside [" + fmt_num(f_lo) +
            ", " + fmt_num(f_hi) + "] Hz") {}

SingularSystem::SingularSystem(double f_hz, const std::string& detail)
    : Error("singular circuit system at f = " + fmt_num(f_hz) + " Hz: " + detail), frequency_hz_(f_hz) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

ValidationError::ValidationError(const std::string& path, const std::string& message)
    : Error(path + ": " + message), path_(path) {}

} // namespace eiac
