#pragma once

// Shared helpers for the test programs.

#include <cmath>
#include <random>
#include <string>

#include "eiac/config.hpp"
#include "eiac/freq_expr.hpp"

namespace eiac::test {

inline std::string config_path(const std::string& name) { return std::string(EIAC_CONFIG_DIR) + "/" + name; }

inline ConfigDoc load_doc(const std::string& name, const ConfigOverrides& set = {}) {
    return parse_config_file(config_path(name), set);
}

inline BuiltConfig load_config(const std::string& name, const ConfigOverrides& set = {}) {
    return build_system(load_doc(name, set), EIAC_CONFIG_DIR);
}

inline double rel(Complex a, Complex b) {
    const double m = std::abs(b);
    return m == 0.0 ? std::abs(a - b) : std::abs(a - b) / m;
}

inline double deg(Complex z) { return std::arg(z) * 180.0 / M_PI; }

// Independent plain-double complex helpers used as hand-arithmetic oracles.
inline Complex jw(double f) { return {0.0, 2.0 * M_PI * f}; }
inline Complex par(Complex a, Complex b) { return a * b / (a + b); }

} // namespace eiac::test
