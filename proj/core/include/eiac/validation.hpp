#pragma once

// Randomized equivalence check between the table route (extended coefficients
// and canonical transfer functions) and the brute-force circuit solver.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "eiac/system.hpp"

namespace eiac {

/// A random, physically plausible setup of the given structure. Internal
/// feedforwards are set only where the structure allows them.
ConverterSystem random_system(std::mt19937_64& rng, Structure s, double* f_sw_out = nullptr);

/// n log-spaced points in [f_lo, f_hi], both ends included.
std::vector<double> log_points(double f_lo, double f_hi, int n);

/// |a - b| / |b| (|a| when b == 0).
double relative_error(Complex a, Complex b);

struct ValidationOptions {
    std::uint64_t seed = 1;
    int cases = 200;
    int frequencies = 30;
    double threshold = 1e-8;
    // Applied to the primed coefficients before comparison; lets tests corrupt a table term.
    std::function<CoeffSet(const CoeffSet&, Structure)> mutate_primed;
};

struct ValidationRow {
    Structure structure;
    std::string quantity;
    double max_rel_error = 0.0;
};

struct ValidationReport {
    ValidationOptions options;
    std::vector<ValidationRow> rows;  // structure-major, fixed quantity order

    bool passed() const;
    std::string to_text() const;
};

ValidationReport run_validation(const ValidationOptions& opt);

} // namespace eiac
