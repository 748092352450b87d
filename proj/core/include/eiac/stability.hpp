#pragma once

// Bode margins of a loop gain and the minor loop gain of an interconnection.

#include <string_view>
#include <vector>

#include "eiac/freq_expr.hpp"

namespace eiac {

enum class Verdict { Stable, Unstable, NoCrossover };

std::string_view to_string(Verdict v);

struct MarginReport {
    std::vector<double> gain_crossover_hz;   // ascending
    std::vector<double> phase_margin_deg;
    std::vector<double> phase_crossover_hz;  // ascending
    std::vector<double> gain_margin_db;
    Verdict verdict = Verdict::NoCrossover;

    /// At least one gain crossover with positive phase margin and every gain margin positive.
    bool stable() const { return verdict == Verdict::Stable; }
};

/// Gain crossovers at |T| = 1 (PM = 180 + unwrapped phase there); phase
/// crossovers where the unwrapped phase crosses an odd multiple of -180
/// (GM = -|T| in dB there). Crossings are bracketed on the grid and refined
/// by safeguarded secant steps on the continuous response.
MarginReport margins(const FreqExpr& loop, const FreqGrid& grid);

/// Same analysis on an existing sweep (the expression refines the brackets).
MarginReport margins(const FreqExpr& loop, const SweepResult& sampled);

/// Z_source_out / Z_load_in
FreqExpr tmlg(const FreqExpr& z_source_out, const FreqExpr& z_load_in);

struct NyquistTrace {
    std::vector<double> freq_hz;
    std::vector<Complex> samples;
};

NyquistTrace nyquist(const FreqExpr& ratio, const FreqGrid& grid);

} // namespace eiac
