#include "eiac/stability.hpp"

#include <algorithm>
#include <cmath>

namespace eiac {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

double wrap180(double deg) {
    double w = std::remainder(deg, 360.0);
    if (w <= -180.0) w += 360.0;
    return w;
}

// Illinois-modified regula falsi on h over [a, b] with h(a), h(b) of opposite sign.
template <class F>
double refine_root(F&& h, double a, double b, double ha, double hb) {
    if (ha == 0.0) return a;
    if (hb == 0.0) return b;
    int side = 0;
    for (int it = 0; it < 80; ++it) {
        const double c = b - hb * (b - a) / (hb - ha);
        const double hc = h(c);
        if (hc == 0.0 || std::fabs(b - a) < 1e-15) return c;
        if ((hc > 0.0) == (hb > 0.0)) {
            b = c;
            hb = hc;
            if (side == -1) ha /= 2.0;
            side = -1;
        } else {
            a = c;
            ha = hc;
            if (side == 1) hb /= 2.0;
            side = 1;
        }
        if (std::fabs(hc) < 1e-13) return c;
    }
    return b - hb * (b - a) / (hb - ha);
}

} // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::NoCrossover: return "no-crossover";
    }
    return "?";
}

MarginReport margins(const FreqExpr& loop, const FreqGrid& grid) { return margins(loop, sweep(loop, grid)); }

MarginReport margins(const FreqExpr& loop, const SweepResult& r) {
    MarginReport rep;
    const std::size_t n = r.size();
    auto at_log = [&](double lf) { return loop.at_hz(std::pow(10.0, lf)); };
    auto unwrapped_near = [&](double lf, double ref_deg) {
        const double raw = std::arg(at_log(lf)) * kRadToDeg;
        return ref_deg + wrap180(raw - ref_deg);
    };

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double lf0 = std::log10(r.freq_hz[k]);
        const double lf1 = std::log10(r.freq_hz[k + 1]);

        const double m0 = r.mag_db[k];
        const double m1 = r.mag_db[k + 1];
        if ((m0 > 0.0) != (m1 > 0.0) && std::isfinite(m0) && std::isfinite(m1)) {
            const double ref = r.phase_deg[k];
            const double lf = refine_root([&](double x) { return magnitude_db(at_log(x)); }, lf0, lf1, m0, m1);
            rep.gain_crossover_hz.push_back(std::pow(10.0, lf));
            rep.phase_margin_deg.push_back(180.0 + unwrapped_near(lf, ref));
        }

        const double p0 = r.phase_deg[k];
        const double p1 = r.phase_deg[k + 1];
        const double lo = std::min(p0, p1);
        const double hi = std::max(p0, p1);
        for (double level = 360.0 * std::floor((lo + 180.0) / 360.0) - 180.0; level <= hi; level += 360.0) {
            if ((p0 > level) == (p1 > level)) continue;
            const double lf = refine_root([&](double x) { return unwrapped_near(x, p0) - level; }, lf0, lf1,
                                          p0 - level, p1 - level);
            rep.phase_crossover_hz.push_back(std::pow(10.0, lf));
            rep.gain_margin_db.push_back(-magnitude_db(at_log(lf)));
        }
    }

    if (rep.gain_crossover_hz.empty()) {
        rep.verdict = Verdict::NoCrossover;
    } else {
        const bool pm_ok = std::any_of(rep.phase_margin_deg.begin(), rep.phase_margin_deg.end(),
                                       [](double pm) { return pm > 0.0; });
        const bool gm_ok =
            std::all_of(rep.gain_margin_db.begin(), rep.gain_margin_db.end(), [](double gm) { return gm > 0.0; });
        rep.verdict = pm_ok && gm_ok ? Verdict::Stable : Verdict::Unstable;
    }
    return rep;
}

FreqExpr tmlg(const FreqExpr& z_source_out, const FreqExpr& z_load_in) { return z_source_out / z_load_in; }

NyquistTrace nyquist(const FreqExpr& ratio, const FreqGrid& grid) {
    SweepResult r = sweep(ratio, grid);
    return {std::move(r.freq_hz), std::move(r.samples)};
}

} // namespace eiac
