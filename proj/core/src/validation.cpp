#include "eiac/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace eiac {

namespace {

// Implementation-independent draws (std distributions differ between standard libraries).
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

bool chance(std::mt19937_64& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

double signed_gain(std::mt19937_64& rng, double lo, double hi) {
    const double g = log_uniform(rng, lo, hi);
    return chance(rng, 0.5) ? g : -g;
}

// Constant gain, or the same gain behind a first-order low-pass.
FreqExpr random_ff(std::mt19937_64& rng, double lo, double hi) {
    const double g = signed_gain(rng, lo, hi);
    if (chance(rng, 0.3)) {
        const double f_c = log_uniform(rng, 100.0, 10e3);
        return FreqExpr::poly_ratio({g}, {1.0, 1.0 / (kTwoPi * f_c)});
    }
    return FreqExpr(g);
}

constexpr const char* kQuantities[] = {"A_i", "B_i", "C_i", "A_o", "B_o", "C_o",
                                       "gvvc", "zin", "zo_un", "zo_term", "gvv", "giio"};
constexpr TransferKind kKinds[] = {TransferKind::GVVC,    TransferKind::ZIN, TransferKind::ZO_UN,
                                   TransferKind::ZO_TERM, TransferKind::GVV, TransferKind::GIIO};
constexpr int kQuantityCount = 12;

void bump(double& worst, double e) {
    if (std::isnan(e)) e = INFINITY;
    worst = std::max(worst, e);
}

} // namespace

ConverterSystem random_system(std::mt19937_64& rng, Structure s, double* f_sw_out) {
    ConverterSystem sys;

    const bool psfb = chance(rng, 0.3);
    const double v_g = uniform(rng, 50.0, 500.0);
    const double duty = uniform(rng, 0.2, 0.8);
    const double n = psfb ? uniform(rng, 0.3, 1.0) : 1.0;
    const double v_o = duty * n * v_g;
    const double f_sw = log_uniform(rng, 10e3, 200e3);
    const double l = log_uniform(rng, 10e-6, 500e-6);
    const double r_l = log_uniform(rng, 1e-3, 0.1);

    if (chance(rng, 0.6)) {
        sys.load = LoadModel(ResistiveLoad{log_uniform(rng, 0.5, 50.0)});
    } else {
        const double r_eq = log_uniform(rng, 1.0, 50.0);
        sys.load = LoadModel(ConstantPowerLoad{v_o, v_o * v_o / r_eq});
    }
    const double i_l = *sys.load.bias_current(v_o);

    const OperatingPoint op{v_g, v_o, duty, i_l, n, f_sw};
    sys.raw = psfb ? psfb_coeffs(op, l, r_l, log_uniform(rng, 0.1e-6, 5e-6)) : buck_coeffs(op, l, r_l);

    const double c_fo = log_uniform(rng, 10e-6, 10e-3);
    const double esr = chance(rng, 0.5) ? log_uniform(rng, 1e-3, 50e-3) : 0.0;
    sys.z_cfo = Element::capacitor(c_fo, esr).impedance();

    const bool has_input = s == Structure::S1 || s == Structure::S2;
    const bool has_post = s == Structure::S1 || s == Structure::S3;
    if (has_input) {
        InputBranches in;
        in.z_li = Element::inductor(log_uniform(rng, 1e-3, 100e-3), log_uniform(rng, 1e-3, 0.5)).impedance();
        ImpedanceNet shunt = Element::capacitor(log_uniform(rng, 10e-6, 1e-3));
        if (chance(rng, 0.5))
            shunt = ImpedanceNet::parallel(
                {shunt, ImpedanceNet::series({Element::resistor(log_uniform(rng, 0.5, 10.0)),
                                              Element::capacitor(log_uniform(rng, 100e-9, 100e-6))})});
        in.z_ci = shunt.impedance();
        if (chance(rng, 0.3)) in.z_ci2 = Element::capacitor(log_uniform(rng, 10e-6, 1e-3)).impedance();
        sys.input = in;
    }
    if (has_post) {
        sys.post = PostBranches{Element::inductor(log_uniform(rng, 1e-6, 100e-6), log_uniform(rng, 1e-3, 50e-3)).impedance(),
                                Element::capacitor(log_uniform(rng, 1e-6, 100e-6)).impedance()};
    }

    sys.g_m = modulator({uniform(rng, 0.5, 2.0), transport_delay(duty, f_sw)});
    if (has_input) {
        sys.ff.f_ii = random_ff(rng, 1e-4, 1e-2);
        sys.ff.f_vi = random_ff(rng, 1e-4, 1e-2);
    }
    sys.control.f_ig = random_ff(rng, 1e-4, 1e-2);
    sys.control.f_vg = random_ff(rng, 1e-4, 1e-2);
    sys.control.f_io = random_ff(rng, 1e-4, 1e-2);
    sys.control.g_sv = FreqExpr(log_uniform(rng, 0.005, 0.1));
    const double k_p = log_uniform(rng, 0.01, 1.0);
    const double t_i = log_uniform(rng, 1e-4, 1e-2);
    sys.control.r_eg = FreqExpr::poly_ratio({k_p, k_p * t_i}, {0.0, t_i});

    if (f_sw_out) *f_sw_out = f_sw;
    return sys;
}

std::vector<double> log_points(double f_lo, double f_hi, int n) {
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {f_lo};
    const double a = std::log10(f_lo);
    const double b = std::log10(f_hi);
    for (int k = 0; k < n; ++k) out.push_back(std::pow(10.0, a + (b - a) * k / (n - 1)));
    return out;
}

double relative_error(Complex a, Complex b) {
    const double d = std::abs(a - b);
    const double m = std::abs(b);
    if (m == 0.0) return d;
    return d / m;
}

bool ValidationReport::passed() const {
    return std::all_of(rows.begin(), rows.end(),
                       [&](const ValidationRow& r) { return r.max_rel_error <= options.threshold; });
}

std::string ValidationReport::to_text() const {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "seed = %llu\ncases = %d\nfrequencies_per_case = %d\nthreshold = %.3e\n",
                  static_cast<unsigned long long>(options.seed), options.cases, options.frequencies,
                  options.threshold);
    out += buf;
    out += "structure,quantity,max_rel_error,status\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.3e,%s\n", std::string(to_string(r.structure)).c_str(),
                      r.quantity.c_str(), r.max_rel_error, r.max_rel_error <= options.threshold ? "ok" : "FAIL");
        out += buf;
    }
    out += passed() ? "result = pass\n" : "result = fail\n";
    return out;
}

ValidationReport run_validation(const ValidationOptions& opt) {
    ValidationReport rep;
    rep.options = opt;
    constexpr Structure kStructs[] = {Structure::S1, Structure::S2, Structure::S3, Structure::S4};
    double worst[4][kQuantityCount] = {};

    std::mt19937_64 rng(opt.seed);
    for (int c = 0; c < opt.cases; ++c) {
        const int si = c % 4;
        const Structure st = kStructs[si];
        double f_sw = 0.0;
        const ConverterSystem sys = random_system(rng, st, &f_sw);

        CoeffSet primed = sys.primed();
        if (opt.mutate_primed) primed = opt.mutate_primed(primed, st);
        const PlantModel plant{primed, sys.load, sys.control};
        const CircuitSpec circ = sys.circuit();
        FreqExpr tfs[6];
        for (int k = 0; k < 6; ++k) tfs[k] = transfer(plant, kKinds[k]);

        for (double f : log_points(1.0, f_sw / 2.0, opt.frequencies)) {
            Evaluator ev(s_at_hz(f));
            const CoeffValues t = evaluate(primed, ev);
            const CoeffValues o = oracle_primed_coeffs(circ, f);
            const Complex tv[6] = {t.a_i, t.b_i, t.c_i, t.a_o, t.b_o, t.c_o};
            const Complex ov[6] = {o.a_i, o.b_i, o.c_i, o.a_o, o.b_o, o.c_o};
            for (int k = 0; k < 6; ++k) bump(worst[si][k], relative_error(tv[k], ov[k]));
            for (int k = 0; k < 6; ++k)
                bump(worst[si][6 + k], relative_error(ev(tfs[k]), oracle_transfer(circ, kKinds[k], f)));
        }
    }

    for (int si = 0; si < 4; ++si)
        for (int q = 0; q < kQuantityCount; ++q) rep.rows.push_back({kStructs[si], kQuantities[q], worst[si][q]});
    return rep;
}

} // namespace eiac
