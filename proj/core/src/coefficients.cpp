#include "eiac/coefficients.hpp"

#include <cmath>

namespace eiac {

namespace {

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) throw NonPositive(name, v);
}

} // namespace

CoeffValues evaluate(const CoeffSet& c, Evaluator& ev) {
    return {ev(c.a_i), ev(c.b_i), ev(c.c_i), ev(c.a_o), ev(c.b_o), ev(c.c_o)};
}

CoeffValues evaluate(const CoeffSet& c, Complex s) {
    Evaluator ev(s);
    return evaluate(c, ev);
}

void OperatingPoint::validate() const {
    require_positive(v_g, "V_g");
    require_positive(v_o, "V_o");
    require_positive(i_l, "I_L");
    require_positive(n, "n");
    require_positive(f_sw, "F_sw");
    if (!(duty > 0.0 && duty < 1.0)) throw InvalidArgument("duty cycle must lie in (0, 1)");
}

FreqExpr OutputCap::impedance() const {
    require_positive(farad, "C_fo");
    if (!std::isfinite(esr) || esr < 0.0) throw InvalidArgument("ESR must be >= 0");
    return FreqExpr::poly_ratio({1.0, esr * farad}, {0.0, farad});
}

double transport_delay(double duty, double f_sw) {
    require_positive(f_sw, "F_sw");
    const double t_sw = 1.0 / f_sw;
    return t_sw / 2.0 + duty * t_sw / 2.0;
}

FreqExpr modulator(const Modulator& m) {
    require_positive(m.n_r, "N_r");
    if (!std::isfinite(m.t_d) || m.t_d < 0.0) throw InvalidArgument("t_d must be >= 0");
    const FreqExpr gain = FreqExpr::constant(1.0 / m.n_r);
    if (m.t_d == 0.0) return gain;
    return gain * FreqExpr::delay(m.t_d);
}

CoeffSet buck_coeffs(const OperatingPoint& op, double inductance, double r_l, const std::optional<OutputCap>& c_fo) {
    op.validate();
    require_positive(inductance, "L");
    if (!std::isfinite(r_l) || r_l < 0.0) throw InvalidArgument("r_L must be >= 0");

    // inductor current: (sL + r_L) i_L = d v_in - v_oc
    const std::vector<double> z_l = {r_l, inductance};
    CoeffSet c;
    c.a_o = FreqExpr::poly_ratio({op.v_g}, z_l);
    c.b_o = FreqExpr::poly_ratio({1.0}, z_l);
    c.c_o = FreqExpr::poly_ratio({op.duty}, z_l);
    // i_m = d i_L
    c.a_i = FreqExpr::constant(op.i_l) + op.duty * c.a_o;
    c.b_i = op.duty * c.b_o;
    c.c_i = op.duty * c.c_o;
    c.output_cap_included = false;
    if (c_fo) return absorb_output_cap(c, c_fo->impedance());
    return c;
}

double psfb_effective_resistance(double n, double l_lk, double f_sw) {
    require_positive(n, "n");
    require_positive(f_sw, "F_sw");
    if (!std::isfinite(l_lk) || l_lk < 0.0) throw InvalidArgument("L_lk must be >= 0");
    return 4.0 * n * n * l_lk * f_sw;
}

CoeffSet psfb_coeffs(const OperatingPoint& op, double inductance, double r_l, double l_lk,
                     const std::optional<OutputCap>& c_fo) {
    op.validate();
    const double r_eff = psfb_effective_resistance(op.n, l_lk, op.f_sw);

    OperatingPoint secondary = op;
    secondary.v_g = op.n * op.v_g;
    CoeffSet s = buck_coeffs(secondary, inductance, r_l + r_eff);

    // Primary referral through the ideal transformer: v_sec = n v_in, i_m = n i_sec.
    const double n = op.n;
    CoeffSet c;
    c.a_o = s.a_o;
    c.b_o = s.b_o;
    c.c_o = n * s.c_o;
    c.a_i = n * s.a_i;
    c.b_i = n * s.b_i;
    c.c_i = (n * n) * s.c_i;
    c.output_cap_included = false;
    if (c_fo) return absorb_output_cap(c, c_fo->impedance());
    return c;
}

CoeffSet absorb_output_cap(const CoeffSet& c, const FreqExpr& z_cfo) {
    if (c.output_cap_included) throw AlreadyAbsorbed();
    CoeffSet out = c;
    if (!z_cfo.is_open()) out.b_o = c.b_o + reciprocal(z_cfo);
    out.output_cap_included = true;
    return out;
}

CoeffSet user_coeffs(const std::optional<FreqExpr>& a_i, const std::optional<FreqExpr>& b_i,
                     const std::optional<FreqExpr>& c_i, const std::optional<FreqExpr>& a_o,
                     const std::optional<FreqExpr>& b_o, const std::optional<FreqExpr>& c_o,
                     bool output_cap_included) {
    auto need = [](const std::optional<FreqExpr>& e, const char* name) -> FreqExpr {
        if (!e) throw MissingCoefficient(name);
        if (e->is_open()) throw InvalidArgument(std::string("coefficient ") + name + " is not evaluatable");
        return *e;
    };
    CoeffSet c;
    c.a_i = need(a_i, "A_i");
    c.b_i = need(b_i, "B_i");
    c.c_i = need(c_i, "C_i");
    c.a_o = need(a_o, "A_o");
    c.b_o = need(b_o, "B_o");
    c.c_o = need(c_o, "C_o");
    c.output_cap_included = output_cap_included;
    return c;
}

} // namespace eiac
