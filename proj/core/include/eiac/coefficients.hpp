#pragma once

// Characteristic coefficients of the injected-absorbed-current two-port:
//
//   i_m = A_i d - B_i v_oc + C_i v_in     (absorbed, input port)
//   i_x = A_o d - B_o v_oc + C_o v_in     (injected, output port)
//
// plus the digital modulator block that maps control voltage to duty.

#include <optional>

#include "eiac/freq_expr.hpp"

namespace eiac {

struct CoeffSet {
    FreqExpr a_i, b_i, c_i;
    FreqExpr a_o, b_o, c_o;
    // Whether B_o already contains the converter's output capacitor admittance.
    bool output_cap_included = false;
};

/// The six coefficients evaluated at one s.
struct CoeffValues {
    Complex a_i, b_i, c_i, a_o, b_o, c_o;
};

CoeffValues evaluate(const CoeffSet& c, Evaluator& ev);
CoeffValues evaluate(const CoeffSet& c, Complex s);

struct OperatingPoint {
    double v_g;     // input voltage, V
    double v_o;     // output voltage, V
    double duty;    // 0 < D < 1
    double i_l;     // steady-state output inductor current, A
    double n = 1.0; // turns ratio secondary / primary
    double f_sw;    // switching frequency, Hz

    void validate() const;
};

struct OutputCap {
    double farad;
    double esr = 0.0;

    FreqExpr impedance() const;
};

struct Modulator {
    double n_r = 1.0;  // carrier amplitude
    double t_d = 0.0;  // transport delay, s
};

/// T_sw/2 + D*T_sw/2 for a digitally sampled PWM.
double transport_delay(double duty, double f_sw);

/// G_m(s) = exp(-s t_d) / N_r
FreqExpr modulator(const Modulator& m);

/// Ideal CCM buck with inductor branch sL + r_L. With c_fo the capacitor is absorbed into B_o.
CoeffSet buck_coeffs(const OperatingPoint& op, double inductance, double r_l,
                     const std::optional<OutputCap>& c_fo = std::nullopt);

/// 4 n^2 L_lk F_sw: duty-cycle loss of the leakage-inductance blanking interval as a series resistance.
double psfb_effective_resistance(double n, double l_lk, double f_sw);

/// Phase-shifted full bridge as a transformer-coupled buck (approximation):
/// buck from n*V_g with r_L + R_eff, input-port quantities referred to the primary.
CoeffSet psfb_coeffs(const OperatingPoint& op, double inductance, double r_l, double l_lk,
                     const std::optional<OutputCap>& c_fo = std::nullopt);

/// B_o' = B_o + 1/Z_Cfo; the other five coefficients are shared unchanged.
CoeffSet absorb_output_cap(const CoeffSet& c, const FreqExpr& z_cfo);

/// Checked constructor for externally supplied coefficients.
CoeffSet user_coeffs(const std::optional<FreqExpr>& a_i, const std::optional<FreqExpr>& b_i,
                     const std::optional<FreqExpr>& c_i, const std::optional<FreqExpr>& a_o,
                     const std::optional<FreqExpr>& b_o, const std::optional<FreqExpr>& c_o,
                     bool output_cap_included);

} // namespace eiac
