#pragma once

// Passive impedance primitives, the input / post filter networks and load models.

#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eiac/freq_expr.hpp"

namespace eiac {

struct Element {
    enum class Kind { R, L, C };

    Kind kind;
    double value;           // ohm, henry or farad
    double parasitic = 0.0; // series resistance, ohm

    static Element resistor(double ohm);
    static Element inductor(double henry, double series_r = 0.0);
    static Element capacitor(double farad, double esr = 0.0);

    // Z_R = R + r, Z_L = sL + r, Z_C = 1/(sC) + r
    FreqExpr impedance() const;
};

/// Series / parallel tree of elements.
class ImpedanceNet {
public:
    ImpedanceNet(Element element);  // NOLINT(google-explicit-constructor)

    static ImpedanceNet series(std::vector<ImpedanceNet> parts);
    static ImpedanceNet parallel(std::vector<ImpedanceNet> parts);

    FreqExpr impedance() const;

private:
    struct Composite {
        bool is_series;
        std::vector<ImpedanceNet> parts;
    };
    explicit ImpedanceNet(Composite c);

    std::variant<Element, Composite> node_;
};

inline FreqExpr impedance(const ImpedanceNet& net) { return net.impedance(); }

/// Branch handles of an LC input filter seen from the converter.
struct InputFilterNet {
    FreqExpr z_li;
    FreqExpr z_ci;
    FreqExpr z_g;         // Z_Li || Z_Ci
    FreqExpr z_o_filter;  // output impedance with an ideal source upstream (== z_g)
};

InputFilterNet input_filter(const Element& l_i, const ImpedanceNet& c_branch);
InputFilterNet input_filter(FreqExpr z_li, FreqExpr z_ci);

/// Branch handles of an output LC post-filter. z_cfo is the converter's own
/// output capacitor (open when absent), z_lpc = Z_Lp || Z_Cfo.
struct PostFilterNet {
    FreqExpr z_lp;
    FreqExpr z_cp;
    FreqExpr z_op;   // Z_Lp || Z_Cp
    FreqExpr z_cfo;
    FreqExpr z_lpc;
};

PostFilterNet post_filter(const Element& l_p, const Element& c_p,
                          const FreqExpr& z_cfo = FreqExpr::open_circuit());
PostFilterNet post_filter(FreqExpr z_lp, FreqExpr z_cp, const FreqExpr& z_cfo = FreqExpr::open_circuit());

/// 1 / (2 pi sqrt(LC))
double resonance_freq(double henry, double farad);

struct ResistiveLoad {
    double r_load;
};

/// Small-signal constant power load: -V^2/P.
struct ConstantPowerLoad {
    double v_o;
    double p_o;
};

/// Ideal current sink: open circuit in small signal. `current` only feeds the bias point.
struct ConstantCurrentLoad {
    double current = 0.0;
};

struct TabulatedLoad {
    std::shared_ptr<const ComplexTable> table;
    bool extrapolate = false;
};

struct NetworkLoad {
    ImpedanceNet net;
};

class LoadModel {
public:
    using Variant = std::variant<ResistiveLoad, ConstantPowerLoad, ConstantCurrentLoad, TabulatedLoad, NetworkLoad>;

    LoadModel(Variant v);  // NOLINT(google-explicit-constructor); validates

    const Variant& variant() const { return v_; }

    /// DC load current at output voltage v_o, when the model defines one.
    std::optional<double> bias_current(double v_o) const;

private:
    Variant v_;
};

FreqExpr load_impedance(const LoadModel& load);

/// Z_a || Z_b, e.g. several downstream converters sharing a bus.
FreqExpr parallel_input_impedance(const FreqExpr& z_a, const FreqExpr& z_b);

/// CSV with header `freq_hz,real_ohm,imag_ohm`.
std::shared_ptr<ComplexTable> read_impedance_csv(std::istream& in);
std::shared_ptr<ComplexTable> read_impedance_csv_file(const std::string& path);

} // namespace eiac
