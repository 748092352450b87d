#pragma once

// INI-style converter description.
//
//   [converter]      topology = buck | psfb | user, V_g, V_o, D (auto), I_L (auto),
//                    L, r_L, C_fo or C_fo1.., esr, n, L_lk, F_sw,
//                    A_i .. C_o and output_cap_included for topology = user
//   [input_filter]   L_i, r_Li, C_if or C_if1.., esr_if, R_i1.. (bleeders),
//                    R_d + C_d (damping branch), C_i2 (CLC shunt), esr_i2
//   [post_filter]    L_p, r_Lp, C_p, esr_p
//   [load]           kind = resistive (R) | cpl (P, V) | cc (I) | csv (path, extrapolate)
//   [modulator]      N_r, t_d = eq24 | seconds
//   [control]        compensator = pi (K_p, T_i) | expr (R_eg) | none; G_sv; G_adc
//   [feedforward]    F_ii, F_vi, F_ig, F_vg, F_io (expressions)
//   [sweep]          f_min, f_max (default F_sw/2), points_per_decade
//
// Numbers accept SI prefixes ("30m", "6800u"); '#' and ';' start comments.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eiac/system.hpp"

namespace eiac {

struct ConverterCfg {
    std::string topology = "buck";
    double v_g = 0.0;
    double v_o = 0.0;
    std::optional<double> duty;  // empty: auto
    std::optional<double> i_l;   // empty: auto
    double l = 0.0;
    double r_l = 0.0;
    std::vector<double> c_fo;    // parallel bank; empty: none
    double esr = 0.0;
    double n = 1.0;
    double l_lk = 0.0;
    double f_sw = 0.0;
    std::array<std::string, 6> coeffs;  // A_i B_i C_i A_o B_o C_o (topology = user)
    bool output_cap_included = false;

    bool operator==(const ConverterCfg&) const = default;
};

struct InputFilterCfg {
    double l_i = 0.0;
    double r_li = 0.0;
    std::vector<double> c_if;
    double esr_if = 0.0;
    std::vector<double> r_bleed;
    std::optional<double> r_d;
    std::optional<double> c_d;
    std::optional<double> c_i2;
    double esr_i2 = 0.0;

    bool operator==(const InputFilterCfg&) const = default;
};

struct PostFilterCfg {
    double l_p = 0.0;
    double r_lp = 0.0;
    double c_p = 0.0;
    double esr_p = 0.0;

    bool operator==(const PostFilterCfg&) const = default;
};

struct LoadCfg {
    std::string kind = "resistive";
    double r = 0.0;
    double p = 0.0;
    std::optional<double> v;  // cpl bias voltage, default V_o
    double i = 0.0;
    std::string path;
    bool extrapolate = false;

    bool operator==(const LoadCfg&) const = default;
};

struct ModulatorCfg {
    double n_r = 1.0;
    std::optional<double> t_d;  // empty: eq24

    bool operator==(const ModulatorCfg&) const = default;
};

struct ControlCfg {
    std::string compensator = "none";
    double k_p = 0.0;
    double t_i = 0.0;
    std::string r_eg = "0";
    std::string g_sv = "1";
    std::string g_adc = "1";

    bool operator==(const ControlCfg&) const = default;
};

struct FeedforwardCfg {
    std::string f_ii = "0";
    std::string f_vi = "0";
    std::string f_ig = "0";
    std::string f_vg = "0";
    std::string f_io = "0";

    bool operator==(const FeedforwardCfg&) const = default;
};

struct SweepCfg {
    double f_min = 1.0;
    std::optional<double> f_max;  // empty: F_sw / 2
    int points_per_decade = 100;

    bool operator==(const SweepCfg&) const = default;
};

struct ConfigDoc {
    std::optional<ConverterCfg> converter;
    std::optional<InputFilterCfg> input_filter;
    std::optional<PostFilterCfg> post_filter;
    std::optional<LoadCfg> load;
    ModulatorCfg modulator;
    ControlCfg control;
    FeedforwardCfg feedforward;
    SweepCfg sweep;

    bool operator==(const ConfigDoc&) const = default;
};

/// `section.key=value` assignments applied on top of the file contents.
using ConfigOverrides = std::vector<std::string>;

/// Throws ParseError (syntax, with line) or ValidationError (section.key path).
ConfigDoc parse_config(std::string_view text, const ConfigOverrides& overrides = {});
ConfigDoc parse_config_file(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Canonical text form; parse_config(serialize_config(d)) == d.
std::string serialize_config(const ConfigDoc& doc);

struct BuiltConfig {
    ConverterSystem system;
    FreqGrid grid;
    double duty;
};

/// Turns a document into a system. Relative CSV paths resolve against base_dir.
/// Throws ValidationError.
BuiltConfig build_system(const ConfigDoc& doc, const std::filesystem::path& base_dir = {});

/// Output impedance of the input filter with an ideal source upstream
/// (exact zero when the document has no input filter).
FreqExpr input_filter_output_impedance(const ConfigDoc& doc);

/// Sweep grid of the document; needs F_sw when f_max is not set.
FreqGrid sweep_grid(const ConfigDoc& doc);

} // namespace eiac
