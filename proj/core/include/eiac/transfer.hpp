#pragma once

// Canonical closed-loop transfer functions of a converter described by a primed
// coefficient set, with external feedforwards and the voltage loop:
//
//   v'_c = v_c - G_sv R_eg v_o + F_io i_o + F_vg v_g + F_ig i_g
//
// i_o is positive flowing out of the converter into the load.

#include <optional>
#include <string_view>

#include "eiac/coefficients.hpp"
#include "eiac/network.hpp"

namespace eiac {

struct ControlChain {
    FreqExpr g_sv = FreqExpr::one();   // output voltage sensor
    FreqExpr r_eg = FreqExpr::zero();  // compensator
    FreqExpr g_adc = FreqExpr::one();  // converter chain block in the loop gain
    FreqExpr f_ig = FreqExpr::zero();
    FreqExpr f_vg = FreqExpr::zero();
    FreqExpr f_io = FreqExpr::zero();
};

/// K_p (1 + 1/(T_i s))
FreqExpr pi_compensator(double k_p, double t_i);

struct PlantModel {
    CoeffSet primed;
    LoadModel load;
    ControlChain control;
};

/// v_o / v_c. Independent of the loop (no R_eg, no G_sv).
FreqExpr g_vvc(const PlantModel& p);

/// v_g / i_g with the load attached.
FreqExpr z_in_closed(const PlantModel& p);

/// v_o / i_o with the load removed, outward current convention (negative of
/// the impedance an external source would see).
FreqExpr z_out_unterminated(const PlantModel& p);

/// Impedance seen by an external source at the output, load attached:
/// (-z_out_unterminated) || Z_load.
FreqExpr z_out_terminated(const PlantModel& p);

/// v_o / v_g (audio susceptibility).
FreqExpr g_vv_closed(const PlantModel& p);

/// i_g / i_o with the load removed.
FreqExpr g_iio_back_current(const PlantModel& p);

/// T = G_vvc G_adc G_sv R_eg
FreqExpr loop_gain(const PlantModel& p);

/// The same plant with R_eg replaced by zero.
PlantModel open_loop(const PlantModel& p);

enum class TransferKind { GVVC, ZIN, ZO_UN, ZO_TERM, GVV, GIIO };

std::string_view to_string(TransferKind k);
std::optional<TransferKind> parse_transfer_kind(std::string_view name);

FreqExpr transfer(const PlantModel& p, TransferKind k);

} // namespace eiac
