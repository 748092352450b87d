#include "eiac/transfer.hpp"

#include <cmath>

namespace eiac {

namespace {

// Denominator shared by the unterminated output impedance and the back-current gain.
FreqExpr unterminated_den(const CoeffSet& c, const ControlChain& k) {
    return c.b_o - c.a_i * k.f_ig * c.b_o + c.a_o * k.f_ig * c.b_i + c.a_o * k.g_sv * k.r_eg;
}

// Closed-loop input impedance numerator divided by Z_load (Y = 1/Z_load); also the G_vv denominator.
FreqExpr loaded_num(const CoeffSet& c, const ControlChain& k, const FreqExpr& y) {
    return c.b_o - c.a_o * k.f_io * y - c.a_i * k.f_ig * y - c.a_i * c.b_o * k.f_ig + c.a_o * c.b_i * k.f_ig +
           c.a_o * k.g_sv * k.r_eg + y;
}

} // namespace

FreqExpr pi_compensator(double k_p, double t_i) {
    if (!std::isfinite(k_p)) throw InvalidArgument("K_p must be finite");
    if (!std::isfinite(t_i) || !(t_i > 0.0)) throw NonPositive("T_i", t_i);
    return FreqExpr::poly_ratio({k_p, k_p * t_i}, {0.0, t_i});
}

FreqExpr g_vvc(const PlantModel& p) {
    const CoeffSet& c = p.primed;
    const ControlChain& k = p.control;
    const FreqExpr y = reciprocal(load_impedance(p.load));
    return c.a_o / (k.f_ig * (c.a_o * c.b_i - c.a_i * c.b_o) + y + c.b_o - c.a_o * k.f_io * y - c.a_i * k.f_ig * y);
}

FreqExpr z_in_closed(const PlantModel& p) {
    const CoeffSet& c = p.primed;
    const ControlChain& k = p.control;
    const FreqExpr y = reciprocal(load_impedance(p.load));
    const FreqExpr gr = k.g_sv * k.r_eg;
    const FreqExpr cross = c.a_i * c.c_o - c.a_o * c.c_i;
    const FreqExpr den = c.c_i * y + c.a_i * k.f_vg * y - c.c_o * c.b_i + c.c_i * c.b_o + k.f_io * y * cross +
                         k.f_vg * (c.a_i * c.b_o - c.a_o * c.b_i) - gr * cross;
    return loaded_num(c, k, y) / den;
}

FreqExpr z_out_unterminated(const PlantModel& p) {
    const CoeffSet& c = p.primed;
    const ControlChain& k = p.control;
    return (c.a_i * k.f_ig + c.a_o * k.f_io - 1.0) / unterminated_den(c, k);
}

FreqExpr z_out_terminated(const PlantModel& p) {
    return parallel(-z_out_unterminated(p), load_impedance(p.load));
}

FreqExpr g_vv_closed(const PlantModel& p) {
    const CoeffSet& c = p.primed;
    const ControlChain& k = p.control;
    const FreqExpr y = reciprocal(load_impedance(p.load));
    const FreqExpr num = c.c_o + c.a_o * k.f_vg - c.a_i * k.f_ig * c.c_o + c.a_o * k.f_ig * c.c_i;
    return num / loaded_num(c, k, y);
}

FreqExpr g_iio_back_current(const PlantModel& p) {
    const CoeffSet& c = p.primed;
    const ControlChain& k = p.control;
    const FreqExpr num = c.b_i + c.a_i * c.b_o * k.f_io - c.a_o * c.b_i * k.f_io + c.a_i * k.g_sv * k.r_eg;
    return num / unterminated_den(c, k);
}

FreqExpr loop_gain(const PlantModel& p) {
    return g_vvc(p) * p.control.g_adc * p.control.g_sv * p.control.r_eg;
}

PlantModel open_loop(const PlantModel& p) {
    PlantModel out = p;
    out.control.r_eg = FreqExpr::zero();
    return out;
}

std::string_view to_string(TransferKind k) {
    switch (k) {
    case TransferKind::GVVC: return "gvvc";
    case TransferKind::ZIN: return "zin";
    case TransferKind::ZO_UN: return "zo_un";
    case TransferKind::ZO_TERM: return "zo_term";
    case TransferKind::GVV: return "gvv";
    case TransferKind::GIIO: return "giio";
    }
    return "?";
}

std::optional<TransferKind> parse_transfer_kind(std::string_view name) {
    for (auto k : {TransferKind::GVVC, TransferKind::ZIN, TransferKind::ZO_UN, TransferKind::ZO_TERM,
                   TransferKind::GVV, TransferKind::GIIO})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

FreqExpr transfer(const PlantModel& p, TransferKind k) {
    switch (k) {
    case TransferKind::GVVC: return g_vvc(p);
    case TransferKind::ZIN: return z_in_closed(p);
    case TransferKind::ZO_UN: return z_out_unterminated(p);
    case TransferKind::ZO_TERM: return z_out_terminated(p);
    case TransferKind::GVV: return g_vv_closed(p);
    case TransferKind::GIIO: return g_iio_back_current(p);
    }
    throw InvalidArgument("unknown transfer function");
}

} // namespace eiac
