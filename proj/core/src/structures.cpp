#include "eiac/structures.hpp"

namespace eiac {

namespace {

void require_cap_flag(const CoeffSet& c, bool expected, Structure s) {
    if (c.output_cap_included == expected) return;
    throw WrongCapFlag(std::string("power structure ") + std::string(to_string(s)) +
                       (expected ? " needs B_o with the output capacitor absorbed"
                                 : " needs B_o without the output capacitor"));
}

void require_variant(const StructureSpec& spec, Structure s) {
    if (spec.variant != s)
        throw WrongVariant("expected power structure " + std::string(to_string(s)) + ", got " +
                           std::string(to_string(spec.variant)));
    spec.validate();
}

} // namespace

std::string_view to_string(Structure s) {
    switch (s) {
    case Structure::S1: return "S1";
    case Structure::S2: return "S2";
    case Structure::S3: return "S3";
    case Structure::S4: return "S4";
    }
    return "?";
}

Structure infer_structure(bool has_input_filter, bool has_post_filter) {
    if (has_input_filter) return has_post_filter ? Structure::S1 : Structure::S2;
    return has_post_filter ? Structure::S3 : Structure::S4;
}

bool requires_absorbed_cap(Structure s) { return s == Structure::S2 || s == Structure::S4; }

void StructureSpec::validate() const {
    const bool want_input = variant == Structure::S1 || variant == Structure::S2;
    const bool want_post = variant == Structure::S1 || variant == Structure::S3;
    if (want_input != input.has_value())
        throw WrongVariant(std::string(to_string(variant)) +
                           (want_input ? " needs input filter handles" : " must not have an input filter"));
    if (want_post != post.has_value())
        throw WrongVariant(std::string(to_string(variant)) +
                           (want_post ? " needs post-filter handles" : " must not have a post-filter"));
    if (!want_input && (!ff.f_ii.is_zero() || !ff.f_vi.is_zero()))
        throw WrongVariant("internal feedforwards F_ii/F_vi are only defined with an input filter; "
                           "use the external F_ig/F_vg instead");
}

CoeffSet extend_structure1(const CoeffSet& c, const StructureSpec& spec) {
    require_variant(spec, Structure::S1);
    require_cap_flag(c, false, Structure::S1);

    const auto& [a_i, b_i, c_i, a_o, b_o, c_o, flag] = c;
    const FreqExpr& g_m = spec.g_m;
    const FreqExpr& f_ii = spec.ff.f_ii;
    const FreqExpr& f_vi = spec.ff.f_vi;
    const FreqExpr& z_li = spec.input->z_li;
    const FreqExpr& z_ci = spec.input->z_ci;
    const FreqExpr& z_g = spec.input->z_g;
    const FreqExpr& z_lp = spec.post->z_lp;
    const FreqExpr& z_op = spec.post->z_op;
    const FreqExpr& z_lpc = spec.post->z_lpc;

    const FreqExpr x1 = c_i - (a_i * f_ii * g_m - 1.0) / z_g + a_i * f_vi * g_m;
    const FreqExpr x2 = a_o * f_vi * g_m - a_o * f_ii * g_m / z_g + c_o;
    const FreqExpr x2_over_x1 = x2 / x1;
    const FreqExpr den_o = z_lp / z_lpc - z_lp * b_i * x2_over_x1 + b_o * z_lp;
    const FreqExpr den_i = z_g * c_i - a_i * f_ii * g_m + a_i * f_vi * g_m * z_g + 1.0;

    CoeffSet p;
    p.a_o = (a_o * g_m - g_m * a_i * x2_over_x1) / den_o;
    p.b_o = ((z_lp / z_op) * (b_o + reciprocal(z_lpc)) - reciprocal(z_lp) - b_i * z_lp * x2 / (z_op * x1)) / den_o;
    p.c_o = (g_m * a_o * f_ii / z_li + (1.0 - a_i * f_ii * g_m) * x2 / (x1 * z_li)) / den_o;
    p.b_i = (b_i * z_lp / (z_op * z_ci)) * (z_g - z_ci) * (p.b_o * z_op - 1.0) /
            (z_g * c_i + a_i * g_m * (f_vi * z_g - f_ii) + 1.0);
    p.a_i = (z_ci - z_g) * (a_i * g_m - p.a_o * b_i * z_lp) / (z_ci * den_i);
    p.c_i = (z_g + c_i * z_g * z_ci + a_i * g_m * z_g * (f_vi * z_ci - f_ii) + b_i * p.c_o * z_li * z_lp * (z_g - z_ci)) /
            (z_li * z_ci * den_i);
    p.output_cap_included = true;
    return p;
}

CoeffSet extend_structure2(const CoeffSet& c, const StructureSpec& spec) {
    require_variant(spec, Structure::S2);
    require_cap_flag(c, true, Structure::S2);

    const auto& [a_i, b_i, c_i, a_o, b_o, c_o, flag] = c;
    const FreqExpr& g_m = spec.g_m;
    const FreqExpr& f_ii = spec.ff.f_ii;
    const FreqExpr& f_vi = spec.ff.f_vi;
    const FreqExpr& z_li = spec.input->z_li;
    const FreqExpr& z_ci = spec.input->z_ci;
    const FreqExpr& z_g = spec.input->z_g;

    const FreqExpr den = c_i * z_g - a_i * g_m * (f_ii - f_vi * z_g) + 1.0;

    CoeffSet p;
    p.a_o = g_m * (a_o - a_i * c_o * z_g + a_o * c_i * z_g) / den;
    p.b_o = b_o - (b_i * c_o * z_g - a_o * b_i * f_ii * g_m + a_o * b_i * f_vi * g_m * z_g) /
                      (c_i * z_g - a_i * f_ii * g_m + a_i * f_vi * g_m * z_g + 1.0);
    p.c_o = (c_o + g_m * (a_o * (f_vi + c_i * f_ii) - a_i * c_o * f_ii)) / ((z_li / z_g) * den);
    p.a_i = a_i * g_m * (z_ci - z_g) / (z_ci * den);
    p.b_i = b_i * (z_ci - z_g) / (z_ci * den);
    p.c_i = z_g * (c_i * z_ci - a_i * f_ii * g_m + a_i * f_vi * g_m * z_ci + 1.0) / (z_li * z_ci * den);
    p.output_cap_included = true;
    return p;
}

CoeffSet extend_structure3(const CoeffSet& c, const StructureSpec& spec) {
    require_variant(spec, Structure::S3);
    require_cap_flag(c, false, Structure::S3);

    const auto& [a_i, b_i, c_i, a_o, b_o, c_o, flag] = c;
    const FreqExpr& g_m = spec.g_m;
    const FreqExpr& z_lp = spec.post->z_lp;
    const FreqExpr& z_op = spec.post->z_op;
    const FreqExpr& z_lpc = spec.post->z_lpc;

    const FreqExpr e = b_o * z_lpc + 1.0;
    const FreqExpr z_lp2 = z_lp * z_lp;

    CoeffSet p;
    p.a_o = a_o * g_m * z_lpc / (z_lp * e);
    p.b_o = (z_lp2 - z_op * z_lpc + b_o * z_lp2 * z_lpc) / (z_lp2 * z_op * e);
    p.c_o = c_o * z_lpc / (z_lp * e);
    p.a_i = a_i * g_m - a_o * b_i * g_m * z_lpc / e;
    p.b_i = b_i * z_lpc / (z_lp * e);
    p.c_i = c_i - c_o * b_i * z_lpc / e;
    p.output_cap_included = true;
    return p;
}

CoeffSet extend_structure4(const CoeffSet& c, const FreqExpr& g_m) {
    require_cap_flag(c, true, Structure::S4);
    CoeffSet p = c;
    p.a_o = c.a_o * g_m;
    p.a_i = c.a_i * g_m;
    return p;
}

CoeffSet extend(const CoeffSet& c, const StructureSpec& spec) {
    switch (spec.variant) {
    case Structure::S1: return extend_structure1(c, spec);
    case Structure::S2: return extend_structure2(c, spec);
    case Structure::S3: return extend_structure3(c, spec);
    case Structure::S4:
        spec.validate();
        return extend_structure4(c, spec.g_m);
    }
    throw WrongVariant("unknown power structure");
}

CoeffSet clc_extension(const CoeffSet& primed, const FreqExpr& z_ci2) {
    CoeffSet out = primed;
    out.c_i = reciprocal(parallel(z_ci2, reciprocal(primed.c_i)));
    return out;
}

} // namespace eiac
