#include "eiac/system.hpp"

namespace eiac {

StructureSpec ConverterSystem::structure_spec() const {
    StructureSpec spec;
    spec.variant = structure();
    if (input) spec.input = input_filter(input->z_li, input->z_ci);
    if (post) spec.post = post_filter(post->z_lp, post->z_cp, z_cfo);
    spec.g_m = g_m;
    spec.ff = ff;
    return spec;
}

CoeffSet ConverterSystem::primed() const {
    if (raw.output_cap_included && !z_cfo.is_open())
        throw InconsistentConfig("output capacitor given both inside B_o and as a separate branch");
    const StructureSpec spec = structure_spec();

    CoeffSet base = raw;
    if (requires_absorbed_cap(spec.variant) && !raw.output_cap_included) base = absorb_output_cap(raw, z_cfo);
    CoeffSet p = extend(base, spec);
    if (input && !input->z_ci2.is_open()) p = clc_extension(p, input->z_ci2);
    return p;
}

PlantModel ConverterSystem::plant() const { return {primed(), load, control}; }

CircuitSpec ConverterSystem::circuit() const {
    CircuitSpec c;
    c.raw = raw;
    c.z_cfo = z_cfo;
    if (input) c.input = CircuitSpec::InputSide{input->z_li, input->z_ci, input->z_ci2};
    if (post) c.post = CircuitSpec::PostSide{post->z_lp, post->z_cp};
    c.g_m = g_m;
    c.f_ii = ff.f_ii;
    c.f_vi = ff.f_vi;
    c.control = control;
    c.z_load = load_impedance(load);
    return c;
}

} // namespace eiac
