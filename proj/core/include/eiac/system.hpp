#pragma once

// A complete converter setup: raw converter coefficients, optional filters,
// modulator, feedforwards, control chain and load. Produces both the
// table-based plant and the brute-force circuit for the same setup.

#include <optional>

#include "eiac/oracle.hpp"
#include "eiac/structures.hpp"
#include "eiac/transfer.hpp"

namespace eiac {

struct InputBranches {
    FreqExpr z_li;
    FreqExpr z_ci;
    FreqExpr z_ci2 = FreqExpr::open_circuit();  // CLC second shunt
};

struct PostBranches {
    FreqExpr z_lp;
    FreqExpr z_cp;
};

struct ConverterSystem {
    CoeffSet raw;                                // as produced by the topology model
    FreqExpr z_cfo = FreqExpr::open_circuit();   // converter output capacitor when not inside raw.b_o
    std::optional<InputBranches> input;
    std::optional<PostBranches> post;
    FreqExpr g_m = FreqExpr::one();
    InternalFF ff;
    ControlChain control;
    LoadModel load{ConstantCurrentLoad{}};

    Structure structure() const { return infer_structure(input.has_value(), post.has_value()); }

    StructureSpec structure_spec() const;

    /// Primed coefficients, with the CLC rule applied when z_ci2 is set.
    CoeffSet primed() const;

    PlantModel plant() const;

    /// The same setup as an oracle circuit.
    CircuitSpec circuit() const;
};

} // namespace eiac
