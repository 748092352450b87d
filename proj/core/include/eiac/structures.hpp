#pragma once

// Extension of the original two-port coefficients to the four power structures.
//
// The extended ("primed") model keeps the same two-port form at the outer
// terminals of the filters:
//
//   i_g = A'_i v'_c - B'_i v_o + C'_i v_g
//   i_o = A'_o v'_c - B'_o v_o + C'_o v_g
//
// with the modulator, the input filter, the output post-filter and the internal
// feedforwards (F_ii, F_vi) folded into the coefficients.
//
//   S1  input filter + post-filter   B_o must NOT contain the output capacitor
//   S2  input filter only            B_o must contain it
//   S3  post-filter only             B_o must NOT contain it
//   S4  bare converter               B_o must contain it

#include <optional>
#include <string_view>

#include "eiac/coefficients.hpp"
#include "eiac/network.hpp"

namespace eiac {

enum class Structure { S1, S2, S3, S4 };

std::string_view to_string(Structure s);

/// S1..S4 from which filters are present.
Structure infer_structure(bool has_input_filter, bool has_post_filter);

/// Whether the structure expects B_o with the output capacitor absorbed.
bool requires_absorbed_cap(Structure s);

/// Feedforwards measured at the converter's own input port (before the input filter).
struct InternalFF {
    FreqExpr f_ii = FreqExpr::zero();  // input current, V/A
    FreqExpr f_vi = FreqExpr::zero();  // input voltage, V/V
};

struct StructureSpec {
    Structure variant = Structure::S4;
    std::optional<InputFilterNet> input;  // S1, S2
    std::optional<PostFilterNet> post;    // S1, S3 (z_cfo / z_lpc carry the output capacitor)
    FreqExpr g_m = FreqExpr::one();
    InternalFF ff;

    /// Throws WrongVariant when handles do not match the variant or when
    /// internal feedforwards are set on a structure without input filter.
    void validate() const;
};

CoeffSet extend_structure1(const CoeffSet& c, const StructureSpec& spec);
CoeffSet extend_structure2(const CoeffSet& c, const StructureSpec& spec);
CoeffSet extend_structure3(const CoeffSet& c, const StructureSpec& spec);
CoeffSet extend_structure4(const CoeffSet& c, const FreqExpr& g_m);

/// Dispatches on spec.variant.
CoeffSet extend(const CoeffSet& c, const StructureSpec& spec);

/// CLC input filter: replaces C'_i by C''_i = 1 / (Z_Ci2 || 1/C'_i).
CoeffSet clc_extension(const CoeffSet& primed, const FreqExpr& z_ci2);

} // namespace eiac
