#pragma once

// Brute-force small-signal solver for the complete converter circuit.
//
// Per frequency, the raw two-port equations of the converter, the input filter
// and post-filter branch equations, the modulator and feedforward summing and
// the load relation are assembled as one dense complex linear system and
// solved directly. Nothing here uses the extended coefficient tables or the
// canonical transfer-function formulas; it exists to check them.

#include <array>
#include <optional>

#include "eiac/coefficients.hpp"
#include "eiac/transfer.hpp"

namespace eiac {

/// Circuit description in terms of raw branch impedances.
struct CircuitSpec {
    CoeffSet raw;  // B_o with or without C_fo; with it, z_cfo must stay open
    FreqExpr z_cfo = FreqExpr::open_circuit();

    struct InputSide {
        FreqExpr z_li;
        FreqExpr z_ci;
        FreqExpr z_ci2 = FreqExpr::open_circuit();  // CLC shunt on the source node
    };
    std::optional<InputSide> input;

    struct PostSide {
        FreqExpr z_lp;
        FreqExpr z_cp;
    };
    std::optional<PostSide> post;

    FreqExpr g_m = FreqExpr::one();
    FreqExpr f_ii = FreqExpr::zero();
    FreqExpr f_vi = FreqExpr::zero();
    ControlChain control;
    FreqExpr z_load = FreqExpr::open_circuit();
};

/// Unknowns of the assembled system.
enum class Unknown : int {
    VIn, VOc, VG, VO, IM, IX, IG, IO, D, VCPrime, VC, ILi, ILp,
};
inline constexpr int kUnknownCount = 13;

struct Stimulus {
    enum class Source { Voltage, Current };
    Source source = Source::Voltage;
    Complex source_value = 0.0;  // v_g, or i_g drawn from a current source
    Complex v_c = 0.0;
    Complex i_ext = 0.0;         // external current injected into the output node
    bool load_attached = true;
};

struct OracleSolution {
    std::array<Complex, kUnknownCount> x{};
    double rcond = 0.0;  // reciprocal condition estimate of the equilibrated matrix

    Complex operator[](Unknown u) const { return x[static_cast<int>(u)]; }
};

/// Solves the driven circuit at one frequency. Throws SingularSystem when the
/// relative residual exceeds 1e-10 or the solution is not finite.
OracleSolution oracle_solve(const CircuitSpec& c, const Stimulus& st, double f_hz);

/// Solves with v'_c, v_o and v_g held by ideal sources (port characterization).
OracleSolution oracle_solve_forced(const CircuitSpec& c, Complex v_c_prime, Complex v_o, Complex v_g, double f_hz);

/// Transfer function as a ratio of solved unknowns. G_vvc is solved with the
/// compensator removed, matching its definition.
Complex oracle_transfer(const CircuitSpec& c, TransferKind k, double f_hz);

/// The six extended two-port coefficients seen at the outer terminals.
CoeffValues oracle_primed_coeffs(const CircuitSpec& c, double f_hz);

} // namespace eiac
