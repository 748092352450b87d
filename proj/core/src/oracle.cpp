#include "eiac/oracle.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace eiac {

namespace {

using Matrix = Eigen::Matrix<Complex, kUnknownCount, kUnknownCount>;
using Vector = Eigen::Matrix<Complex, kUnknownCount, 1>;

constexpr int idx(Unknown u) { return static_cast<int>(u); }

struct Values {
    double f_hz;
    Evaluator ev;

    Complex operator()(const FreqExpr& e) { return ev(e); }

    Complex admittance(const FreqExpr& z) {
        if (z.is_open()) return 0.0;
        const Complex v = ev(z);
        if (v == Complex(0.0)) throw SingularSystem(f_hz, "zero branch impedance");
        return 1.0 / v;
    }
};

// Rows 0..9: converter, filters, modulator and control summing. Rows 10..12 are drive rows.
void assemble_network(const CircuitSpec& c, Values& v, Matrix& a) {
    using U = Unknown;
    a.setZero();

    if (c.raw.output_cap_included && !c.z_cfo.is_open())
        throw InconsistentConfig("output capacitor given both inside B_o and as a separate branch");

    // converter two-port
    a(0, idx(U::IM)) = 1.0;
    a(0, idx(U::D)) = -v(c.raw.a_i);
    a(0, idx(U::VOc)) = v(c.raw.b_i);
    a(0, idx(U::VIn)) = -v(c.raw.c_i);
    a(1, idx(U::IX)) = 1.0;
    a(1, idx(U::D)) = -v(c.raw.a_o);
    a(1, idx(U::VOc)) = v(c.raw.b_o);
    a(1, idx(U::VIn)) = -v(c.raw.c_o);

    // input side
    if (c.input) {
        a(2, idx(U::ILi)) = v(c.input->z_li);
        a(2, idx(U::VG)) = -1.0;
        a(2, idx(U::VIn)) = 1.0;
        a(3, idx(U::ILi)) = 1.0;
        a(3, idx(U::VIn)) = -v.admittance(c.input->z_ci);
        a(3, idx(U::IM)) = -1.0;
        a(4, idx(U::IG)) = 1.0;
        a(4, idx(U::ILi)) = -1.0;
        a(4, idx(U::VG)) = -v.admittance(c.input->z_ci2);
    } else {
        a(2, idx(U::VIn)) = 1.0;
        a(2, idx(U::VG)) = -1.0;
        a(3, idx(U::ILi)) = 1.0;
        a(3, idx(U::IM)) = -1.0;
        a(4, idx(U::IG)) = 1.0;
        a(4, idx(U::ILi)) = -1.0;
    }

    // output side
    a(6, idx(U::IX)) = 1.0;
    a(6, idx(U::VOc)) = -v.admittance(c.z_cfo);
    a(6, idx(U::ILp)) = -1.0;
    if (c.post) {
        a(5, idx(U::ILp)) = v(c.post->z_lp);
        a(5, idx(U::VOc)) = -1.0;
        a(5, idx(U::VO)) = 1.0;
        a(7, idx(U::ILp)) = 1.0;
        a(7, idx(U::VO)) = -v.admittance(c.post->z_cp);
        a(7, idx(U::IO)) = -1.0;
    } else {
        a(5, idx(U::VOc)) = 1.0;
        a(5, idx(U::VO)) = -1.0;
        a(7, idx(U::ILp)) = 1.0;
        a(7, idx(U::IO)) = -1.0;
    }

    // modulator with internal feedforwards: d = G_m (v'_c + F_ii i_m + F_vi v_in)
    const Complex g_m = v(c.g_m);
    a(8, idx(U::D)) = 1.0;
    a(8, idx(U::VCPrime)) = -g_m;
    a(8, idx(U::IM)) = -g_m * v(c.f_ii);
    a(8, idx(U::VIn)) = -g_m * v(c.f_vi);

    // v'_c = v_c - G_sv R_eg v_o + F_io i_o + F_vg v_g + F_ig i_g
    const ControlChain& k = c.control;
    a(9, idx(U::VCPrime)) = 1.0;
    a(9, idx(U::VC)) = -1.0;
    a(9, idx(U::VO)) = v(k.g_sv) * v(k.r_eg);
    a(9, idx(U::IO)) = -v(k.f_io);
    a(9, idx(U::VG)) = -v(k.f_vg);
    a(9, idx(U::IG)) = -v(k.f_ig);
}

OracleSolution solve_system(Matrix a, Vector b, double f_hz) {
    for (int r = 0; r < kUnknownCount; ++r) {
        const double scale = a.row(r).cwiseAbs().maxCoeff();
        if (!(scale > 0.0) || !std::isfinite(scale)) throw SingularSystem(f_hz, "empty or non-finite equation row");
        a.row(r) /= scale;
        b(r) /= scale;
    }
    const Eigen::PartialPivLU<Matrix> lu(a);
    Vector x = lu.solve(b);
    x += lu.solve(b - a * x);  // one step of iterative refinement

    const double b_norm = b.norm();
    const double res = (a * x - b).norm();
    if (!x.allFinite() || (b_norm > 0.0 && !(res <= 1e-10 * b_norm)) || (b_norm == 0.0 && !(res == 0.0)))
        throw SingularSystem(f_hz, "residual check failed");

    OracleSolution out;
    for (int r = 0; r < kUnknownCount; ++r) out.x[r] = x(r);
    out.rcond = lu.rcond();
    return out;
}

} // namespace

OracleSolution oracle_solve(const CircuitSpec& c, const Stimulus& st, double f_hz) {
    using U = Unknown;
    Values v{f_hz, Evaluator(s_at_hz(f_hz))};
    Matrix a;
    assemble_network(c, v, a);
    Vector b = Vector::Zero();

    a(10, idx(U::VC)) = 1.0;
    b(10) = st.v_c;

    if (st.source == Stimulus::Source::Voltage)
        a(11, idx(U::VG)) = 1.0;
    else
        a(11, idx(U::IG)) = 1.0;
    b(11) = st.source_value;

    // output node: i_o + i_ext flows into the load
    a(12, idx(U::IO)) = 1.0;
    if (st.load_attached) a(12, idx(U::VO)) = -v.admittance(c.z_load);
    b(12) = -st.i_ext;

    return solve_system(a, b, f_hz);
}

OracleSolution oracle_solve_forced(const CircuitSpec& c, Complex v_c_prime, Complex v_o, Complex v_g, double f_hz) {
    using U = Unknown;
    Values v{f_hz, Evaluator(s_at_hz(f_hz))};
    Matrix a;
    assemble_network(c, v, a);
    Vector b = Vector::Zero();
    a(10, idx(U::VCPrime)) = 1.0;
    b(10) = v_c_prime;
    a(11, idx(U::VG)) = 1.0;
    b(11) = v_g;
    a(12, idx(U::VO)) = 1.0;
    b(12) = v_o;
    return solve_system(a, b, f_hz);
}

Complex oracle_transfer(const CircuitSpec& c, TransferKind k, double f_hz) {
    using U = Unknown;
    using Src = Stimulus::Source;
    switch (k) {
    case TransferKind::GVVC: {
        CircuitSpec no_comp = c;
        no_comp.control.r_eg = FreqExpr::zero();
        const auto x = oracle_solve(no_comp, {Src::Voltage, 0.0, 1.0, 0.0, true}, f_hz);
        return x[U::VO] / x[U::VC];
    }
    case TransferKind::ZIN: {
        const auto x = oracle_solve(c, {Src::Current, 1.0, 0.0, 0.0, true}, f_hz);
        return x[U::VG] / x[U::IG];
    }
    case TransferKind::ZO_UN: {
        const auto x = oracle_solve(c, {Src::Voltage, 0.0, 0.0, 1.0, false}, f_hz);
        return x[U::VO] / x[U::IO];
    }
    case TransferKind::ZO_TERM: {
        const auto x = oracle_solve(c, {Src::Voltage, 0.0, 0.0, 1.0, true}, f_hz);
        return x[U::VO] / 1.0;
    }
    case TransferKind::GVV: {
        const auto x = oracle_solve(c, {Src::Voltage, 1.0, 0.0, 0.0, true}, f_hz);
        return x[U::VO] / x[U::VG];
    }
    case TransferKind::GIIO: {
        const auto x = oracle_solve(c, {Src::Voltage, 0.0, 0.0, 1.0, false}, f_hz);
        return x[U::IG] / x[U::IO];
    }
    }
    throw InvalidArgument("unknown transfer function");
}

CoeffValues oracle_primed_coeffs(const CircuitSpec& c, double f_hz) {
    using U = Unknown;
    const auto a = oracle_solve_forced(c, 1.0, 0.0, 0.0, f_hz);
    const auto b = oracle_solve_forced(c, 0.0, 1.0, 0.0, f_hz);
    const auto g = oracle_solve_forced(c, 0.0, 0.0, 1.0, f_hz);
    CoeffValues out;
    out.a_i = a[U::IG];
    out.a_o = a[U::IO];
    out.b_i = -b[U::IG];
    out.b_o = -b[U::IO];
    out.c_i = g[U::IG];
    out.c_o = g[U::IO];
    return out;
}

} // namespace eiac
