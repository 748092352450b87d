#include "catch_amalgamated.hpp"

#include <random>

#include "eiac/structures.hpp"
#include "eiac/system.hpp"
#include "eiac/validation.hpp"
#include "support.hpp"

using namespace eiac;
using eiac::test::jw;
using eiac::test::load_config;
using eiac::test::rel;

namespace {

double worst_coeff_error(const CoeffValues& a, const CoeffValues& b) {
    return std::max({rel(a.a_i, b.a_i), rel(a.b_i, b.b_i), rel(a.c_i, b.c_i), rel(a.a_o, b.a_o),
                     rel(a.b_o, b.b_o), rel(a.c_o, b.c_o)});
}

double worst_against_oracle(const ConverterSystem& sys, const std::vector<double>& freqs) {
    const CoeffSet p = sys.primed();
    const CircuitSpec c = sys.circuit();
    double worst = 0.0;
    for (double f : freqs) worst = std::max(worst, worst_coeff_error(evaluate(p, jw(f)), oracle_primed_coeffs(c, f)));
    return worst;
}

double worst_between(const ConverterSystem& a, const ConverterSystem& b, const std::vector<double>& freqs) {
    const CoeffSet pa = a.primed();
    const CoeffSet pb = b.primed();
    double worst = 0.0;
    for (double f : freqs) worst = std::max(worst, worst_coeff_error(evaluate(pa, jw(f)), evaluate(pb, jw(f))));
    return worst;
}

} // namespace

TEST_CASE("structure inference and contracts") {
    CHECK(infer_structure(true, true) == Structure::S1);
    CHECK(infer_structure(true, false) == Structure::S2);
    CHECK(infer_structure(false, true) == Structure::S3);
    CHECK(infer_structure(false, false) == Structure::S4);
    CHECK(!requires_absorbed_cap(Structure::S1));
    CHECK(requires_absorbed_cap(Structure::S2));

    const OperatingPoint op{100.0, 40.0, 0.4, 9.0, 1.0, 100e3};
    const CoeffSet bare = buck_coeffs(op, 36e-6, 0.0);
    const CoeffSet absorbed = buck_coeffs(op, 36e-6, 0.0, OutputCap{47e-6});

    StructureSpec s2;
    s2.variant = Structure::S2;
    s2.input = input_filter(Element::inductor(38e-3), ImpedanceNet(Element::capacitor(100e-6)));
    CHECK_THROWS_AS(extend_structure2(bare, s2), WrongCapFlag);
    CHECK_NOTHROW(extend_structure2(absorbed, s2));
    CHECK_THROWS_AS(extend_structure1(bare, s2), WrongVariant);
    CHECK_THROWS_AS(extend_structure4(bare, FreqExpr::one()), WrongCapFlag);

    StructureSpec s3;
    s3.variant = Structure::S3;
    s3.post = post_filter(Element::inductor(10e-6), Element::capacitor(22e-6), OutputCap{47e-6}.impedance());
    CHECK_THROWS_AS(extend_structure3(absorbed, s3), WrongCapFlag);
    s3.ff.f_vi = FreqExpr(1.0);
    CHECK_THROWS_AS(extend(bare, s3), WrongVariant);

    StructureSpec s4;
    s4.ff.f_ii = FreqExpr(0.1);
    CHECK_THROWS_AS(extend(absorbed, s4), WrongVariant);
}

TEST_CASE("structure 4 is the modulator-scaled original set") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lf(0.0, 5.0);
    const ConverterSystem sys = random_system(rng, Structure::S4);
    const CoeffSet c = absorb_output_cap(sys.raw, sys.z_cfo);
    const FreqExpr g_m = modulator({1.3, transport_delay(0.4, 100e3)});
    const CoeffSet p = extend_structure4(c, g_m);
    CHECK(p.b_i.same_node(c.b_i));
    CHECK(p.b_o.same_node(c.b_o));
    CHECK(p.c_i.same_node(c.c_i));
    CHECK(p.c_o.same_node(c.c_o));
    for (int k = 0; k < 100; ++k) {
        const double f = std::pow(10.0, lf(rng));
        CHECK(rel(p.a_o.at_hz(f), c.a_o.at_hz(f) * g_m.at_hz(f)) <= 1e-14);
        CHECK(rel(p.a_i.at_hz(f), c.a_i.at_hz(f) * g_m.at_hz(f)) <= 1e-14);
    }
    const CoeffSet unity = extend_structure4(c, FreqExpr::one());
    for (double f : {1.0, 1e3}) CHECK(worst_coeff_error(evaluate(unity, jw(f)), evaluate(c, jw(f))) == 0.0);

    // A'_o phase lags A_o by the transport delay
    const double t_d = 5e-6 + 0.4 * 5e-6;
    const CoeffSet d = extend_structure4(c, modulator({1.0, t_d}));
    for (double f : {10.0, 1e3, 2e4}) {
        const double lag = std::arg(d.a_o.at_hz(f) / c.a_o.at_hz(f)) * 180.0 / M_PI;
        CHECK(std::abs(std::remainder(lag + 360.0 * f * t_d, 360.0)) < 1e-9);
    }
}

TEST_CASE("prototype coefficients match the circuit solver") {
    const BuiltConfig p200 = load_config("prototype_200w.ini");
    REQUIRE(p200.system.structure() == Structure::S1);
    CHECK(worst_against_oracle(p200.system, {100.0}) < 1e-9);
    CHECK(worst_against_oracle(p200.system, log_points(1.0, 5e4, 20)) < 1e-9);

    const BuiltConfig p20k = load_config("prototype_20kw.ini");
    REQUIRE(p20k.system.structure() == Structure::S2);
    CHECK(worst_against_oracle(p20k.system, {30.0, 40.0, 43.8, 50.0}) < 1e-9);

    ConverterSystem s3 = p200.system;
    s3.input.reset();
    REQUIRE(s3.structure() == Structure::S3);
    CHECK(worst_against_oracle(s3, log_points(1.0, 5e4, 20)) < 1e-9);

    ConverterSystem s4 = s3;
    s4.post.reset();
    CHECK(worst_against_oracle(s4, log_points(1.0, 5e4, 20)) < 1e-9);
}

namespace {

struct Lattice {
    double s1_s2 = 0.0;
    double s1_s3 = 0.0;
    double s2_s4 = 0.0;
    double s3_s4 = 0.0;
    double worst() const { return std::max({s1_s2, s1_s3, s2_s4, s3_s4}); }
};

Lattice lattice(const ConverterSystem& s1, double f_max, double scale = 1.0) {
    const std::vector<double> freqs = log_points(1.0, f_max, 60);
    const InputBranches in{Element::inductor(1e-12 * scale).impedance(), Element::capacitor(1e-15 * scale).impedance()};
    const PostBranches post{Element::inductor(1e-12 * scale).impedance(), Element::capacitor(1e-15 * scale).impedance()};
    ConverterSystem zero_ff = s1;
    zero_ff.ff = InternalFF{};
    Lattice r;

    // S1 -> S2: post-filter vanishes
    ConverterSystem a = s1, b = s1;
    a.post = post;
    b.post.reset();
    r.s1_s2 = worst_between(a, b, freqs);

    // S1 -> S3: input filter vanishes, internal FF off
    a = zero_ff;
    b = zero_ff;
    a.input = in;
    b.input.reset();
    r.s1_s3 = worst_between(a, b, freqs);

    a.post.reset();
    b.post.reset();
    r.s2_s4 = worst_between(a, b, freqs);

    a = zero_ff;
    b = zero_ff;
    a.input.reset();
    b.input.reset();
    a.post = post;
    b.post.reset();
    r.s3_s4 = worst_between(a, b, freqs);
    return r;
}

} // namespace

TEST_CASE("degeneration lattice on the prototypes") {
    CHECK(lattice(load_config("prototype_200w.ini").system, 50e3).worst() < 1e-4);
    ConverterSystem s = load_config("prototype_20kw.ini").system;
    s.post = PostBranches{Element::inductor(20e-6).impedance(), Element::capacitor(470e-6).impedance()};
    CHECK(lattice(s, 5e3).worst() < 1e-4);
}

TEST_CASE("degeneration lattice converges on random systems") {
    // the residual is first order in the epsilon elements (omega^2 L_eps C_fo for the post filter)
    std::mt19937_64 rng(99);
    for (int k = 0; k < 6; ++k) {
        double f_sw = 0.0;
        ConverterSystem s = random_system(rng, Structure::S1, &f_sw);
        s.input->z_ci2 = FreqExpr::open_circuit();
        const Lattice coarse = lattice(s, f_sw / 2.0);
        const Lattice fine = lattice(s, f_sw / 2.0, 0.1);
        if (coarse.worst() >= 1e-4) CHECK(fine.worst() < 0.2 * coarse.worst());
        CHECK(lattice(s, f_sw / 2.0, 0.01).worst() < 1e-4);
        CHECK(coarse.s1_s3 < 1e-4);
        CHECK(coarse.s2_s4 < 1e-4);
    }
}

TEST_CASE("zero internal feedforward reduces the input-filter-only denominators") {
    const ConverterSystem s = load_config("prototype_20kw.ini").system;
    const CoeffSet c = absorb_output_cap(s.raw, s.z_cfo);
    const StructureSpec spec = s.structure_spec();
    const CoeffSet p = extend_structure2(c, spec);
    for (double f : {1.0, 43.8, 1e3}) {
        const Complex z_li = s.input->z_li.at_hz(f);
        const Complex z_ci = s.input->z_ci.at_hz(f);
        const Complex z_g = eiac::test::par(z_li, z_ci);
        const CoeffValues v = evaluate(c, jw(f));
        const Complex g = s.g_m.at_hz(f);
        const Complex den = v.c_i * z_g + 1.0;
        CHECK(rel(p.b_i.at_hz(f) * z_ci * den, v.b_i * (z_ci - z_g)) < 1e-12);
        CHECK(rel(p.a_i.at_hz(f), v.a_i * g * (z_ci - z_g) / (z_ci * den)) < 1e-12);
    }
}

TEST_CASE("structure 3 with decoupled input port") {
    const OperatingPoint op{100.0, 40.0, 0.4, 9.0, 1.0, 100e3};
    CoeffSet c = buck_coeffs(op, 36e-6, 0.0);
    c.b_i = FreqExpr::zero();
    StructureSpec spec;
    spec.variant = Structure::S3;
    spec.post = post_filter(Element::inductor(10e-6), Element::capacitor(22e-6), OutputCap{47e-6}.impedance());
    spec.g_m = modulator({1.0, 7e-6});
    const CoeffSet p = extend_structure3(c, spec);
    for (double f : {1.0, 1e3, 3e4}) CHECK(rel(p.a_i.at_hz(f), c.a_i.at_hz(f) * spec.g_m.at_hz(f)) < 1e-14);
}

TEST_CASE("CLC extension") {
    const ConverterSystem s = load_config("prototype_200w.ini").system;
    const CoeffSet p = s.primed();

    const CoeffSet open = clc_extension(p, FreqExpr::open_circuit());
    for (double f : log_points(1.0, 5e4, 50)) CHECK(rel(open.c_i.at_hz(f), p.c_i.at_hz(f)) <= 1e-14);

    const double f0 = 120.0;
    const Complex ci = p.c_i.at_hz(f0);
    const CoeffSet twice = clc_extension(p, FreqExpr::constant(1.0 / ci));
    CHECK(rel(twice.c_i.at_hz(f0), 2.0 * ci) < 1e-13);
    CHECK(twice.a_o.same_node(p.a_o));
    CHECK(twice.b_i.same_node(p.b_i));

    ConverterSystem clc = s;
    clc.input->z_ci2 = Element::capacitor(100e-6).impedance();
    const PlantModel plant = clc.plant();
    const FreqExpr zin = z_in_closed(plant);
    const CircuitSpec circ = clc.circuit();
    double worst = 0.0;
    for (double f : log_points(1.0, 5e4, 30))
        worst = std::max(worst, rel(zin.at_hz(f), oracle_transfer(circ, TransferKind::ZIN, f)));
    CHECK(worst < 1e-9);
    CHECK(worst_against_oracle(clc, log_points(1.0, 5e4, 30)) < 1e-9);
}

TEST_CASE("primed coefficients are conjugate symmetric") {
    const CoeffSet p = load_config("prototype_200w.ini").system.primed();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> re(-100.0, 100.0), im(1.0, 3e5);
    for (int k = 0; k < 50; ++k) {
        const Complex s(re(rng), im(rng));
        const CoeffValues a = evaluate(p, s);
        const CoeffValues b = evaluate(p, std::conj(s));
        CHECK(worst_coeff_error(b, {std::conj(a.a_i), std::conj(a.b_i), std::conj(a.c_i), std::conj(a.a_o),
                                    std::conj(a.b_o), std::conj(a.c_o)}) <= 1e-12);
    }
}
