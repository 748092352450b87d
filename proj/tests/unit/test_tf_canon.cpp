#include "catch_amalgamated.hpp"

#include <random>

#include "eiac/stability.hpp"
#include "eiac/system.hpp"
#include "eiac/validation.hpp"
#include "support.hpp"

using namespace eiac;
using eiac::test::jw;
using eiac::test::load_config;
using eiac::test::rel;
using Catch::Approx;

namespace {

ConverterSystem bare_buck(double r_load, bool absorbed = true) {
    ConverterSystem s;
    const OperatingPoint op{100.0, 40.0, 0.4, 40.0 / r_load, 1.0, 100e3};
    s.raw = buck_coeffs(op, 36e-6, 0.02);
    if (absorbed) s.z_cfo = OutputCap{47e-6, 0.01}.impedance();
    s.load = LoadModel(ResistiveLoad{r_load});
    return s;
}

double worst_vs_oracle(const ConverterSystem& s, TransferKind k, const std::vector<double>& freqs) {
    const FreqExpr h = transfer(s.plant(), k);
    const CircuitSpec c = s.circuit();
    double worst = 0.0;
    for (double f : freqs) worst = std::max(worst, rel(h.at_hz(f), oracle_transfer(c, k, f)));
    return worst;
}

const std::vector<double> kFreqs = log_points(1.0, 5e4, 30);

} // namespace

TEST_CASE("transfer kind names") {
    for (TransferKind k : {TransferKind::GVVC, TransferKind::ZIN, TransferKind::ZO_UN, TransferKind::ZO_TERM,
                           TransferKind::GVV, TransferKind::GIIO})
        CHECK(parse_transfer_kind(to_string(k)) == k);
    CHECK(!parse_transfer_kind("zout").has_value());
}

TEST_CASE("zero feedforward and zero compensator reductions") {
    const ConverterSystem s = load_config("prototype_200w.ini").system;
    PlantModel p = s.plant();
    const CoeffSet& c = p.primed;
    const double r = 2.2;

    const PlantModel ol = open_loop(p);
    for (double f : log_points(1.0, 5e4, 40)) {
        const CoeffValues v = evaluate(c, jw(f));
        CHECK(rel(g_vvc(p).at_hz(f), v.a_o * r / (1.0 + v.b_o * r)) < 1e-12);
        CHECK(rel(z_in_closed(ol).at_hz(f),
                  (1.0 + v.b_o * r) / (v.c_i + v.c_i * v.b_o * r - v.c_o * v.b_i * r)) < 1e-12);
        CHECK(rel(z_out_unterminated(ol).at_hz(f), -1.0 / v.b_o) < 1e-12);
        CHECK(rel(g_iio_back_current(ol).at_hz(f), v.b_i / v.b_o) < 1e-12);
        CHECK(rel(g_iio_back_current(ol).at_hz(f), -v.b_i * z_out_unterminated(ol).at_hz(f)) < 1e-12);
    }

    PlantModel no_co = ol;
    no_co.primed.c_o = FreqExpr::zero();
    for (double f : {1.0, 100.0, 1e4}) CHECK(g_vv_closed(no_co).at_hz(f) == Complex(0.0, 0.0));
}

TEST_CASE("bare buck against textbook forms and the circuit solver") {
    const ConverterSystem s = bare_buck(2.2);
    const CoeffSet c = s.primed();
    const double r = 2.2;
    for (double f : kFreqs) {
        const CoeffValues v = evaluate(c, jw(f));
        CHECK(rel(g_vvc(s.plant()).at_hz(f), v.a_o * r / (1.0 + v.b_o * r)) < 1e-12);
        // source-convention output impedance is Z_L || Z_Cfo
        const Complex zl = 0.02 + jw(f) * 36e-6;
        const Complex zc = 0.01 + 1.0 / (jw(f) * 47e-6);
        CHECK(rel(-z_out_unterminated(s.plant()).at_hz(f), eiac::test::par(zl, zc)) < 1e-12);
    }
    for (TransferKind k : {TransferKind::GVVC, TransferKind::ZIN, TransferKind::ZO_UN, TransferKind::ZO_TERM,
                           TransferKind::GVV, TransferKind::GIIO})
        CHECK(worst_vs_oracle(s, k, kFreqs) < 1e-9);

    // B_i / B_o is the duty ratio without the capacitor in B_o
    PlantModel raw{bare_buck(2.2, false).raw, LoadModel(ResistiveLoad{2.2}), {}};
    for (double f : kFreqs) CHECK(rel(g_iio_back_current(raw).at_hz(f), 0.4) < 1e-14);
}

TEST_CASE("terminated output impedance") {
    ConverterSystem s = bare_buck(2.2);
    const FreqExpr un = z_out_unterminated(s.plant());
    s.load = LoadModel(ConstantCurrentLoad{});
    for (double f : {1.0, 1e3}) CHECK(rel(z_out_terminated(s.plant()).at_hz(f), -un.at_hz(f)) < 1e-14);
    s.load = LoadModel(ResistiveLoad{1e-9});
    for (double f : {1.0, 1e3}) CHECK(std::abs(z_out_terminated(s.plant()).at_hz(f)) < 1.01e-9);
}

TEST_CASE("output current feedforward changes the response and stays exact") {
    const ConverterSystem base = load_config("prototype_200w.ini").system;
    const ConverterSystem ff = load_config("prototype_200w.ini", {"feedforward.F_io=10"}).system;
    CHECK(rel(g_vvc(ff.plant()).at_hz(100.0), g_vvc(base.plant()).at_hz(100.0)) > 1e-3);
    for (TransferKind k : {TransferKind::GVVC, TransferKind::ZIN, TransferKind::ZO_UN, TransferKind::GVV,
                           TransferKind::GIIO})
        CHECK(worst_vs_oracle(ff, k, kFreqs) < 1e-9);
}

TEST_CASE("20 kW audio susceptibility with filter against the circuit solver") {
    const ConverterSystem s = load_config("prototype_20kw.ini").system;
    CHECK(worst_vs_oracle(s, TransferKind::GVV, log_points(1.0, 5e3, 30)) < 1e-9);
}

TEST_CASE("input voltage feedforward can null the audio susceptibility numerator") {
    ConverterSystem s = load_config("prototype_200w.ini").system;
    const double f0 = 300.0;
    const CoeffValues v = evaluate(s.primed(), jw(f0));
    const Complex before = g_vv_closed(s.plant()).at_hz(f0);
    s.control.f_vg = FreqExpr::constant(-v.c_o / v.a_o);
    const Complex after = g_vv_closed(s.plant()).at_hz(f0);
    CHECK(std::abs(after) < 1e-12 * std::abs(before));
}

TEST_CASE("loop gain and open loop") {
    ConverterSystem s = load_config("prototype_200w.ini").system;
    PlantModel p = s.plant();
    const PlantModel ol = open_loop(p);
    for (double f : {1.0, 100.0}) CHECK(loop_gain(ol).at_hz(f) == Complex(0.0, 0.0));

    PlantModel unit = p;
    unit.control.g_sv = FreqExpr::one();
    unit.control.g_adc = FreqExpr::one();
    unit.control.r_eg = FreqExpr::one();
    for (double f : {1.0, 100.0, 1e4}) CHECK(rel(loop_gain(unit).at_hz(f), g_vvc(unit).at_hz(f)) < 1e-15);

    const PlantModel ol2 = open_loop(ol);
    for (double f : {1.0, 100.0}) CHECK(z_in_closed(ol2).at_hz(f) == z_in_closed(ol).at_hz(f));

    // open and closed loop Z_in meet a decade above the loop crossover
    const MarginReport m = margins(loop_gain(p), FreqGrid(1.0, 5e4, 100));
    REQUIRE(!m.gain_crossover_hz.empty());
    const double f_hi = 10.0 * m.gain_crossover_hz.back();
    const double f_lo = 1.0;
    const double db_hi = 20.0 * std::log10(std::abs(z_in_closed(p).at_hz(f_hi) / z_in_closed(ol).at_hz(f_hi)));
    const double db_lo = 20.0 * std::log10(std::abs(z_in_closed(p).at_hz(f_lo) / z_in_closed(ol).at_hz(f_lo)));
    CHECK(std::abs(db_hi) < 1.0);
    CHECK(std::abs(db_lo) > 1.0);
}

TEST_CASE("two-stage substitutions equal the closed forms") {
    std::vector<ConverterSystem> systems;
    systems.push_back(load_config("prototype_200w.ini").system);
    systems.push_back(load_config("prototype_200w.ini", {"feedforward.F_io=10", "feedforward.F_ig=0.02",
                                                         "feedforward.F_vg=0.003"})
                          .system);
    for (const ConverterSystem& s : systems) {
        const PlantModel p = s.plant();
        const FreqExpr gvvc = g_vvc(p);
        const FreqExpr zo = z_out_unterminated(p);
        for (double f : FreqGrid(1.0, 5e4, 100).frequencies()) {
            const Complex sj = jw(f);
            const CoeffValues v = evaluate(p.primed, sj);
            const Complex z = load_impedance(p.load).eval(sj);
            const Complex fig = p.control.f_ig.eval(sj), fio = p.control.f_io.eval(sj);
            const Complex gr = p.control.g_sv.eval(sj) * p.control.r_eg.eval(sj);

            // i_g = alpha v_c + beta v_o, then v_o / Z = A'_o v_c + gamma v_o + A'_o F_ig i_g
            const Complex k = 1.0 - v.a_i * fig;
            const Complex alpha = v.a_i / k;
            const Complex beta = v.a_i * fio / (z * k) - v.b_i / k;
            const Complex gamma = v.a_o * fio / z - v.b_o;
            const Complex two_stage = v.a_o * (1.0 + fig * alpha) / (1.0 / z - gamma - v.a_o * fig * beta);
            CHECK(rel(two_stage, gvvc.eval(sj)) <= 1e-12);

            // i_g = a i_o + b v_o and i_o = c i_g + d v_o
            const Complex a = v.a_i * fio / k;
            const Complex b = -(v.a_i * gr + v.b_i) / k;
            const Complex m = 1.0 - v.a_o * fio;
            const Complex c = fig * v.a_o / m;
            const Complex d = -(v.b_o + v.a_o * gr) / m;
            const Complex zo_two = (1.0 - c * a) / (c * b + d);
            CHECK(rel(zo_two, zo.eval(sj)) <= 1e-12);
        }
    }
}

TEST_CASE("200 W closed-loop input impedance shows the constant power behaviour") {
    const BuiltConfig cfg = load_config("prototype_200w.ini", {"control.K_p=0.5", "control.T_i=0.001"});
    const Complex z = z_in_closed(cfg.system.plant()).at_hz(1.0);
    const double phase = std::abs(eiac::test::deg(z));
    CHECK(phase > 175.0);
    CHECK(std::abs(z) == Approx(100.0 * 100.0 / (20.0 * 20.0 / 2.2)).epsilon(0.02));
}

TEST_CASE("200 W output impedance reflects the input filter resonance") {
    const PlantModel p = load_config("prototype_200w.ini").system.plant();
    const SweepResult r = sweep(z_out_unterminated(p), FreqGrid(20.0, 400.0, 200));
    bool extremum = false;
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
        const bool peak = r.mag_db[k] > r.mag_db[k - 1] && r.mag_db[k] > r.mag_db[k + 1];
        const bool dip = r.mag_db[k] < r.mag_db[k - 1] && r.mag_db[k] < r.mag_db[k + 1];
        if ((peak || dip) && r.freq_hz[k] > 60.0 && r.freq_hz[k] < 110.0) extremum = true;
    }
    CHECK(extremum);
}
