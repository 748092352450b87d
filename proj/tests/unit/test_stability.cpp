#include "catch_amalgamated.hpp"

#include <random>

#include "eiac/config.hpp"
#include "eiac/stability.hpp"
#include "support.hpp"

using namespace eiac;
using eiac::test::load_config;
using eiac::test::load_doc;
using eiac::test::rel;
using Catch::Approx;

TEST_CASE("single pole loop") {
    const double f0 = 10.0;
    const FreqExpr t = FreqExpr::poly_ratio({10.0}, {1.0, 1.0 / (2.0 * M_PI * f0)});
    const MarginReport m = margins(t, FreqGrid(0.1, 1e4, 50));
    REQUIRE(m.gain_crossover_hz.size() == 1);
    const double f_c = f0 * std::sqrt(99.0);
    CHECK(m.gain_crossover_hz[0] == Approx(f_c).epsilon(1e-6));
    CHECK(m.phase_margin_deg[0] == Approx(180.0 - std::atan(f_c / f0) * 180.0 / M_PI).epsilon(1e-6));
    CHECK(m.gain_crossover_hz[0] == Approx(99.5).margin(0.05));
    CHECK(m.phase_margin_deg[0] == Approx(95.7).margin(0.05));
    CHECK(m.phase_crossover_hz.empty());
    CHECK(m.verdict == Verdict::Stable);
    CHECK(std::abs(std::abs(t.at_hz(m.gain_crossover_hz[0])) - 1.0) < 1e-3);
}

TEST_CASE("constant loop has no crossover") {
    const MarginReport m = margins(FreqExpr(0.5), FreqGrid(1.0, 1e3, 50));
    CHECK(m.gain_crossover_hz.empty());
    CHECK(m.phase_crossover_hz.empty());
    CHECK(m.verdict == Verdict::NoCrossover);
    CHECK(!m.stable());
    CHECK(to_string(m.verdict) == "no-crossover");
}

TEST_CASE("delayed integrator has a phase crossover") {
    // T = w_c / s * exp(-s t_d): PM = 90 - w_c t_d (deg), phase crossover at w = pi / (2 t_d)
    const double f_c = 100.0;
    const double t_d = 1e-3;
    const FreqExpr t = FreqExpr::poly_ratio({2.0 * M_PI * f_c}, {0.0, 1.0}) * FreqExpr::delay(t_d);
    const MarginReport m = margins(t, FreqGrid(1.0, 1e4, 100));
    REQUIRE(m.gain_crossover_hz.size() == 1);
    CHECK(m.gain_crossover_hz[0] == Approx(f_c).epsilon(1e-6));
    CHECK(m.phase_margin_deg[0] == Approx(90.0 - 360.0 * f_c * t_d).epsilon(1e-6));
    REQUIRE(!m.phase_crossover_hz.empty());
    const double f_180 = 1.0 / (4.0 * t_d);
    CHECK(m.phase_crossover_hz[0] == Approx(f_180).epsilon(1e-6));
    CHECK(m.gain_margin_db[0] == Approx(-20.0 * std::log10(f_c / f_180)).epsilon(1e-6));
    CHECK(m.verdict == Verdict::Stable);

    const MarginReport hot = margins(5.0 * t, FreqGrid(1.0, 1e4, 100));
    CHECK(hot.verdict == Verdict::Unstable);
}

TEST_CASE("scaling a loop moves gain crossovers up and leaves phase crossovers") {
    const FreqExpr t = FreqExpr::poly_ratio({1e4}, {0.0, 1.0, 1e-3}) * FreqExpr::delay(2e-4);
    const FreqGrid g(1.0, 1e4, 100);
    const MarginReport a = margins(t, g);
    const MarginReport b = margins(3.0 * t, g);
    REQUIRE(a.gain_crossover_hz.size() == 1);
    REQUIRE(b.gain_crossover_hz.size() == 1);
    CHECK(b.gain_crossover_hz[0] > a.gain_crossover_hz[0]);
    REQUIRE(a.phase_crossover_hz.size() == b.phase_crossover_hz.size());
    for (std::size_t k = 0; k < a.phase_crossover_hz.size(); ++k)
        CHECK(b.phase_crossover_hz[k] == Approx(a.phase_crossover_hz[k]).epsilon(1e-9));
}

TEST_CASE("20 kW compensator and input filter interaction") {
    const FreqGrid grid(1.0, 5e3, 100);
    auto verdict = [&](const std::string& name, const ConfigOverrides& set) {
        const BuiltConfig c = load_config(name, set);
        return margins(loop_gain(c.system.plant()), grid);
    };
    const MarginReport bare = verdict("prototype_20kw_nofilter.ini", {});
    const MarginReport hot = verdict("prototype_20kw.ini", {"control.K_p=1"});
    const MarginReport tuned = verdict("prototype_20kw.ini", {});
    CHECK(bare.verdict == Verdict::Stable);
    CHECK(hot.verdict == Verdict::Unstable);
    CHECK(tuned.verdict == Verdict::Stable);
    // bare converter crossover sits in the low hundreds of hertz
    REQUIRE(bare.gain_crossover_hz.size() == 1);
    CHECK(bare.gain_crossover_hz[0] > 50.0);
    CHECK(bare.gain_crossover_hz[0] < 500.0);
    // recorded goldens from the oracle-validated model
    CHECK(bare.gain_crossover_hz[0] == Approx(109.0929758).epsilon(1e-6));
    CHECK(hot.gain_crossover_hz.front() == Approx(27.87141487).epsilon(1e-6));
    CHECK(tuned.gain_crossover_hz.front() == Approx(3.094672166).epsilon(1e-6));
}

TEST_CASE("minor loop gain") {
    const FreqExpr a = FreqExpr::poly_ratio({1.0, 2e-3}, {3.0, 1e-4});
    const FreqExpr b = FreqExpr::poly_ratio({5.0}, {1.0, 1e-3, 1e-7});
    for (double f : {1.0, 10.0, 1e3, 1e5}) {
        CHECK(tmlg(FreqExpr::zero(), b).at_hz(f) == Complex(0.0, 0.0));
        CHECK(rel(tmlg(b, b).at_hz(f), 1.0) < 1e-15);
        CHECK(rel(tmlg(a, b).at_hz(f) * tmlg(b, a).at_hz(f), 1.0) <= 1e-12);
    }

    // 200 W filter over the 200 W closed-loop converter
    const FreqExpr z_src = input_filter_output_impedance(load_doc("prototype_200w.ini"));
    const FreqExpr z_ld = z_in_closed(load_config("prototype_200w_nofilter.ini").system.plant());
    const NyquistTrace tr = nyquist(tmlg(z_src, z_ld), FreqGrid(1.0, 5e4, 100));
    std::size_t peak = 0;
    for (std::size_t k = 1; k < tr.samples.size(); ++k)
        if (std::abs(tr.samples[k]) > std::abs(tr.samples[peak])) peak = k;
    CHECK(tr.freq_hz[peak] >= 70.0);
    CHECK(tr.freq_hz[peak] <= 95.0);

    const NyquistTrace zero = nyquist(FreqExpr::zero(), FreqGrid(1.0, 10.0, 10));
    for (const Complex& v : zero.samples) CHECK(v == Complex(0.0, 0.0));
    const NyquistTrace circle = nyquist(FreqExpr::delay(1e-3), FreqGrid(1.0, 1e3, 20));
    REQUIRE(circle.freq_hz.size() == circle.samples.size());
    for (const Complex& v : circle.samples) CHECK(std::abs(v) == Approx(1.0).epsilon(1e-14));
}
