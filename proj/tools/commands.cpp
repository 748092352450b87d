#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eiac/errors.hpp"
#include "eiac/stability.hpp"
#include "eiac/transfer.hpp"
#include "eiac/validation.hpp"

namespace eiac::cli {

namespace fs = std::filesystem;

namespace {

void append_fmt(std::string& out, const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    out += buf;
}

std::string join(const std::vector<double>& v, const char* fmt) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ", ";
        append_fmt(out, fmt, v[k]);
    }
    return out;
}

FreqGrid apply_grid(const ConfigDoc& doc, const GridOverride& g) {
    ConfigDoc d = doc;
    if (g.f_min) d.sweep.f_min = *g.f_min;
    if (g.f_max) d.sweep.f_max = *g.f_max;
    if (g.ppd) d.sweep.points_per_decade = *g.ppd;
    return sweep_grid(d);
}

struct Loaded {
    ConfigDoc doc;
    BuiltConfig built;
};

Loaded load(const fs::path& path, const ConfigOverrides& set, const GridOverride& g) {
    ConfigDoc doc = parse_config_file(path, set);
    BuiltConfig built = build_system(doc, path.parent_path());
    built.grid = apply_grid(doc, g);
    return {std::move(doc), std::move(built)};
}

// Runs `body`, turning library and I/O errors into a diagnostic and exit status 1.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: parse: " << e.what() << '\n';
    } catch (const ValidationError& e) {
        err << "error: config: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kFailure;
}

} // namespace

std::string format_sweep_csv(const SweepResult& r) {
    std::string out = kTfHeader;
    out += '\n';
    char buf[160];
    for (std::size_t k = 0; k < r.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9e,%.9e,%.9e,%.9e,%.9e\n", r.freq_hz[k], r.samples[k].real(),
                      r.samples[k].imag(), r.mag_db[k], r.phase_deg[k]);
        out += buf;
    }
    return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
    return path.parent_path() / (path.stem().string() + suffix);
}

int cmd_tf(const TfOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto kind = parse_transfer_kind(o.which);
        if (!kind) {
            err << "error: unknown transfer function '" << o.which
                << "' (expected gvvc, zin, zo_un, zo_term, gvv or giio)\n";
            return static_cast<int>(kFailure);
        }
        const Loaded l = load(o.config, o.set, o.grid);
        PlantModel plant = l.built.system.plant();
        if (o.open_loop) plant = open_loop(plant);
        const PartialSweep ps = try_sweep(transfer(plant, *kind), l.built.grid);
        write_file_atomic(o.out, format_sweep_csv(ps.result));
        if (ps.error) {
            err << "error: " << *ps.error;
            if (ps.failed_at_hz) {
                char buf[64];
                std::snprintf(buf, sizeof buf, " at %.9e Hz", *ps.failed_at_hz);
                err << buf;
            }
            err << "; partial output (" << ps.result.size() << " rows) written to " << o.out.string() << '\n';
            return static_cast<int>(kFailure);
        }
        out << "wrote " << ps.result.size() << " rows to " << o.out.string() << '\n';
        return static_cast<int>(kOk);
    });
}

int cmd_margins(const MarginsOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Loaded l = load(o.config, o.set, o.grid);
        const FreqExpr t = loop_gain(l.built.system.plant());
        const SweepResult sw = sweep(t, l.built.grid);
        const MarginReport m = margins(t, sw);

        const fs::path loop_csv = sibling(o.out, "_loop.csv");
        write_file_atomic(loop_csv, format_sweep_csv(sw));

        std::string rep;
        rep += "verdict = " + std::string(to_string(m.verdict)) + "\n";
        rep += "gain_crossover_count = " + std::to_string(m.gain_crossover_hz.size()) + "\n";
        rep += "gain_crossover_hz = " + join(m.gain_crossover_hz, "%.9e") + "\n";
        rep += "phase_margin_deg = " + join(m.phase_margin_deg, "%.6f") + "\n";
        rep += "phase_crossover_count = " + std::to_string(m.phase_crossover_hz.size()) + "\n";
        rep += "phase_crossover_hz = " + join(m.phase_crossover_hz, "%.9e") + "\n";
        rep += "gain_margin_db = " + join(m.gain_margin_db, "%.6f") + "\n";
        rep += "loop_csv = " + loop_csv.filename().string() + "\n";
        write_file_atomic(o.out, rep);
        out << rep;
        return static_cast<int>(kOk);
    });
}

int cmd_tmlg(const TmlgOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (o.loads.empty()) throw InvalidArgument("at least one --load is required");
        const ConfigDoc src = parse_config_file(o.source);
        const FreqExpr z_source = input_filter_output_impedance(src);

        std::vector<FreqExpr> z_in;
        std::optional<FreqGrid> grid;
        for (const fs::path& p : o.loads) {
            const ConfigDoc doc = parse_config_file(p);
            if (doc.input_filter)
                throw InconsistentConfig("load converter " + p.string() +
                                         " has an [input_filter] section; its input impedance must be taken at the filter interface");
            const BuiltConfig b = build_system(doc, p.parent_path());
            z_in.push_back(z_in_closed(b.system.plant()));
            if (!grid) grid = apply_grid(doc, o.grid);
        }
        // Source-side sweep settings take precedence when the source document carries them.
        if (src.converter || src.sweep.f_max) grid = apply_grid(src, o.grid);

        FreqExpr z_load = z_in.front();
        for (std::size_t k = 1; k < z_in.size(); ++k) z_load = parallel(z_load, z_in[k]);

        const SweepResult sw = sweep(tmlg(z_source, z_load), *grid);
        write_file_atomic(o.out, format_sweep_csv(sw));

        std::size_t peak = 0;
        for (std::size_t k = 1; k < sw.size(); ++k)
            if (std::abs(sw.samples[k]) > std::abs(sw.samples[peak])) peak = k;
        std::string rep;
        rep += "loads = " + std::to_string(o.loads.size()) + "\n";
        append_fmt(rep, "peak_freq_hz = %.9e\n", sw.freq_hz[peak]);
        append_fmt(rep, "peak_mag = %.9e\n", std::abs(sw.samples[peak]));
        append_fmt(rep, "peak_mag_db = %.9e\n", sw.mag_db[peak]);
        rep += "csv = " + o.out.filename().string() + "\n";
        write_file_atomic(sibling(o.out, "_report.txt"), rep);
        out << rep;
        return static_cast<int>(kOk);
    });
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (o.cases <= 0) throw InvalidArgument("--cases must be positive");
        ValidationOptions vo;
        vo.seed = o.seed;
        vo.cases = o.cases;
        const ValidationReport rep = run_validation(vo);
        const std::string text = rep.to_text();
        if (o.out) write_file_atomic(*o.out, text);
        out << text;
        return static_cast<int>(rep.passed() ? kOk : kThresholdBreach);
    });
}

int cmd_coeffs(const CoeffsOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Loaded l = load(o.config, o.set, o.grid);
        const CoeffSet primed = l.built.system.primed();
        std::string csv = kCoeffsHeader;
        csv += '\n';
        char buf[512];
        for (double f : l.built.grid.frequencies()) {
            const CoeffValues v = evaluate(primed, s_at_hz(f));
            std::snprintf(buf, sizeof buf, "%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n", f,
                          v.a_i.real(), v.a_i.imag(), v.b_i.real(), v.b_i.imag(), v.c_i.real(), v.c_i.imag(),
                          v.a_o.real(), v.a_o.imag(), v.b_o.real(), v.b_o.imag(), v.c_o.real(), v.c_o.imag());
            csv += buf;
        }
        write_file_atomic(o.out, csv);
        out << "wrote " << l.built.grid.size() << " rows to " << o.out.string() << '\n';
        return static_cast<int>(kOk);
    });
}

namespace {

void add_grid_options(CLI::App* cmd, GridOverride& g) {
    cmd->add_option("--fmin", g.f_min, "Sweep start (Hz)")->check(CLI::PositiveNumber);
    cmd->add_option("--fmax", g.f_max, "Sweep end (Hz)")->check(CLI::PositiveNumber);
    cmd->add_option("--ppd", g.ppd, "Points per decade")->check(CLI::PositiveNumber);
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Extended impedance/admittance converter models: sweeps, margins, minor loop gain, validation"};
    app.require_subcommand(1);

    TfOptions tf;
    auto* c_tf = app.add_subcommand("tf", "Sweep one closed-loop transfer function to CSV");
    c_tf->add_option("--config", tf.config, "Converter description")->required()->check(CLI::ExistingFile);
    c_tf->add_option("--which", tf.which, "gvvc | zin | zo_un | zo_term | gvv | giio")->required();
    c_tf->add_flag("--open-loop", tf.open_loop, "Remove the compensator (R_eg = 0)");
    add_grid_options(c_tf, tf.grid);
    c_tf->add_option("--set", tf.set, "Override section.key=value");
    c_tf->add_option("--out", tf.out, "Output CSV")->required();

    MarginsOptions mg;
    auto* c_mg = app.add_subcommand("margins", "Loop gain margins report plus loop gain CSV");
    c_mg->add_option("--config", mg.config, "Converter description")->required()->check(CLI::ExistingFile);
    add_grid_options(c_mg, mg.grid);
    c_mg->add_option("--set", mg.set, "Override section.key=value");
    c_mg->add_option("--out", mg.out, "Report file; the loop CSV is written next to it")->required();

    TmlgOptions tm;
    auto* c_tm = app.add_subcommand("tmlg", "Minor loop gain between an input filter and load converters");
    c_tm->add_option("--source", tm.source, "Description holding the source [input_filter]")
        ->required()
        ->check(CLI::ExistingFile);
    c_tm->add_option("--load", tm.loads, "Load converter description (repeat for parallel loads)")
        ->required()
        ->check(CLI::ExistingFile);
    add_grid_options(c_tm, tm.grid);
    c_tm->add_option("--out", tm.out, "Output CSV; the peak report is written next to it")->required();

    ValidateOptions va;
    auto* c_va = app.add_subcommand("validate", "Randomized equivalence check against the circuit solver");
    c_va->add_option("--seed", va.seed, "Random seed");
    c_va->add_option("--cases", va.cases, "Number of random setups")->check(CLI::PositiveNumber);
    c_va->add_option("--out", va.out, "Also write the report here");

    CoeffsOptions co;
    auto* c_co = app.add_subcommand("coeffs", "Dump the six primed coefficients per frequency");
    c_co->add_option("--config", co.config, "Converter description")->required()->check(CLI::ExistingFile);
    add_grid_options(c_co, co.grid);
    c_co->add_option("--set", co.set, "Override section.key=value");
    c_co->add_option("--out", co.out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (*c_tf) return cmd_tf(tf, std::cout, std::cerr);
    if (*c_mg) return cmd_margins(mg, std::cout, std::cerr);
    if (*c_tm) return cmd_tmlg(tm, std::cout, std::cerr);
    if (*c_va) return cmd_validate(va, std::cout, std::cerr);
    return cmd_coeffs(co, std::cout, std::cerr);
}

} // namespace eiac::cli
