#include "eiac/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "eiac/expr_parser.hpp"

namespace eiac {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
};

struct Section {
    std::string name;
    std::vector<Entry> entries;
};

const std::set<std::string> kSections = {"converter", "input_filter", "post_filter", "load",
                                         "modulator", "control",      "feedforward", "sweep"};

std::vector<Section> read_ini(std::string_view text) {
    std::vector<Section> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError(line_no, "unterminated section header");
            const std::string name = trim(std::string_view(t).substr(1, t.size() - 2));
            if (!kSections.count(name)) throw ParseError(line_no, "unknown section [" + name + "]");
            for (const auto& s : out)
                if (s.name == name) throw ParseError(line_no, "duplicate section [" + name + "]");
            out.push_back({name, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        if (out.empty()) throw ParseError(line_no, "key outside of a section");
        Entry e{trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)), line_no};
        if (e.key.empty()) throw ParseError(line_no, "empty key");
        if (e.value.empty()) throw ParseError(line_no, "empty value for '" + e.key + "'");
        for (const auto& prev : out.back().entries)
            if (prev.key == e.key) throw ParseError(line_no, "duplicate key '" + e.key + "'");
        out.back().entries.push_back(std::move(e));
    }
    return out;
}

void apply_override(std::vector<Section>& secs, const std::string& ov) {
    const auto eq = ov.find('=');
    const auto dot = ov.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ValidationError("override", "'" + ov + "' is not section.key=value");
    const std::string sec = trim(std::string_view(ov).substr(0, dot));
    const std::string key = trim(std::string_view(ov).substr(dot + 1, eq - dot - 1));
    const std::string val = trim(std::string_view(ov).substr(eq + 1));
    if (!kSections.count(sec)) throw ValidationError("override", "unknown section '" + sec + "'");
    if (key.empty() || val.empty()) throw ValidationError("override", "'" + ov + "' is not section.key=value");
    Section* target = nullptr;
    for (auto& s : secs)
        if (s.name == sec) target = &s;
    if (!target) {
        secs.push_back({sec, {}});
        target = &secs.back();
    }
    for (auto& e : target->entries)
        if (e.key == key) {
            e.value = val;
            return;
        }
    target->entries.push_back({key, val, 0});
}

class Reader {
public:
    explicit Reader(const Section& s) : s_(s) {}

    std::string path(const std::string& key) const { return s_.name + "." + key; }

    const Entry* find(const std::string& key) {
        for (const auto& e : s_.entries)
            if (e.key == key) {
                used_.insert(key);
                return &e;
            }
        return nullptr;
    }

    bool has(const std::string& key) const {
        for (const auto& e : s_.entries)
            if (e.key == key) return true;
        return false;
    }

    std::optional<std::string> text(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        return e->value;
    }

    std::optional<double> number(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        try {
            return parse_quantity(e->value);
        } catch (const Error& ex) {
            throw ValidationError(path(key), ex.what());
        }
    }

    double positive(const std::string& key) {
        const auto v = number(key);
        if (!v) throw ValidationError(path(key), "required");
        if (!(*v > 0.0) || !std::isfinite(*v)) throw ValidationError(path(key), "must be > 0");
        return *v;
    }

    std::optional<double> positive_opt(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return positive(key);
    }

    double non_negative(const std::string& key, double fallback) {
        const auto v = number(key);
        if (!v) return fallback;
        if (!(*v >= 0.0) || !std::isfinite(*v)) throw ValidationError(path(key), "must be >= 0");
        return *v;
    }

    // `base` alone or `base1`, `base2`, ... as a parallel bank.
    std::vector<double> bank(const std::string& base) {
        std::vector<double> out;
        if (has(base)) out.push_back(positive(base));
        for (int k = 1; has(base + std::to_string(k)); ++k) {
            if (k == 1 && !out.empty()) throw ValidationError(path(base), "use either " + base + " or " + base + "1..");
            out.push_back(positive(base + std::to_string(k)));
        }
        return out;
    }

    bool flag(const std::string& key, bool fallback) {
        const auto v = text(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "yes" || *v == "1") return true;
        if (*v == "false" || *v == "no" || *v == "0") return false;
        throw ValidationError(path(key), "expected true or false");
    }

    std::string expression(const std::string& key, const std::string& fallback) {
        const auto v = text(key);
        if (!v) return fallback;
        try {
            (void)parse_expression(*v);
        } catch (const Error& ex) {
            throw ValidationError(path(key), ex.what());
        }
        return *v;
    }

    void finish() const {
        for (const auto& e : s_.entries)
            if (!used_.count(e.key)) throw ValidationError(path(e.key), "unknown key");
    }

private:
    const Section& s_;
    std::set<std::string> used_;
};

const std::array<const char*, 6> kCoeffKeys = {"A_i", "B_i", "C_i", "A_o", "B_o", "C_o"};

ConverterCfg read_converter(Reader& r) {
    ConverterCfg c;
    c.topology = r.text("topology").value_or("buck");
    if (c.topology != "buck" && c.topology != "psfb" && c.topology != "user")
        throw ValidationError(r.path("topology"), "expected buck, psfb or user");
    c.f_sw = r.positive("F_sw");

    const auto d = r.text("D");
    if (d && *d != "auto") {
        c.duty = r.number("D");
        if (!(*c.duty > 0.0 && *c.duty < 1.0)) throw ValidationError(r.path("D"), "must lie in (0, 1)");
    }
    const auto il = r.text("I_L");
    if (il && *il != "auto") c.i_l = r.positive("I_L");

    c.c_fo = r.bank("C_fo");
    c.esr = r.non_negative("esr", 0.0);

    if (c.topology == "user") {
        for (std::size_t k = 0; k < kCoeffKeys.size(); ++k) {
            c.coeffs[k] = r.expression(kCoeffKeys[k], "");
            if (c.coeffs[k].empty()) throw ValidationError(r.path(kCoeffKeys[k]), "required for topology = user");
        }
        c.output_cap_included = r.flag("output_cap_included", false);
        if (c.output_cap_included && !c.c_fo.empty())
            throw ValidationError(r.path("C_fo"), "output capacitor is already inside B_o (output_cap_included)");
        if (r.has("V_g")) c.v_g = r.positive("V_g");
        if (r.has("V_o")) c.v_o = r.positive("V_o");
    } else {
        c.v_g = r.positive("V_g");
        c.v_o = r.positive("V_o");
        c.l = r.positive("L");
        c.r_l = r.non_negative("r_L", 0.0);
        if (c.topology == "psfb") {
            c.n = r.positive("n");
            c.l_lk = r.non_negative("L_lk", 0.0);
        }
    }
    r.finish();
    return c;
}

InputFilterCfg read_input_filter(Reader& r) {
    InputFilterCfg f;
    f.l_i = r.positive("L_i");
    f.r_li = r.non_negative("r_Li", 0.0);
    f.c_if = r.bank("C_if");
    f.esr_if = r.non_negative("esr_if", 0.0);
    f.r_bleed = r.bank("R_i");
    f.r_d = r.positive_opt("R_d");
    f.c_d = r.positive_opt("C_d");
    if (f.r_d.has_value() != f.c_d.has_value())
        throw ValidationError(r.path(f.r_d ? "C_d" : "R_d"), "damping branch needs both R_d and C_d");
    if (f.c_if.empty() && !f.c_d && f.r_bleed.empty())
        throw ValidationError(r.path("C_if"), "input filter needs a shunt branch");
    f.c_i2 = r.positive_opt("C_i2");
    f.esr_i2 = r.non_negative("esr_i2", 0.0);
    r.finish();
    return f;
}

PostFilterCfg read_post_filter(Reader& r) {
    PostFilterCfg p;
    p.l_p = r.positive("L_p");
    p.r_lp = r.non_negative("r_Lp", 0.0);
    p.c_p = r.positive("C_p");
    p.esr_p = r.non_negative("esr_p", 0.0);
    r.finish();
    return p;
}

LoadCfg read_load(Reader& r) {
    LoadCfg l;
    l.kind = r.text("kind").value_or("resistive");
    if (l.kind == "resistive") {
        l.r = r.positive("R");
    } else if (l.kind == "cpl") {
        l.p = r.positive("P");
        l.v = r.positive_opt("V");
    } else if (l.kind == "cc") {
        l.i = r.non_negative("I", 0.0);
    } else if (l.kind == "csv") {
        l.path = r.text("path").value_or("");
        if (l.path.empty()) throw ValidationError(r.path("path"), "required for kind = csv");
        l.extrapolate = r.flag("extrapolate", false);
    } else {
        throw ValidationError(r.path("kind"), "expected resistive, cpl, cc or csv");
    }
    r.finish();
    return l;
}

ModulatorCfg read_modulator(Reader& r) {
    ModulatorCfg m;
    if (r.has("N_r")) m.n_r = r.positive("N_r");
    const auto td = r.text("t_d");
    if (td && *td != "eq24") m.t_d = r.non_negative("t_d", 0.0);
    r.finish();
    return m;
}

ControlCfg read_control(Reader& r) {
    ControlCfg c;
    c.compensator = r.text("compensator").value_or("pi");
    if (c.compensator == "pi") {
        const auto kp = r.number("K_p");
        if (!kp) throw ValidationError(r.path("K_p"), "required for compensator = pi");
        if (!std::isfinite(*kp)) throw ValidationError(r.path("K_p"), "must be finite");
        c.k_p = *kp;
        c.t_i = r.positive("T_i");
    } else if (c.compensator == "expr") {
        c.r_eg = r.expression("R_eg", "");
        if (c.r_eg.empty()) throw ValidationError(r.path("R_eg"), "required for compensator = expr");
    } else if (c.compensator != "none") {
        throw ValidationError(r.path("compensator"), "expected pi, expr or none");
    }
    c.g_sv = r.expression("G_sv", "1");
    c.g_adc = r.expression("G_adc", "1");
    r.finish();
    return c;
}

FeedforwardCfg read_feedforward(Reader& r) {
    FeedforwardCfg f;
    f.f_ii = r.expression("F_ii", "0");
    f.f_vi = r.expression("F_vi", "0");
    f.f_ig = r.expression("F_ig", "0");
    f.f_vg = r.expression("F_vg", "0");
    f.f_io = r.expression("F_io", "0");
    r.finish();
    return f;
}

SweepCfg read_sweep(Reader& r) {
    SweepCfg s;
    if (r.has("f_min")) s.f_min = r.positive("f_min");
    s.f_max = r.positive_opt("f_max");
    if (r.has("points_per_decade")) {
        const double p = r.positive("points_per_decade");
        if (p != std::floor(p) || p > 100000) throw ValidationError(r.path("points_per_decade"), "must be an integer");
        s.points_per_decade = static_cast<int>(p);
    }
    if (s.f_max && !(*s.f_max > s.f_min)) throw ValidationError(r.path("f_max"), "must exceed f_min");
    r.finish();
    return s;
}

bool is_zero_text(const std::string& e) {
    try {
        return parse_expression(e).is_zero();
    } catch (const Error&) {
        return false;
    }
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void put(std::ostringstream& o, const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; }

void put_bank(std::ostringstream& o, const std::string& base, const std::vector<double>& vals) {
    if (vals.size() == 1) {
        put(o, base, num(vals[0]));
        return;
    }
    for (std::size_t k = 0; k < vals.size(); ++k) put(o, base + std::to_string(k + 1), num(vals[k]));
}

FreqExpr expr_at(const std::string& path, const std::string& text) {
    try {
        return parse_expression(text);
    } catch (const Error& ex) {
        throw ValidationError(path, ex.what());
    }
}

ImpedanceNet capacitor_bank(const std::vector<double>& caps, double esr) {
    std::vector<ImpedanceNet> parts;
    for (double c : caps) parts.emplace_back(Element::capacitor(c, esr));
    return parts.size() == 1 ? parts.front() : ImpedanceNet::parallel(parts);
}

} // namespace

ConfigDoc parse_config(std::string_view text, const ConfigOverrides& overrides) {
    std::vector<Section> secs = read_ini(text);
    for (const auto& ov : overrides) apply_override(secs, ov);

    ConfigDoc doc;
    for (const auto& s : secs) {
        Reader r(s);
        if (s.name == "converter") doc.converter = read_converter(r);
        else if (s.name == "input_filter") doc.input_filter = read_input_filter(r);
        else if (s.name == "post_filter") doc.post_filter = read_post_filter(r);
        else if (s.name == "load") doc.load = read_load(r);
        else if (s.name == "modulator") doc.modulator = read_modulator(r);
        else if (s.name == "control") doc.control = read_control(r);
        else if (s.name == "feedforward") doc.feedforward = read_feedforward(r);
        else if (s.name == "sweep") doc.sweep = read_sweep(r);
    }

    if (!doc.input_filter && (!is_zero_text(doc.feedforward.f_ii) || !is_zero_text(doc.feedforward.f_vi)))
        throw ValidationError(is_zero_text(doc.feedforward.f_ii) ? "feedforward.F_vi" : "feedforward.F_ii",
                              "internal feedforward needs an [input_filter] section; use F_ig / F_vg instead");
    if (doc.converter && !doc.load) throw ValidationError("load", "section required");
    if (doc.converter && doc.converter->topology == "user" && !doc.converter->duty && !doc.modulator.t_d)
        throw ValidationError("converter.D", "needed by t_d = eq24 for topology = user");
    return doc;
}

ConfigDoc parse_config_file(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path.string(), "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

std::string serialize_config(const ConfigDoc& doc) {
    std::ostringstream o;
    if (const auto& c = doc.converter) {
        o << "[converter]\n";
        put(o, "topology", c->topology);
        put(o, "F_sw", num(c->f_sw));
        put(o, "D", c->duty ? num(*c->duty) : "auto");
        put(o, "I_L", c->i_l ? num(*c->i_l) : "auto");
        if (!c->c_fo.empty()) put_bank(o, "C_fo", c->c_fo);
        put(o, "esr", num(c->esr));
        if (c->topology == "user") {
            for (std::size_t k = 0; k < kCoeffKeys.size(); ++k) put(o, kCoeffKeys[k], c->coeffs[k]);
            put(o, "output_cap_included", c->output_cap_included ? "true" : "false");
            if (c->v_g > 0.0) put(o, "V_g", num(c->v_g));
            if (c->v_o > 0.0) put(o, "V_o", num(c->v_o));
        } else {
            put(o, "V_g", num(c->v_g));
            put(o, "V_o", num(c->v_o));
            put(o, "L", num(c->l));
            put(o, "r_L", num(c->r_l));
            if (c->topology == "psfb") {
                put(o, "n", num(c->n));
                put(o, "L_lk", num(c->l_lk));
            }
        }
        o << '\n';
    }
    if (const auto& f = doc.input_filter) {
        o << "[input_filter]\n";
        put(o, "L_i", num(f->l_i));
        put(o, "r_Li", num(f->r_li));
        if (!f->c_if.empty()) put_bank(o, "C_if", f->c_if);
        put(o, "esr_if", num(f->esr_if));
        if (!f->r_bleed.empty()) put_bank(o, "R_i", f->r_bleed);
        if (f->r_d) put(o, "R_d", num(*f->r_d));
        if (f->c_d) put(o, "C_d", num(*f->c_d));
        if (f->c_i2) put(o, "C_i2", num(*f->c_i2));
        put(o, "esr_i2", num(f->esr_i2));
        o << '\n';
    }
    if (const auto& p = doc.post_filter) {
        o << "[post_filter]\n";
        put(o, "L_p", num(p->l_p));
        put(o, "r_Lp", num(p->r_lp));
        put(o, "C_p", num(p->c_p));
        put(o, "esr_p", num(p->esr_p));
        o << '\n';
    }
    if (const auto& l = doc.load) {
        o << "[load]\n";
        put(o, "kind", l->kind);
        if (l->kind == "resistive") put(o, "R", num(l->r));
        if (l->kind == "cpl") {
            put(o, "P", num(l->p));
            if (l->v) put(o, "V", num(*l->v));
        }
        if (l->kind == "cc") put(o, "I", num(l->i));
        if (l->kind == "csv") {
            put(o, "path", l->path);
            put(o, "extrapolate", l->extrapolate ? "true" : "false");
        }
        o << '\n';
    }
    o << "[modulator]\n";
    put(o, "N_r", num(doc.modulator.n_r));
    put(o, "t_d", doc.modulator.t_d ? num(*doc.modulator.t_d) : "eq24");
    o << "\n[control]\n";
    put(o, "compensator", doc.control.compensator);
    if (doc.control.compensator == "pi") {
        put(o, "K_p", num(doc.control.k_p));
        put(o, "T_i", num(doc.control.t_i));
    }
    if (doc.control.compensator == "expr") put(o, "R_eg", doc.control.r_eg);
    put(o, "G_sv", doc.control.g_sv);
    put(o, "G_adc", doc.control.g_adc);
    o << "\n[feedforward]\n";
    put(o, "F_ii", doc.feedforward.f_ii);
    put(o, "F_vi", doc.feedforward.f_vi);
    put(o, "F_ig", doc.feedforward.f_ig);
    put(o, "F_vg", doc.feedforward.f_vg);
    put(o, "F_io", doc.feedforward.f_io);
    o << "\n[sweep]\n";
    put(o, "f_min", num(doc.sweep.f_min));
    if (doc.sweep.f_max) put(o, "f_max", num(*doc.sweep.f_max));
    put(o, "points_per_decade", std::to_string(doc.sweep.points_per_decade));
    return o.str();
}

FreqGrid sweep_grid(const ConfigDoc& doc) {
    double f_max = 0.0;
    if (doc.sweep.f_max)
        f_max = *doc.sweep.f_max;
    else if (doc.converter)
        f_max = doc.converter->f_sw / 2.0;
    else
        throw ValidationError("sweep.f_max", "required without a [converter] section");
    if (!(f_max > doc.sweep.f_min)) throw ValidationError("sweep.f_max", "must exceed f_min");
    return FreqGrid(doc.sweep.f_min, f_max, doc.sweep.points_per_decade);
}

namespace {

InputBranches input_branches(const InputFilterCfg& f) {
    std::vector<ImpedanceNet> shunt;
    for (double c : f.c_if) shunt.emplace_back(Element::capacitor(c, f.esr_if));
    for (double r : f.r_bleed) shunt.emplace_back(Element::resistor(r));
    if (f.r_d)
        shunt.push_back(ImpedanceNet::series({Element::resistor(*f.r_d), Element::capacitor(*f.c_d)}));
    InputBranches b;
    b.z_li = Element::inductor(f.l_i, f.r_li).impedance();
    b.z_ci = (shunt.size() == 1 ? shunt.front() : ImpedanceNet::parallel(shunt)).impedance();
    if (f.c_i2) b.z_ci2 = Element::capacitor(*f.c_i2, f.esr_i2).impedance();
    return b;
}

} // namespace

FreqExpr input_filter_output_impedance(const ConfigDoc& doc) {
    if (!doc.input_filter) return FreqExpr::zero();
    const InputBranches b = input_branches(*doc.input_filter);
    return parallel(b.z_li, b.z_ci);
}

BuiltConfig build_system(const ConfigDoc& doc, const std::filesystem::path& base_dir) {
    if (!doc.converter) throw ValidationError("converter", "section required");
    if (!doc.load) throw ValidationError("load", "section required");
    const ConverterCfg& cv = *doc.converter;
    const LoadCfg& lc = *doc.load;

    ConverterSystem sys;

    // load
    try {
        if (lc.kind == "resistive") {
            sys.load = LoadModel(ResistiveLoad{lc.r});
        } else if (lc.kind == "cpl") {
            sys.load = LoadModel(ConstantPowerLoad{lc.v.value_or(cv.v_o), lc.p});
        } else if (lc.kind == "cc") {
            sys.load = LoadModel(ConstantCurrentLoad{lc.i});
        } else {
            std::filesystem::path p(lc.path);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            sys.load = LoadModel(TabulatedLoad{read_impedance_csv_file(p.string()), lc.extrapolate});
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& ex) {
        throw ValidationError("load", ex.what());
    }

    // converter
    double duty = 0.0;
    try {
        std::optional<OutputCap> no_cap;
        if (cv.topology == "user") {
            std::array<std::optional<FreqExpr>, 6> c;
            for (std::size_t k = 0; k < 6; ++k)
                c[k] = expr_at(std::string("converter.") + kCoeffKeys[k], cv.coeffs[k]);
            sys.raw = user_coeffs(c[0], c[1], c[2], c[3], c[4], c[5], cv.output_cap_included);
            duty = cv.duty.value_or(0.0);
        } else {
            const double ideal = cv.topology == "psfb" ? cv.v_o / (cv.n * cv.v_g) : cv.v_o / cv.v_g;
            duty = cv.duty.value_or(ideal);
            if (!(duty > 0.0 && duty < 1.0))
                throw ValidationError("converter.D", "duty cycle out of (0, 1); check V_o against V_g");
            double i_l = 0.0;
            if (cv.i_l) {
                i_l = *cv.i_l;
            } else {
                const auto bias = sys.load.bias_current(cv.v_o);
                if (!bias || !(*bias > 0.0))
                    throw ValidationError("converter.I_L", "auto needs a load with a positive bias current");
                i_l = *bias;
            }
            OperatingPoint op{cv.v_g, cv.v_o, duty, i_l, cv.topology == "psfb" ? cv.n : 1.0, cv.f_sw};
            sys.raw = cv.topology == "psfb" ? psfb_coeffs(op, cv.l, cv.r_l, cv.l_lk, no_cap)
                                            : buck_coeffs(op, cv.l, cv.r_l, no_cap);
        }
        if (!cv.c_fo.empty()) sys.z_cfo = capacitor_bank(cv.c_fo, cv.esr).impedance();
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& ex) {
        throw ValidationError("converter", ex.what());
    }

    // filters
    try {
        if (doc.input_filter) sys.input = input_branches(*doc.input_filter);
        if (const auto& p = doc.post_filter)
            sys.post = PostBranches{Element::inductor(p->l_p, p->r_lp).impedance(),
                                    Element::capacitor(p->c_p, p->esr_p).impedance()};
    } catch (const Error& ex) {
        throw ValidationError(doc.input_filter ? "input_filter" : "post_filter", ex.what());
    }

    // modulator
    try {
        const double t_d = doc.modulator.t_d ? *doc.modulator.t_d : transport_delay(duty, cv.f_sw);
        sys.g_m = modulator({doc.modulator.n_r, t_d});
    } catch (const Error& ex) {
        throw ValidationError("modulator", ex.what());
    }

    // control
    const ControlCfg& cc = doc.control;
    if (cc.compensator == "pi") {
        try {
            sys.control.r_eg = pi_compensator(cc.k_p, cc.t_i);
        } catch (const Error& ex) {
            throw ValidationError("control", ex.what());
        }
    } else if (cc.compensator == "expr") {
        sys.control.r_eg = expr_at("control.R_eg", cc.r_eg);
    }
    sys.control.g_sv = expr_at("control.G_sv", cc.g_sv);
    sys.control.g_adc = expr_at("control.G_adc", cc.g_adc);
    const FeedforwardCfg& ff = doc.feedforward;
    sys.ff.f_ii = expr_at("feedforward.F_ii", ff.f_ii);
    sys.ff.f_vi = expr_at("feedforward.F_vi", ff.f_vi);
    sys.control.f_ig = expr_at("feedforward.F_ig", ff.f_ig);
    sys.control.f_vg = expr_at("feedforward.F_vg", ff.f_vg);
    sys.control.f_io = expr_at("feedforward.F_io", ff.f_io);

    if (sys.post && cv.topology == "user" && cv.output_cap_included)
        throw ValidationError("converter.output_cap_included",
                              "a post-filter needs B_o without the output capacitor");
    try {
        sys.structure_spec().validate();
    } catch (const Error& ex) {
        throw ValidationError("feedforward", ex.what());
    }

    return {std::move(sys), sweep_grid(doc), duty};
}

} // namespace eiac
