#include "eiac/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace eiac {

namespace {

void check_element(double value, double parasitic, const char* what) {
    if (!std::isfinite(value) || !(value > 0.0)) throw NonPositive(what, value);
    if (!std::isfinite(parasitic) || parasitic < 0.0)
        throw InvalidArgument(std::string(what) + " parasitic resistance must be >= 0");
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

Element Element::resistor(double ohm) {
    check_element(ohm, 0.0, "resistance");
    return {Kind::R, ohm, 0.0};
}

Element Element::inductor(double henry, double series_r) {
    check_element(henry, series_r, "inductance");
    return {Kind::L, henry, series_r};
}

Element Element::capacitor(double farad, double esr) {
    check_element(farad, esr, "capacitance");
    return {Kind::C, farad, esr};
}

FreqExpr Element::impedance() const {
    switch (kind) {
    case Kind::R:
        return FreqExpr::constant(value + parasitic);
    case Kind::L:
        return FreqExpr::poly_ratio({parasitic, value}, {1.0});
    case Kind::C:
        return FreqExpr::poly_ratio({1.0, parasitic * value}, {0.0, value});
    }
    throw Error("unknown element kind");
}

ImpedanceNet::ImpedanceNet(Element element) : node_(element) {
    check_element(element.value, element.parasitic, "element value");
}

ImpedanceNet::ImpedanceNet(Composite c) : node_(std::move(c)) {}

ImpedanceNet ImpedanceNet::series(std::vector<ImpedanceNet> parts) {
    if (parts.empty()) throw InvalidArgument("series network needs at least one part");
    return ImpedanceNet(Composite{true, std::move(parts)});
}

ImpedanceNet ImpedanceNet::parallel(std::vector<ImpedanceNet> parts) {
    if (parts.empty()) throw InvalidArgument("parallel network needs at least one part");
    return ImpedanceNet(Composite{false, std::move(parts)});
}

FreqExpr ImpedanceNet::impedance() const {
    if (const auto* e = std::get_if<Element>(&node_)) return e->impedance();
    const auto& c = std::get<Composite>(node_);
    FreqExpr z = c.parts.front().impedance();
    for (std::size_t k = 1; k < c.parts.size(); ++k)
        z = c.is_series ? z + c.parts[k].impedance() : eiac::parallel(z, c.parts[k].impedance());
    return z;
}

InputFilterNet input_filter(FreqExpr z_li, FreqExpr z_ci) {
    FreqExpr z_g = parallel(z_li, z_ci);
    return {std::move(z_li), std::move(z_ci), z_g, z_g};
}

InputFilterNet input_filter(const Element& l_i, const ImpedanceNet& c_branch) {
    return input_filter(l_i.impedance(), c_branch.impedance());
}

PostFilterNet post_filter(FreqExpr z_lp, FreqExpr z_cp, const FreqExpr& z_cfo) {
    PostFilterNet p;
    p.z_op = parallel(z_lp, z_cp);
    p.z_lpc = parallel(z_lp, z_cfo);
    p.z_lp = std::move(z_lp);
    p.z_cp = std::move(z_cp);
    p.z_cfo = z_cfo;
    return p;
}

PostFilterNet post_filter(const Element& l_p, const Element& c_p, const FreqExpr& z_cfo) {
    return post_filter(l_p.impedance(), c_p.impedance(), z_cfo);
}

double resonance_freq(double henry, double farad) {
    if (!std::isfinite(henry) || !(henry > 0.0)) throw NonPositive("L", henry);
    if (!std::isfinite(farad) || !(farad > 0.0)) throw NonPositive("C", farad);
    return 1.0 / (kTwoPi * std::sqrt(henry * farad));
}

LoadModel::LoadModel(Variant v) : v_(std::move(v)) {
    if (const auto* r = std::get_if<ResistiveLoad>(&v_)) {
        if (!std::isfinite(r->r_load) || !(r->r_load > 0.0)) throw NonPositive("R_load", r->r_load);
    } else if (const auto* p = std::get_if<ConstantPowerLoad>(&v_)) {
        if (!std::isfinite(p->v_o) || !(p->v_o > 0.0)) throw NonPositive("V_o", p->v_o);
        if (!std::isfinite(p->p_o) || !(p->p_o > 0.0)) throw NonPositive("P_o", p->p_o);
    } else if (const auto* t = std::get_if<TabulatedLoad>(&v_)) {
        // validation happens in FreqExpr::tabulated
        (void)FreqExpr::tabulated(t->table, t->extrapolate);
    }
}

std::optional<double> LoadModel::bias_current(double v_o) const {
    if (const auto* r = std::get_if<ResistiveLoad>(&v_)) return v_o / r->r_load;
    if (const auto* p = std::get_if<ConstantPowerLoad>(&v_)) return p->p_o / v_o;
    if (const auto* c = std::get_if<ConstantCurrentLoad>(&v_)) return c->current;
    return std::nullopt;
}

FreqExpr load_impedance(const LoadModel& load) {
    return std::visit(
        [](const auto& m) -> FreqExpr {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ResistiveLoad>) {
                return FreqExpr::constant(m.r_load);
            } else if constexpr (std::is_same_v<T, ConstantPowerLoad>) {
                return FreqExpr::constant(-m.v_o * m.v_o / m.p_o);
            } else if constexpr (std::is_same_v<T, ConstantCurrentLoad>) {
                return FreqExpr::open_circuit();
            } else if constexpr (std::is_same_v<T, TabulatedLoad>) {
                return FreqExpr::tabulated(m.table, m.extrapolate);
            } else {
                return m.net.impedance();
            }
        },
        load.variant());
}

FreqExpr parallel_input_impedance(const FreqExpr& z_a, const FreqExpr& z_b) { return parallel(z_a, z_b); }

std::shared_ptr<ComplexTable> read_impedance_csv(std::istream& in) {
    auto t = std::make_shared<ComplexTable>();
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "freq_hz,real_ohm,imag_ohm")
                throw ParseError(line_no, "expected header 'freq_hz,real_ohm,imag_ohm'");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ss, cell, ',')) throw ParseError(line_no, "expected 3 columns");
            try {
                std::size_t used = 0;
                cell = trim(cell);
                vals[k] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad number '" + cell + "'");
            }
        }
        if (std::getline(ss, cell, ',')) throw ParseError(line_no, "expected 3 columns");
        if (!t->freq_hz.empty() && !(vals[0] > t->freq_hz.back()))
            throw ParseError(line_no, "freq_hz must be strictly increasing");
        if (!(vals[0] > 0.0)) throw ParseError(line_no, "freq_hz must be positive");
        t->freq_hz.push_back(vals[0]);
        t->values.emplace_back(vals[1], vals[2]);
    }
    if (!header_seen) throw ParseError(line_no, "empty impedance table");
    if (t->freq_hz.empty()) throw ParseError(line_no, "impedance table has no rows");
    return t;
}

std::shared_ptr<ComplexTable> read_impedance_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open impedance table '" + path + "'");
    return read_impedance_csv(in);
}

} // namespace eiac
