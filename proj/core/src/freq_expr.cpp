#include "eiac/freq_expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eiac {

namespace detail {

struct Node {
    FreqExpr::Kind kind = FreqExpr::Kind::Constant;
    Complex value{};
    std::vector<double> num;
    std::vector<double> den;
    double delay = 0.0;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
    std::shared_ptr<const ComplexTable> table;
    bool extrapolate = false;
};

} // namespace detail

using detail::Node;

namespace {

std::shared_ptr<const Node> make_constant(Complex v) {
    auto n = std::make_shared<Node>();
    n->kind = FreqExpr::Kind::Constant;
    n->value = v;
    return n;
}

template <class C>
C horner(const std::vector<double>& c, C s) {
    C acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + typename C::value_type(*it);
    return acc;
}

Complex interpolate(const ComplexTable& t, bool extrapolate, double f) {
    const auto& fs = t.freq_hz;
    if (fs.size() == 1) {
        if (f == fs.front() || extrapolate) return t.values.front();
        throw TabulatedOutOfRange(f, fs.front(), fs.back());
    }
    if ((f < fs.front() || f > fs.back()) && !extrapolate)
        throw TabulatedOutOfRange(f, fs.front(), fs.back());
    if (f <= 0.0) throw TabulatedOutOfRange(f, fs.front(), fs.back());
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(fs.begin(), fs.end(), f) - fs.begin());
    hi = std::clamp<std::size_t>(hi, 1, fs.size() - 1);
    const std::size_t lo = hi - 1;
    const double x0 = std::log(fs[lo]);
    const double x1 = std::log(fs[hi]);
    const double w = (std::log(f) - x0) / (x1 - x0);
    return t.values[lo] + w * (t.values[hi] - t.values[lo]);
}

} // namespace

FreqExpr::FreqExpr() : node_(make_constant(0.0)) {}

FreqExpr::FreqExpr(double value) : node_(make_constant(value)) {}

FreqExpr FreqExpr::constant(Complex value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw InvalidArgument("constant must be finite");
    return FreqExpr(make_constant(value));
}

FreqExpr FreqExpr::poly_ratio(std::vector<double> num, std::vector<double> den) {
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(num) || !finite(den)) throw InvalidArgument("polynomial coefficients must be finite");
    if (std::all_of(den.begin(), den.end(), [](double x) { return x == 0.0; })) throw AllZeroDenominator();
    auto n = std::make_shared<Node>();
    n->kind = Kind::PolyRatio;
    n->num = std::move(num);
    n->den = std::move(den);
    return FreqExpr(n);
}

FreqExpr FreqExpr::delay(double t_d) {
    if (!std::isfinite(t_d) || t_d < 0.0) throw InvalidArgument("delay time must be finite and >= 0");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Delay;
    n->delay = t_d;
    return FreqExpr(n);
}

FreqExpr FreqExpr::open_circuit() {
    static const auto open = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Open;
        return std::shared_ptr<const Node>(n);
    }();
    return FreqExpr(open);
}

FreqExpr FreqExpr::tabulated(std::shared_ptr<const ComplexTable> table, bool extrapolate) {
    if (!table || table->freq_hz.empty() || table->freq_hz.size() != table->values.size())
        throw InvalidArgument("tabulated expression needs a nonempty table with matching columns");
    for (std::size_t k = 0; k < table->freq_hz.size(); ++k) {
        if (!(table->freq_hz[k] > 0.0) || !std::isfinite(table->freq_hz[k]))
            throw InvalidArgument("tabulated frequencies must be finite and positive");
        if (k > 0 && !(table->freq_hz[k] > table->freq_hz[k - 1]))
            throw InvalidArgument("tabulated frequencies must be strictly increasing");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Tabulated;
    n->table = std::move(table);
    n->extrapolate = extrapolate;
    return FreqExpr(n);
}

FreqExpr::Kind FreqExpr::kind() const { return node_->kind; }

bool FreqExpr::is_zero() const { return node_->kind == Kind::Constant && node_->value == Complex(0.0); }

Complex FreqExpr::eval(Complex s) const {
    Evaluator ev(s);
    return ev(*this);
}

FreqExpr FreqExpr::binary(Kind kind, const FreqExpr& a, const FreqExpr& b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->a = a.node_;
    n->b = b.node_;
    return FreqExpr(n);
}

FreqExpr operator+(const FreqExpr& a, const FreqExpr& b) { return FreqExpr::binary(FreqExpr::Kind::Sum, a, b); }

FreqExpr operator-(const FreqExpr& a, const FreqExpr& b) { return a + (-b); }

FreqExpr operator*(const FreqExpr& a, const FreqExpr& b) {
    return FreqExpr::binary(FreqExpr::Kind::Product, a, b);
}

FreqExpr operator/(const FreqExpr& a, const FreqExpr& b) {
    if (b.is_open() && !a.is_open()) return FreqExpr::zero();
    return FreqExpr::binary(FreqExpr::Kind::Quotient, a, b);
}

FreqExpr operator-(const FreqExpr& a) {
    if (a.is_open()) return a;
    auto n = std::make_shared<Node>();
    n->kind = FreqExpr::Kind::Negation;
    n->a = a.node_;
    return FreqExpr(n);
}

FreqExpr parallel(const FreqExpr& a, const FreqExpr& b) {
    if (a.is_open()) return b;
    if (b.is_open()) return a;
    return FreqExpr::binary(FreqExpr::Kind::Parallel, a, b);
}

FreqExpr reciprocal(const FreqExpr& a) {
    if (a.is_open()) return FreqExpr::zero();
    // 1/(1/x) collapses back to x
    if (a.kind() == FreqExpr::Kind::Quotient && a.node_->a->kind == FreqExpr::Kind::Constant &&
        a.node_->a->value == Complex(1.0))
        return FreqExpr(a.node_->b);
    return FreqExpr::one() / a;
}

Complex Evaluator::operator()(const FreqExpr& expr) {
    const Wide v = eval_node(*expr.node_);
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

Evaluator::Wide Evaluator::eval_node(const Node& n) {
    using K = FreqExpr::Kind;
    switch (n.kind) {
    case K::Constant:
        return Wide(n.value);
    case K::Open:
        throw InfiniteValue("open-circuit impedance has no finite value");
    default:
        break;
    }
    if (auto it = cache_.find(&n); it != cache_.end()) return it->second;

    Wide v;
    switch (n.kind) {
    case K::PolyRatio: {
        const Wide d = horner(n.den, ws_);
        if (d == Wide(0.0L)) throw DivisionByZero("polynomial ratio denominator is zero");
        v = horner(n.num, ws_) / d;
        break;
    }
    case K::Delay:
        v = n.delay == 0.0 ? Wide(1.0L) : std::exp(-ws_ * static_cast<long double>(n.delay));
        break;
    case K::Sum:
        v = eval_node(*n.a) + eval_node(*n.b);
        break;
    case K::Product:
        v = eval_node(*n.a) * eval_node(*n.b);
        break;
    case K::Quotient: {
        const Wide num = eval_node(*n.a);
        const Wide den = eval_node(*n.b);
        if (den == Wide(0.0L)) throw DivisionByZero("quotient denominator is zero");
        v = num / den;
        break;
    }
    case K::Negation:
        v = -eval_node(*n.a);
        break;
    case K::Parallel: {
        const Wide za = eval_node(*n.a);
        const Wide zb = eval_node(*n.b);
        const Wide sum = za + zb;
        if (sum == Wide(0.0L)) throw DivisionByZero("parallel combination denominator is zero");
        v = za * zb / sum;
        break;
    }
    case K::Tabulated: {
        const double f = s_.imag() / kTwoPi;
        v = Wide(f < 0.0 ? std::conj(interpolate(*n.table, n.extrapolate, -f))
                         : interpolate(*n.table, n.extrapolate, f));
        break;
    }
    default:
        throw Error("unhandled expression node");
    }
    cache_.emplace(&n, v);
    return v;
}

FreqGrid::FreqGrid(double f_min, double f_max, int points_per_decade)
    : f_min_(f_min), f_max_(f_max), ppd_(points_per_decade) {
    if (!std::isfinite(f_min) || !(f_min > 0.0)) throw NonPositive("f_min", f_min);
    if (!std::isfinite(f_max) || !(f_max > f_min)) throw InvalidArgument("f_max must be finite and > f_min");
    if (points_per_decade < 1) throw InvalidArgument("points_per_decade must be >= 1");
    const double steps = points_per_decade * std::log10(f_max / f_min);
    const auto n = static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
    freqs_.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        freqs_.push_back(f_min * std::pow(10.0, static_cast<double>(k) / points_per_decade));
}

double magnitude_db(Complex h) {
    const double m = std::abs(h);
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(m);
}

std::vector<double> unwrap_phase_deg(std::span<const Complex> samples) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& h : samples) {
        const double principal = std::arg(h) * 180.0 / M_PI;
        if (out.empty()) {
            out.push_back(principal);
            continue;
        }
        const double turns = std::round((out.back() - principal) / 360.0);
        out.push_back(principal + 360.0 * turns);
    }
    return out;
}

SweepResult SweepResult::from_samples(std::vector<double> freq_hz, std::vector<Complex> samples) {
    SweepResult r;
    r.freq_hz = std::move(freq_hz);
    r.samples = std::move(samples);
    r.mag_db.reserve(r.samples.size());
    r.phase_principal_deg.reserve(r.samples.size());
    for (const auto& h : r.samples) {
        r.mag_db.push_back(magnitude_db(h));
        r.phase_principal_deg.push_back(std::arg(h) * 180.0 / M_PI);
    }
    r.phase_deg = unwrap_phase_deg(r.samples);
    return r;
}

PartialSweep try_sweep(const FreqExpr& expr, const FreqGrid& grid) {
    PartialSweep out;
    std::vector<double> fs;
    std::vector<Complex> hs;
    for (double f : grid.frequencies()) {
        try {
            hs.push_back(expr.at_hz(f));
            fs.push_back(f);
        } catch (const DivisionByZero& e) {
            out.error = e.at_frequency(f).what();
            out.failed_at_hz = f;
            break;
        } catch (const Error& e) {
            out.error = e.what();
            out.failed_at_hz = f;
            break;
        }
    }
    out.result = SweepResult::from_samples(std::move(fs), std::move(hs));
    return out;
}

SweepResult sweep(const FreqExpr& expr, const FreqGrid& grid) {
    std::vector<double> fs = grid.frequencies();
    std::vector<Complex> hs;
    hs.reserve(fs.size());
    for (double f : fs) {
        try {
            hs.push_back(expr.at_hz(f));
        } catch (const DivisionByZero& e) {
            throw e.at_frequency(f);
        }
    }
    return SweepResult::from_samples(std::move(fs), std::move(hs));
}

} // namespace eiac
