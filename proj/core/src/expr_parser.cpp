#include "eiac/expr_parser.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace eiac {

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Reads a decimal number at the start of `s`; returns characters consumed (0 on failure).
std::size_t read_number(std::string_view s, double& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out, std::chars_format::general);
    if (res.ec != std::errc()) return 0;
    return static_cast<std::size_t>(res.ptr - s.data());
}

// SI prefix at the start of `s`; returns characters consumed (0 if none).
std::size_t read_prefix(std::string_view s, double& scale) {
    if (s.empty()) return 0;
    if (s.rfind("\xC2\xB5", 0) == 0 || s.rfind("\xCE\xBC", 0) == 0) {  // µ, μ
        scale = 1e-6;
        return 2;
    }
    switch (s.front()) {
    case 'f': scale = 1e-15; return 1;
    case 'p': scale = 1e-12; return 1;
    case 'n': scale = 1e-9; return 1;
    case 'u': scale = 1e-6; return 1;
    case 'm': scale = 1e-3; return 1;
    case 'k': scale = 1e3; return 1;
    case 'M': scale = 1e6; return 1;
    case 'G': scale = 1e9; return 1;
    default: return 0;
    }
}

bool is_unit(std::string_view u) {
    static constexpr std::string_view units[] = {"H", "F", "Ohm", "ohm", "\xCE\xA9", "V", "A", "W", "Hz", "s"};
    for (auto x : units)
        if (u == x) return true;
    return false;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    FreqExpr parse() {
        FreqExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidArgument("expression '" + std::string(text_) + "': " + msg + " at column " +
                              std::to_string(pos_ + 1));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    FreqExpr expr() {
        FreqExpr e = term();
        for (;;) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    FreqExpr term() {
        FreqExpr e = unary();
        for (;;) {
            if (accept('*'))
                e = e * unary();
            else if (accept('/'))
                e = e / unary();
            else
                return e;
        }
    }

    FreqExpr unary() {
        if (accept('-')) {
            const FreqExpr e = unary();
            if (e.kind() == FreqExpr::Kind::Constant) return FreqExpr::constant(-e.eval(0.0));
            return -e;
        }
        if (accept('+')) return unary();
        return power();
    }

    FreqExpr power() {
        FreqExpr base = primary();
        if (!accept('^')) return base;
        const FreqExpr ex = unary();
        const double p = constant_value(ex, "exponent");
        if (p != std::round(p) || std::fabs(p) > 64) fail("exponent must be a small integer");
        const int k = static_cast<int>(std::fabs(p));
        FreqExpr out = FreqExpr::one();
        for (int i = 0; i < k; ++i) out = i == 0 ? base : out * base;
        return p < 0 ? reciprocal(out) : out;
    }

    double constant_value(const FreqExpr& e, const char* what) {
        if (e.kind() != FreqExpr::Kind::Constant) fail(std::string(what) + " must be a constant");
        const Complex v = e.eval(0.0);
        if (v.imag() != 0.0) fail(std::string(what) + " must be real");
        return v.real();
    }

    FreqExpr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            FreqExpr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    FreqExpr number() {
        double v = 0.0;
        const std::size_t n = read_number(text_.substr(pos_), v);
        if (n == 0) fail("bad number");
        pos_ += n;
        double scale = 1.0;
        const std::size_t p = read_prefix(text_.substr(pos_), scale);
        if (p > 0 && (pos_ + p >= text_.size() || !is_ident_char(text_[pos_ + p]))) {
            pos_ += p;
            v *= scale;
        }
        if (pos_ < text_.size() && is_ident_char(text_[pos_])) fail("unexpected character after number");
        return FreqExpr(v);
    }

    FreqExpr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);
        if (id == "s") return FreqExpr::poly_ratio({0.0, 1.0}, {1.0});
        if (id == "pi") return FreqExpr(3.14159265358979323846);
        if (id == "j") return FreqExpr::constant(Complex(0.0, 1.0));
        if (id == "par" || id == "delay") {
            expect('(');
            std::vector<FreqExpr> args{expr()};
            while (accept(',')) args.push_back(expr());
            expect(')');
            if (id == "delay") {
                if (args.size() != 1) fail("delay() takes one argument");
                const double t = constant_value(args[0], "delay time");
                if (!(t >= 0.0) || !std::isfinite(t)) fail("delay time must be >= 0");
                return FreqExpr::delay(t);
            }
            if (args.size() < 2) fail("par() needs at least two arguments");
            FreqExpr out = args[0];
            for (std::size_t k = 1; k < args.size(); ++k) out = parallel(out, args[k]);
            return out;
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(id) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

double parse_quantity(std::string_view text) {
    const std::string_view t = trim(text);
    if (t.empty()) throw InvalidArgument("empty value");
    std::string_view rest = t;
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    double v = 0.0;
    const std::size_t n = read_number(rest, v);
    if (n == 0) throw InvalidArgument("'" + std::string(t) + "' is not a number");
    rest.remove_prefix(n);
    rest = trim(rest);
    if (rest.empty()) return v;
    if (is_unit(rest)) return v;
    double scale = 1.0;
    const std::size_t p = read_prefix(rest, scale);
    if (p > 0 && (p == rest.size() || is_unit(rest.substr(p)))) return v * scale;
    throw InvalidArgument("'" + std::string(t) + "' has an unknown suffix");
}

FreqExpr parse_expression(std::string_view text) {
    if (trim(text).empty()) throw InvalidArgument("empty expression");
    return Parser(text).parse();
}

} // namespace eiac
