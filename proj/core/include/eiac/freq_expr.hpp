#pragma once

// Complex-frequency expression algebra.
//
// A FreqExpr is an immutable evaluation DAG over the Laplace variable s.
// Rational blocks, pure transport delays and arbitrary sums / products /
// quotients / parallel combinations of them can be built and evaluated at any
// complex s. Nodes are shared freely between expressions; nothing is mutated
// after construction, so expressions may be evaluated concurrently.

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eiac/errors.hpp"

namespace eiac {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// s = j*2*pi*f
inline Complex s_at_hz(double f_hz) { return {0.0, kTwoPi * f_hz}; }

/// Frequency table of complex values (impedance import).
struct ComplexTable {
    std::vector<double> freq_hz;   // strictly increasing, > 0
    std::vector<Complex> values;
};

namespace detail {
struct Node;
}

class FreqExpr {
public:
    enum class Kind {
        Constant,
        PolyRatio,
        Delay,
        Sum,
        Product,
        Quotient,
        Negation,
        Parallel,
        Open,
        Tabulated,
    };

    /// The zero constant.
    FreqExpr();
    // Implicit so formulas can mix scalars and expressions.
    FreqExpr(double value);  // NOLINT(google-explicit-constructor)

    static FreqExpr constant(Complex value);
    static FreqExpr zero() { return constant(0.0); }
    static FreqExpr one() { return constant(1.0); }

    /// sum(num[k] s^k) / sum(den[k] s^k). Throws AllZeroDenominator.
    static FreqExpr poly_ratio(std::vector<double> num, std::vector<double> den);

    /// exp(-s * t_d), t_d >= 0.
    static FreqExpr delay(double t_d);

    /// Infinite impedance. Its reciprocal is the exact zero constant and it is
    /// the identity element of parallel(); evaluating it directly throws.
    static FreqExpr open_circuit();

    /// Log-frequency linear interpolation of real and imaginary parts.
    /// Only meaningful on the imaginary axis: the real part of s is ignored.
    /// With `extrapolate`, the end segments are extended beyond the table.
    static FreqExpr tabulated(std::shared_ptr<const ComplexTable> table, bool extrapolate = false);

    Kind kind() const;
    bool is_open() const { return kind() == Kind::Open; }
    /// True only for a constant node that is exactly 0.
    bool is_zero() const;
    bool same_node(const FreqExpr& other) const { return node_ == other.node_; }

    Complex eval(Complex s) const;
    Complex at_hz(double f_hz) const { return eval(s_at_hz(f_hz)); }

    friend FreqExpr operator+(const FreqExpr& a, const FreqExpr& b);
    friend FreqExpr operator-(const FreqExpr& a, const FreqExpr& b);
    friend FreqExpr operator*(const FreqExpr& a, const FreqExpr& b);
    friend FreqExpr operator/(const FreqExpr& a, const FreqExpr& b);
    friend FreqExpr operator-(const FreqExpr& a);
    friend FreqExpr parallel(const FreqExpr& a, const FreqExpr& b);
    friend FreqExpr reciprocal(const FreqExpr& a);

private:
    friend class Evaluator;
    explicit FreqExpr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    static FreqExpr binary(Kind kind, const FreqExpr& a, const FreqExpr& b);

    std::shared_ptr<const detail::Node> node_;
};

FreqExpr operator+(const FreqExpr& a, const FreqExpr& b);
FreqExpr operator-(const FreqExpr& a, const FreqExpr& b);
FreqExpr operator*(const FreqExpr& a, const FreqExpr& b);
FreqExpr operator/(const FreqExpr& a, const FreqExpr& b);
FreqExpr operator-(const FreqExpr& a);

/// a*b/(a+b); parallel(x, open) == x.
FreqExpr parallel(const FreqExpr& a, const FreqExpr& b);

/// 1/a with reciprocal(open) == 0 exactly.
FreqExpr reciprocal(const FreqExpr& a);

/// Evaluates many expressions at one s, sharing subexpression values.
/// Intermediate values are carried in extended precision; the table formulas
/// contain differences such as Z_Ci - Z_g that cancel strongly above resonance.
class Evaluator {
public:
    using Wide = std::complex<long double>;

    explicit Evaluator(Complex s) : s_(s), ws_(s) {}

    Complex operator()(const FreqExpr& expr);
    Complex s() const { return s_; }

private:
    Wide eval_node(const detail::Node& node);

    Complex s_;
    Wide ws_;
    std::unordered_map<const detail::Node*, Wide> cache_;
};

/// Log-spaced frequency grid f_k = f_min * 10^(k / ppd), k = 0..n-1,
/// with the last point the largest one not exceeding f_max.
class FreqGrid {
public:
    FreqGrid(double f_min, double f_max, int points_per_decade);

    double f_min() const { return f_min_; }
    double f_max() const { return f_max_; }
    int points_per_decade() const { return ppd_; }
    const std::vector<double>& frequencies() const& { return freqs_; }
    std::vector<double> frequencies() && { return std::move(freqs_); }
    std::size_t size() const { return freqs_.size(); }

private:
    double f_min_;
    double f_max_;
    int ppd_;
    std::vector<double> freqs_;
};

struct SweepResult {
    std::vector<double> freq_hz;
    std::vector<Complex> samples;
    std::vector<double> mag_db;               // -inf where |H| == 0
    std::vector<double> phase_deg;            // unwrapped
    std::vector<double> phase_principal_deg;  // in (-180, 180]

    std::size_t size() const { return samples.size(); }

    static SweepResult from_samples(std::vector<double> freq_hz, std::vector<Complex> samples);
};

/// Unwraps sequentially (180 deg threshold) from the principal value of the first sample.
std::vector<double> unwrap_phase_deg(std::span<const Complex> samples);

double magnitude_db(Complex h);

/// Throws DivisionByZero (frequency attached) or any other evaluation error.
SweepResult sweep(const FreqExpr& expr, const FreqGrid& grid);

/// Like sweep() but keeps the samples computed before a failure.
struct PartialSweep {
    SweepResult result;
    std::optional<std::string> error;
    std::optional<double> failed_at_hz;
};
PartialSweep try_sweep(const FreqExpr& expr, const FreqGrid& grid);

} // namespace eiac
