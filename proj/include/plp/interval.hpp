#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace plp {

// Directed rounding without touching the FPU rounding mode. IEEE-754
// +,-,*,/,sqrt round correctly to nearest, so the exact result lies
// strictly between the two floating-point neighbours of the computed one.
// libm's log/pow are not correctly rounded; glibc documents errors of a
// couple of ulps at most, covered here by a wider outward step.
namespace rnd {

inline double down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

inline double up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double down_n(double x, int n) {
    while (n-- > 0) x = down(x);
    return x;
}

inline double up_n(double x, int n) {
    while (n-- > 0) x = up(x);
    return x;
}

inline double add_down(double a, double b) { return down(a + b); }
inline double add_up(double a, double b) { return up(a + b); }
inline double sub_down(double a, double b) { return down(a - b); }
inline double sub_up(double a, double b) { return up(a - b); }
inline double mul_down(double a, double b) { return down(a * b); }
inline double mul_up(double a, double b) { return up(a * b); }
inline double div_down(double a, double b) { return down(a / b); }
inline double div_up(double a, double b) { return up(a / b); }
inline double sqrt_down(double a) { return down(std::sqrt(a)); }
inline double sqrt_up(double a) { return up(std::sqrt(a)); }

// Margin for libm calls that are only nearly correctly rounded.
inline constexpr int kLibmUlps = 3;

inline double log_down(double a) { return down_n(std::log(a), kLibmUlps); }
inline double log_up(double a) { return up_n(std::log(a), kLibmUlps); }
inline double pow_down(double b, double e) { return down_n(std::pow(b, e), kLibmUlps); }
inline double pow_up(double b, double e) { return up_n(std::pow(b, e), kLibmUlps); }

} // namespace rnd

/// Closed interval [lo, hi] certified to contain the real quantity it
/// stands for. Producers are responsible for directed rounding and tail
/// bounds; consumers may rely on containment only.
struct IntervalValue {
    double lo = 0.0;
    double hi = 0.0;

    static IntervalValue exact(double v) { return {v, v}; }

    bool valid() const { return lo <= hi; }
    double width() const { return rnd::sub_up(hi, lo); }
    double mid() const { return 0.5 * (lo + hi); }

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const IntervalValue& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const IntervalValue& o) const { return lo <= o.hi && o.lo <= hi; }

    /// True when every point of *this is strictly below every point of o.
    bool strictly_below(const IntervalValue& o) const { return hi < o.lo; }
};

inline IntervalValue operator+(const IntervalValue& a, const IntervalValue& b) {
    return {rnd::add_down(a.lo, b.lo), rnd::add_up(a.hi, b.hi)};
}

inline IntervalValue& operator+=(IntervalValue& a, const IntervalValue& b) {
    a = a + b;
    return a;
}

inline std::optional<IntervalValue> intersection(const IntervalValue& a, const IntervalValue& b) {
    IntervalValue r{a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
    if (!r.valid()) return std::nullopt;
    return r;
}

/// Kahan-compensated accumulation of nonnegative terms. value() is accurate
/// to a couple of ulps of the total independent of term count;
/// error_radius() is a rigorous bound covering both the compensated
/// summation error (2u per Goldberg, u = eps/2) and up to three ulps of
/// per-term input error, with a 2x margin. Valid for fewer than 2^40 terms.
class KahanSum {
public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
        ++count_;
    }

    double value() const { return sum_; }
    std::uint64_t count() const { return count_; }

    double error_radius() const {
        return 8.0 * std::numeric_limits<double>::epsilon() * sum_;
    }

    /// Enclosure of the exact sum of the exact term values.
    IntervalValue enclosure() const {
        const double r = error_radius();
        double lo = rnd::sub_down(sum_, r);
        if (lo < 0.0) lo = 0.0;  // all terms are nonnegative
        return {lo, rnd::add_up(sum_, r)};
    }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
    std::uint64_t count_ = 0;
};

} // namespace plp
