#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "plp/errors.hpp"
#include "plp/interval.hpp"
#include "plp/sieve.hpp"

namespace plp {

inline constexpr double kDefaultConstantWidth = 1e-10;
inline constexpr std::uint64_t kZetaMaxTerms = 80'000'000;
inline constexpr std::uint64_t kPConstantDirectCutoff = 10'000'000;

namespace detail {

inline int mobius_small(std::uint64_t k) {
    int count = 0;
    for (std::uint64_t p = 2; p * p <= k; ++p) {
        if (k % p == 0) {
            k /= p;
            ++count;
            if (k % p == 0) return 0;
        }
    }
    if (k > 1) ++count;
    return (count % 2 == 0) ? 1 : -1;
}

} // namespace detail

/// Certified enclosure of the Riemann zeta function at real s > 1.
///
/// Direct sum over k <= N with compensated summation, plus the two-sided
/// integral enclosure of the tail:
///     (N+1)^(1-s)/(s-1)  <=  sum_{k>N} k^-s  <=  N^(1-s)/(s-1).
/// N is chosen so the tail enclosure width N^-s fits half the target width.
inline IntervalValue zeta_real(double s, double target_width) {
    if (!(s > 1.0)) throw DomainError("zeta_real: s must be > 1");
    if (!(target_width > 0.0)) throw DomainError("zeta_real: target_width must be > 0");

    const double n_real = std::pow(2.0 / target_width, 1.0 / s);
    if (!(n_real < static_cast<double>(kZetaMaxTerms))) {
        throw PrecisionError("zeta_real: width " + std::to_string(target_width)
                             + " not reachable within " + std::to_string(kZetaMaxTerms) + " terms");
    }
    std::uint64_t n_terms = static_cast<std::uint64_t>(n_real) + 2;
    if (n_terms < 16) n_terms = 16;

    KahanSum sum;
    for (std::uint64_t k = n_terms; k >= 1; --k) {
        sum.add(std::pow(static_cast<double>(k), -s));
    }
    const IntervalValue partial = sum.enclosure();

    const double sm1_down = rnd::down(s - 1.0);
    const double sm1_up = rnd::up(s - 1.0);
    const double tail_lo =
        rnd::div_down(rnd::pow_down(static_cast<double>(n_terms + 1), 1.0 - s), sm1_up);
    const double tail_hi =
        rnd::div_up(rnd::pow_up(static_cast<double>(n_terms), 1.0 - s), sm1_down);

    const IntervalValue result{rnd::add_down(partial.lo, tail_lo),
                               rnd::add_up(partial.hi, tail_hi)};
    if (result.width() > target_width) {
        throw PrecisionError("zeta_real: achieved width " + std::to_string(result.width())
                             + " exceeds target " + std::to_string(target_width));
    }
    return result;
}

/// Certified enclosure of P(s) = sum over primes of p^-s by direct
/// summation over the primes <= cutoff. The tail over primes > cutoff is
/// bounded above through the full integer tail:
///     sum_{p > cutoff} p^-s  <=  sum_{m > cutoff} m^-s  <=  cutoff^(1-s)/(s-1).
inline IntervalValue prime_zeta_direct(const SieveTables& t, double s, std::uint64_t cutoff) {
    if (!(s > 1.0)) throw DomainError("prime_zeta_direct: s must be > 1");
    if (cutoff < 1) throw DomainError("prime_zeta_direct: cutoff must be >= 1");
    if (cutoff > t.limit) {
        throw DomainError("prime_zeta_direct: cutoff " + std::to_string(cutoff)
                          + " exceeds sieve limit " + std::to_string(t.limit));
    }

    KahanSum sum;
    for (std::uint32_t p : t.primes) {
        if (p > cutoff) break;
        sum.add(std::pow(static_cast<double>(p), -s));
    }
    const IntervalValue partial = sum.enclosure();
    const double tail_hi =
        rnd::div_up(rnd::pow_up(static_cast<double>(cutoff), 1.0 - s), rnd::down(s - 1.0));
    return {partial.lo, rnd::add_up(partial.hi, tail_hi)};
}

/// Certified enclosure of P(s) through the Moebius identity
///     P(s) = sum_{k>=1} mu(k)/k * ln zeta(ks).
///
/// The series is truncated at K once the remainder bound
///     sum_{k>K} |mu(k)/k * ln zeta(ks)|  <=  3 * 2^-(K+1)s / (1 - 2^-s)
/// drops below a small fraction of the width budget; each zeta factor is
/// evaluated as an interval with its own share of the budget. The per-term
/// bound ln zeta(x) <= 3*2^-x holds for x >= 2 via
/// ln zeta(x) <= zeta(x) - 1 <= 2^-x (1 + 2/(x-1)), and every truncated
/// term has x = ks >= 2s > 2.
inline IntervalValue prime_zeta_mobius(double s, double target_width) {
    if (!(s > 1.0)) throw DomainError("prime_zeta_mobius: s must be > 1");
    if (!(target_width > 0.0)) throw DomainError("prime_zeta_mobius: target_width must be > 0");

    // Truncation point: remainder <= target_width/64.
    const double trunc_budget = target_width / 64.0;
    const double denom_down = rnd::sub_down(1.0, rnd::pow_up(2.0, -s));
    unsigned trunc_k = 0;
    double remainder_up = 0.0;
    for (unsigned k = 1; k <= 512; ++k) {
        const double geom_up =
            rnd::div_up(rnd::pow_up(2.0, -(double(k) + 1.0) * s), denom_down);
        const double r = rnd::mul_up(3.0, geom_up);
        if (r <= trunc_budget) {
            trunc_k = k;
            remainder_up = r;
            break;
        }
    }
    if (trunc_k == 0) {
        throw PrecisionError("prime_zeta_mobius: truncation bound does not reach width "
                             + std::to_string(target_width));
    }

    // Per-term zeta width budgets halve with k but never drop below what
    // double precision can deliver; the final width check below still
    // guards the overall contract.
    constexpr double kZetaBudgetFloor = 1e-12;
    IntervalValue acc{0.0, 0.0};
    double zeta_budget = target_width / 16.0;
    for (unsigned k = 1; k <= trunc_k; ++k, zeta_budget /= 2.0) {
        const int mu = detail::mobius_small(k);
        if (mu == 0) continue;
        const IntervalValue z =
            zeta_real(double(k) * s, std::max(zeta_budget, kZetaBudgetFloor));
        // zeta >= 1, so ln is evaluated on a positive interval and the log
        // interval is no wider than the zeta interval.
        const IntervalValue ln{rnd::log_down(z.lo), rnd::log_up(z.hi)};
        const double kd = static_cast<double>(k);
        IntervalValue term{rnd::div_down(ln.lo, kd), rnd::div_up(ln.hi, kd)};
        if (mu < 0) term = {-term.hi, -term.lo};
        acc += term;
    }

    const IntervalValue result{rnd::sub_down(acc.lo, remainder_up),
                               rnd::add_up(acc.hi, remainder_up)};
    if (result.width() > target_width) {
        throw PrecisionError("prime_zeta_mobius: achieved width " + std::to_string(result.width())
                             + " exceeds target " + std::to_string(target_width));
    }
    return result;
}

/// Cached P(s) for integer s >= 2: the intersection of the direct-sum and
/// Moebius enclosures at the default width. A disjoint pair means one of
/// the two evaluators is wrong, which is always a bug.
inline IntervalValue p_constant(unsigned s, const SieveTables& t) {
    if (s < 2) throw DomainError("p_constant: s must be >= 2");

    static std::mutex cache_mutex;
    static std::map<std::pair<unsigned, std::uint64_t>, IntervalValue> cache;

    const std::uint64_t cutoff = std::min<std::uint64_t>(t.limit, kPConstantDirectCutoff);
    const auto key = std::make_pair(s, cutoff);

    std::scoped_lock lock(cache_mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;

    const IntervalValue direct = prime_zeta_direct(t, static_cast<double>(s), cutoff);
    const IntervalValue mobius = prime_zeta_mobius(static_cast<double>(s), kDefaultConstantWidth);
    const auto both = intersection(direct, mobius);
    if (!both) {
        throw InternalError("p_constant: direct and Moebius enclosures of P("
                            + std::to_string(s) + ") are disjoint");
    }
    cache.emplace(key, *both);
    return *both;
}

} // namespace plp
