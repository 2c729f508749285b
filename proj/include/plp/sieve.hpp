#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "plp/errors.hpp"
#include "plp/interval.hpp"

namespace plp {

using BigInt = mpz_class;

inline constexpr std::uint64_t kDefaultMaxSieveLimit = 100'000'000;

/// Integer square root by Newton iteration on naturals with a final
/// correction step; floor(sqrt(n)) exactly, no floating point involved.
inline std::uint64_t isqrt(std::uint64_t n) {
    if (n < 2) return n;
    std::uint64_t x = n;
    std::uint64_t y = (x + 1) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    using u128 = unsigned __int128;
    while (u128(x) * x > n) --x;
    while (u128(x + 1) * (x + 1) <= n) ++x;
    return x;
}

/// Least-prime-factor table plus the ordered primes up to `limit`.
/// Immutable after construction; queries are safe for concurrent readers.
struct SieveTables {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> lpf;      // indexed 0..limit; [0] and [1] are unread sentinels
    std::vector<std::uint32_t> primes;   // ascending, exactly {n : lpf[n] == n}
};

inline SieveTables build_sieve(std::uint64_t limit,
                               std::uint64_t max_limit = kDefaultMaxSieveLimit) {
    if (limit < 2 || limit > max_limit) {
        throw ConfigError("build_sieve: limit " + std::to_string(limit)
                          + " outside [2, " + std::to_string(max_limit) + "]");
    }
    SieveTables t;
    t.limit = limit;
    t.lpf.assign(limit + 1, 0);
    t.primes.reserve(limit > 16 ? static_cast<std::size_t>(1.2 * limit / std::log(double(limit))) : 8);
    // Linear sieve: every composite is struck exactly once, by its least
    // prime factor.
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.lpf[i] == 0) {
            t.lpf[i] = static_cast<std::uint32_t>(i);
            t.primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : t.primes) {
            if (p > t.lpf[i] || i * p > limit) break;
            t.lpf[i * p] = p;
        }
    }
    return t;
}

inline std::uint64_t least_prime_factor(const SieveTables& t, std::uint64_t n) {
    if (n < 2 || n > t.limit) {
        throw DomainError("least_prime_factor: " + std::to_string(n)
                          + " outside [2, " + std::to_string(t.limit) + "]");
    }
    return t.lpf[n];
}

inline bool is_prime_in_range(const SieveTables& t, std::uint64_t n) {
    return n >= 2 && n <= t.limit && t.lpf[n] == n;
}

/// Prime factorization as (prime, exponent) pairs with ascending primes.
struct Factorization {
    std::uint64_t n = 1;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;

    /// Omega with multiplicity: sum of exponents.
    std::uint32_t big_omega() const {
        std::uint32_t s = 0;
        for (const auto& [p, e] : factors) s += e;
        return s;
    }

    /// Distinct prime factor count.
    std::uint32_t small_omega() const { return static_cast<std::uint32_t>(factors.size()); }
};

inline Factorization factorize(const SieveTables& t, std::uint64_t n) {
    if (n < 1 || n > t.limit) {
        throw DomainError("factorize: " + std::to_string(n)
                          + " outside [1, " + std::to_string(t.limit) + "]");
    }
    Factorization f;
    f.n = n;
    while (n > 1) {
        const std::uint64_t p = t.lpf[n];
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.emplace_back(p, e);
    }
    return f;
}

/// pi(x): number of primes <= x.
inline std::uint64_t prime_count(const SieveTables& t, std::uint64_t x) {
    if (x > t.limit) {
        throw DomainError("prime_count: " + std::to_string(x) + " exceeds sieve limit "
                          + std::to_string(t.limit));
    }
    const auto it = std::upper_bound(t.primes.begin(), t.primes.end(), x);
    return static_cast<std::uint64_t>(it - t.primes.begin());
}

/// |{p prime : p^2 <= n}|, via the integer criterion p <= isqrt(n).
inline std::uint64_t prime_count_at_sqrt(const SieveTables& t, std::uint64_t n) {
    if (n < 1) throw DomainError("prime_count_at_sqrt: n must be >= 1");
    const std::uint64_t r = isqrt(n);
    if (r > t.limit) {
        throw DomainError("prime_count_at_sqrt: isqrt(n) = " + std::to_string(r)
                          + " exceeds sieve limit " + std::to_string(t.limit));
    }
    return prime_count(t, r);
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// Outcome of a primality test. `probabilistic` is set when the answer
/// comes from the strong-probable-prime regime (n >= 2^64) rather than
/// from a proven-deterministic witness set.
struct PrimalityResult {
    bool is_prime = false;
    bool probabilistic = false;
};

namespace detail {

// Fixed witness set: the first twelve primes. Proven to classify every
// n < 2^64 correctly (Sorenson & Webster cover up to 3.18e24).
inline constexpr std::array<unsigned, 12> kMillerRabinWitnesses = {2,  3,  5,  7,  11, 13,
                                                                   17, 19, 23, 29, 31, 37};

inline bool strong_probable_prime(const BigInt& n, unsigned a) {
    // n odd, n > a. Write n - 1 = 2^r * d with d odd.
    BigInt d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);

    BigInt x, base(a);
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < r; ++i) {
        mpz_mul(x.get_mpz_t(), x.get_mpz_t(), x.get_mpz_t());
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Miller-Rabin with the fixed witness set {2,...,37}: deterministic for
/// n < 2^64, strong-probable-prime above. The probabilistic flag reports
/// the regime (n >= 2^64), which is how certificates over such terms get
/// marked.
inline PrimalityResult classify_prime(const BigInt& n) {
    if (n < 2) return {false, false};
    static const BigInt kDeterministicBound = BigInt(1) << 64;
    const bool probabilistic = n >= kDeterministicBound;
    for (unsigned p : detail::kMillerRabinWitnesses) {
        if (n == p) return {true, false};
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return {false, probabilistic};
    }
    if (n < 37 * 37) return {true, false};  // no witness divides it and n < 37^2

    for (unsigned a : detail::kMillerRabinWitnesses) {
        if (!detail::strong_probable_prime(n, a)) return {false, probabilistic};
    }
    return {true, probabilistic};
}

inline bool is_prime(const BigInt& n) { return classify_prime(n).is_prime; }

/// Upper bound on pi(n): n/ln n * (1 + 3/(2 ln n)), evaluated with upward
/// directed rounding so the returned value never understates the formula.
inline double rs_upper_bound(std::uint64_t n) {
    if (n < 2) throw DomainError("rs_upper_bound: n must be >= 2");
    const double x_up = rnd::up(static_cast<double>(n));
    const double x_down = rnd::down(static_cast<double>(n));
    const double ln_down = rnd::log_down(x_down);
    const double q_up = rnd::div_up(x_up, ln_down);
    const double inner_up = rnd::add_up(1.0, rnd::div_up(3.0, rnd::mul_down(2.0, ln_down)));
    return rnd::mul_up(q_up, inner_up);
}

} // namespace plp
