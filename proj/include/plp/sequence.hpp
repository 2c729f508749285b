#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "plp/errors.hpp"
#include "plp/interval.hpp"
#include "plp/sieve.hpp"

namespace plp {

/// Strictly increasing naturals > 1 with pairwise coprime terms.
/// Construction does not enforce the invariants; validate_plp does.
struct PlpSequence {
    std::vector<BigInt> terms;

    std::size_t size() const { return terms.size(); }
};

enum class ViolationKind { term_le_one, not_increasing, common_factor };

struct Violation {
    ViolationKind kind;
    std::size_t first = 0;
    std::size_t second = 0;
    BigInt detail;  // offending term, or the shared gcd
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;
};

inline std::string describe(const Violation& v) {
    switch (v.kind) {
        case ViolationKind::term_le_one:
            return "term " + v.detail.get_str() + " at index " + std::to_string(v.first)
                   + " is not greater than 1";
        case ViolationKind::not_increasing:
            return "term at index " + std::to_string(v.second) + " (" + v.detail.get_str()
                   + ") does not increase on its predecessor";
        case ViolationKind::common_factor:
            return "terms at indices " + std::to_string(v.first) + " and "
                   + std::to_string(v.second) + " share the factor " + v.detail.get_str();
    }
    return "unknown violation";
}

/// Checks every PLP invariant and reports all violations found. The
/// pairwise gcd scan is the plain O(k^2) one.
inline ValidationReport validate_plp(const std::vector<BigInt>& terms) {
    ValidationReport report;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i] <= 1) {
            report.violations.push_back({ViolationKind::term_le_one, i, i, terms[i]});
        }
        if (i > 0 && terms[i] <= terms[i - 1]) {
            report.violations.push_back({ViolationKind::not_increasing, i - 1, i, terms[i]});
        }
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            BigInt g = gcd(terms[i], terms[j]);
            if (g != 1) {
                report.violations.push_back({ViolationKind::common_factor, i, j, g});
            }
        }
    }
    report.valid = report.violations.empty();
    return report;
}

inline ValidationReport validate_plp(const PlpSequence& seq) { return validate_plp(seq.terms); }

enum class GeneratorKind {
    fermat,
    mersenne_prime_exponent,
    fibonacci_prime_index,
    prime_squares,
    sylvester,
    random_greedy,
};

inline std::string to_string(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::fermat: return "fermat";
        case GeneratorKind::mersenne_prime_exponent: return "mersenne_prime_exponent";
        case GeneratorKind::fibonacci_prime_index: return "fibonacci_prime_index";
        case GeneratorKind::prime_squares: return "prime_squares";
        case GeneratorKind::sylvester: return "sylvester";
        case GeneratorKind::random_greedy: return "random_greedy";
    }
    return "?";
}

inline std::optional<GeneratorKind> generator_kind_from_string(const std::string& name) {
    if (name == "fermat") return GeneratorKind::fermat;
    if (name == "mersenne_prime_exponent") return GeneratorKind::mersenne_prime_exponent;
    if (name == "fibonacci_prime_index") return GeneratorKind::fibonacci_prime_index;
    if (name == "prime_squares") return GeneratorKind::prime_squares;
    if (name == "sylvester") return GeneratorKind::sylvester;
    if (name == "random_greedy") return GeneratorKind::random_greedy;
    return std::nullopt;
}

struct GenerateOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> range_hint;
    const SieveTables* sieve = nullptr;
};

namespace detail {

// Doubly-exponential families: cap the index so a single term stays
// around a megabyte.
inline constexpr std::size_t kDoublingFamilyMaxCount = 24;

inline PlpSequence generate_fermat(std::size_t count) {
    if (count > kDoublingFamilyMaxCount) {
        throw GenerationError("fermat: count " + std::to_string(count)
                              + " exceeds the supported maximum "
                              + std::to_string(kDoublingFamilyMaxCount));
    }
    PlpSequence seq;
    for (std::size_t n = 0; n < count; ++n) {
        BigInt f = (BigInt(1) << (std::uint64_t(1) << n)) + 1;
        seq.terms.push_back(std::move(f));
    }
    return seq;
}

inline PlpSequence generate_mersenne(std::size_t count) {
    PlpSequence seq;
    BigInt p = 1;
    for (std::size_t i = 0; i < count; ++i) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        seq.terms.push_back((BigInt(1) << p.get_ui()) - 1);
    }
    return seq;
}

inline PlpSequence generate_fibonacci_prime_index(std::size_t count) {
    // Starts at index 3: F_2 = 1 is not > 1. gcd(F_m, F_n) = F_gcd(m,n),
    // so distinct prime indices >= 3 give pairwise coprime terms.
    PlpSequence seq;
    BigInt p = 2;
    for (std::size_t i = 0; i < count; ++i) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        BigInt f;
        mpz_fib_ui(f.get_mpz_t(), p.get_ui());
        seq.terms.push_back(std::move(f));
    }
    return seq;
}

inline PlpSequence generate_prime_squares(std::size_t count, const SieveTables* t) {
    if (t == nullptr) {
        throw UsageError("prime_squares: a sieve is required");
    }
    if (t->primes.size() < count) {
        throw DomainError("prime_squares: sieve holds only " + std::to_string(t->primes.size())
                          + " primes, need " + std::to_string(count)
                          + "; raise the sieve limit");
    }
    PlpSequence seq;
    for (std::size_t i = 0; i < count; ++i) {
        BigInt p(t->primes[i]);
        seq.terms.push_back(p * p);
    }
    return seq;
}

inline PlpSequence generate_sylvester(std::size_t count) {
    if (count > kDoublingFamilyMaxCount) {
        throw GenerationError("sylvester: count " + std::to_string(count)
                              + " exceeds the supported maximum "
                              + std::to_string(kDoublingFamilyMaxCount));
    }
    PlpSequence seq;
    BigInt a = 2;
    for (std::size_t i = 0; i < count; ++i) {
        seq.terms.push_back(a);
        a = a * a - a + 1;
    }
    return seq;
}

inline PlpSequence generate_random_greedy(std::size_t count, const GenerateOptions& opts) {
    if (!opts.seed || !opts.range_hint) {
        throw UsageError("random_greedy: seed and range_hint are required");
    }
    const std::uint64_t range = *opts.range_hint;
    if (range < 2) throw DomainError("random_greedy: range_hint must be >= 2");

    std::mt19937_64 rng(*opts.seed);
    std::vector<std::uint64_t> kept;
    kept.reserve(count);
    const std::uint64_t max_attempts = 1000 + 400 * std::uint64_t(count);
    for (std::uint64_t attempt = 0; kept.size() < count; ++attempt) {
        if (attempt >= max_attempts) {
            throw GenerationError("random_greedy: could not collect " + std::to_string(count)
                                  + " pairwise coprime terms in [2, " + std::to_string(range)
                                  + "]");
        }
        const std::uint64_t draw = 2 + rng() % (range - 1);
        bool ok = true;
        for (std::uint64_t k : kept) {
            if (std::gcd(k, draw) != 1) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(draw);
    }
    std::sort(kept.begin(), kept.end());
    PlpSequence seq;
    for (std::uint64_t k : kept) seq.terms.emplace_back(static_cast<unsigned long>(k));
    return seq;
}

} // namespace detail

/// Produces `count` terms of the requested family; every output is a valid
/// PLP sequence by construction.
inline PlpSequence generate(GeneratorKind kind, std::size_t count,
                            const GenerateOptions& opts = {}) {
    if (count < 1) throw UsageError("generate: count must be >= 1");
    switch (kind) {
        case GeneratorKind::fermat: return detail::generate_fermat(count);
        case GeneratorKind::mersenne_prime_exponent: return detail::generate_mersenne(count);
        case GeneratorKind::fibonacci_prime_index:
            return detail::generate_fibonacci_prime_index(count);
        case GeneratorKind::prime_squares: return detail::generate_prime_squares(count, opts.sieve);
        case GeneratorKind::sylvester: return detail::generate_sylvester(count);
        case GeneratorKind::random_greedy: return detail::generate_random_greedy(count, opts);
    }
    throw UsageError("generate: unknown generator kind");
}

namespace detail {

/// Enclosure of 1/n for a natural n >= 1 of any size.
inline IntervalValue reciprocal_enclosure(const BigInt& n) {
    // Terms beyond double range: 1/n is positive and below 2^-1000.
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 1020) {
        return {0.0, std::ldexp(1.0, -1000)};
    }
    // mpz_get_d truncates toward zero, so for positive n: d <= n < up(d).
    const double d = n.get_d();
    return {rnd::div_down(1.0, rnd::up(d)), rnd::div_up(1.0, d)};
}

} // namespace detail

/// Enclosure of the sum of reciprocals of the terms, by directed-rounding
/// accumulation. Width stays within 4 ulp of the running magnitude per term.
inline IntervalValue reciprocal_sum(const PlpSequence& seq) {
    if (seq.terms.empty()) return {0.0, 0.0};
    IntervalValue acc = detail::reciprocal_enclosure(seq.terms.front());
    for (std::size_t i = 1; i < seq.terms.size(); ++i) {
        acc += detail::reciprocal_enclosure(seq.terms[i]);
    }
    return acc;
}

} // namespace plp
