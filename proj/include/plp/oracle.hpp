#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "plp/errors.hpp"
#include "plp/interval.hpp"
#include "plp/sequence.hpp"
#include "plp/sieve.hpp"

namespace plp {

inline constexpr std::uint64_t kDefaultOracleLimit = 5000;

/// Outcome of an exhaustive extremal search over composite PLP subsets of
/// [4, n]: the witness attains best_size (or best_sum) and no larger
/// (or larger-sum) subset exists.
struct ExtremalResult {
    std::uint64_t n = 0;
    std::size_t best_size = 0;
    PlpSequence witness;
    std::optional<IntervalValue> best_sum;
};

namespace detail {

// A composite c <= n factored against the primes <= sqrt(n): `small_mask`
// has one bit per such prime dividing c, `large_factor` is c's single
// prime factor > sqrt(n) (0 if none). Two candidates are coprime iff their
// masks are disjoint and their large factors differ.
struct OracleCandidate {
    std::uint32_t value = 0;
    std::uint64_t small_mask = 0;
    std::uint32_t large_factor = 0;
};

struct OracleSpace {
    std::vector<std::uint32_t> small_primes;  // primes p with p^2 <= n
    std::vector<OracleCandidate> candidates;  // composites in [4, n], ascending
};

inline OracleSpace build_oracle_space(std::uint64_t n, const SieveTables& t,
                                      std::uint64_t oracle_limit, const char* op) {
    if (n < 4 || n > oracle_limit) {
        throw DomainError(std::string(op) + ": n = " + std::to_string(n) + " outside [4, "
                          + std::to_string(oracle_limit) + "]");
    }
    const std::uint64_t root = isqrt(n);
    if (root > t.limit) {
        throw DomainError(std::string(op) + ": isqrt(n) = " + std::to_string(root)
                          + " exceeds sieve limit " + std::to_string(t.limit));
    }

    OracleSpace space;
    for (std::uint32_t p : t.primes) {
        if (p > root) break;
        space.small_primes.push_back(p);
    }
    if (space.small_primes.size() > 64) {
        throw DomainError(std::string(op) + ": more than 64 primes below sqrt(n)");
    }

    for (std::uint64_t c = 4; c <= n; ++c) {
        std::uint64_t rest = c;
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < space.small_primes.size(); ++i) {
            const std::uint64_t p = space.small_primes[i];
            if (p * p > rest) break;
            if (rest % p == 0) {
                mask |= std::uint64_t(1) << i;
                while (rest % p == 0) rest /= p;
            }
        }
        if (mask == 0) continue;  // c is prime (its only factor exceeds sqrt(n))
        space.candidates.push_back({static_cast<std::uint32_t>(c), mask,
                                    rest > 1 ? static_cast<std::uint32_t>(rest) : 0});
    }
    return space;
}

// Depth-first search over candidates in ascending order. Every future pick
// consumes an unused small prime as its least prime factor, so
// chosen + popcount(unused) bounds the reachable size; pruning on it keeps
// only branches that can strictly improve, and the first maximum reached
// is the lexicographically smallest one.
class SizeSearch {
public:
    explicit SizeSearch(const OracleSpace& space) : space_(space) {
        all_mask_ = space_.small_primes.size() == 64
                        ? ~std::uint64_t(0)
                        : (std::uint64_t(1) << space_.small_primes.size()) - 1;
    }

    void run() { dfs(0); }

    const std::vector<std::uint32_t>& best() const { return best_; }

private:
    void dfs(std::size_t start) {
        if (chosen_.size() > best_.size()) best_ = chosen_;
        const std::uint64_t unused = all_mask_ & ~used_mask_;
        if (chosen_.size() + std::size_t(std::popcount(unused)) <= best_.size()) return;
        for (std::size_t i = start; i < space_.candidates.size(); ++i) {
            const OracleCandidate& c = space_.candidates[i];
            if (c.small_mask & used_mask_) continue;
            if (c.large_factor != 0
                && std::find(used_large_.begin(), used_large_.end(), c.large_factor)
                       != used_large_.end()) {
                continue;
            }
            used_mask_ |= c.small_mask;
            if (c.large_factor != 0) used_large_.push_back(c.large_factor);
            chosen_.push_back(c.value);
            dfs(i + 1);
            chosen_.pop_back();
            if (c.large_factor != 0) used_large_.pop_back();
            used_mask_ &= ~c.small_mask;
        }
    }

    const OracleSpace& space_;
    std::uint64_t all_mask_ = 0;
    std::uint64_t used_mask_ = 0;
    std::vector<std::uint32_t> used_large_;
    std::vector<std::uint32_t> chosen_;
    std::vector<std::uint32_t> best_;
};

// Branch-and-bound maximizing the exact rational reciprocal sum. The bound
// adds 1/p^2 for every unused small prime: any future pick with least
// prime factor p contributes at most that. Ties keep the first (lex
// smallest) maximum.
class SumSearch {
public:
    explicit SumSearch(const OracleSpace& space) : space_(space) {
        inv_p2_.reserve(space_.small_primes.size());
        for (std::uint32_t p : space_.small_primes) {
            mpq_class q(1, static_cast<unsigned long>(std::uint64_t(p) * p));
            avail_sum_ += q;
            inv_p2_.push_back(std::move(q));
        }
    }

    void run() { dfs(0); }

    const std::vector<std::uint32_t>& best() const { return best_; }
    const mpq_class& best_sum() const { return best_sum_; }

private:
    void dfs(std::size_t start) {
        if (!has_best_ || current_sum_ > best_sum_) {
            best_ = chosen_;
            best_sum_ = current_sum_;
            has_best_ = true;
        }
        if (has_best_ && current_sum_ + avail_sum_ <= best_sum_) return;
        for (std::size_t i = start; i < space_.candidates.size(); ++i) {
            const OracleCandidate& c = space_.candidates[i];
            if (c.small_mask & used_mask_) continue;
            if (c.large_factor != 0
                && std::find(used_large_.begin(), used_large_.end(), c.large_factor)
                       != used_large_.end()) {
                continue;
            }
            choose(c);
            dfs(i + 1);
            unchoose(c);
        }
    }

    void choose(const OracleCandidate& c) {
        used_mask_ |= c.small_mask;
        if (c.large_factor != 0) used_large_.push_back(c.large_factor);
        chosen_.push_back(c.value);
        current_sum_ += mpq_class(1, static_cast<unsigned long>(c.value));
        for_each_mask_bit(c.small_mask, [&](std::size_t b) { avail_sum_ -= inv_p2_[b]; });
    }

    void unchoose(const OracleCandidate& c) {
        for_each_mask_bit(c.small_mask, [&](std::size_t b) { avail_sum_ += inv_p2_[b]; });
        current_sum_ -= mpq_class(1, static_cast<unsigned long>(c.value));
        chosen_.pop_back();
        if (c.large_factor != 0) used_large_.pop_back();
        used_mask_ &= ~c.small_mask;
    }

    template <typename F>
    static void for_each_mask_bit(std::uint64_t mask, F f) {
        while (mask != 0) {
            const int b = std::countr_zero(mask);
            f(static_cast<std::size_t>(b));
            mask &= mask - 1;
        }
    }

    const OracleSpace& space_;
    std::vector<mpq_class> inv_p2_;
    mpq_class avail_sum_ = 0;
    mpq_class current_sum_ = 0;
    mpq_class best_sum_ = 0;
    bool has_best_ = false;
    std::uint64_t used_mask_ = 0;
    std::vector<std::uint32_t> used_large_;
    std::vector<std::uint32_t> chosen_;
    std::vector<std::uint32_t> best_;
};

inline PlpSequence sequence_from_values(const std::vector<std::uint32_t>& values) {
    PlpSequence seq;
    seq.terms.reserve(values.size());
    for (std::uint32_t v : values) seq.terms.emplace_back(static_cast<unsigned long>(v));
    return seq;
}

/// Enclosure of an exact nonnegative rational. mpq_get_d truncates toward
/// zero, so the true value sits in [d, up(d)]; one extra step each side
/// keeps the nearest double inside as well.
inline IntervalValue rational_enclosure(const mpq_class& q) {
    const double d = q.get_d();
    return {rnd::down(d), rnd::up(rnd::up(d))};
}

} // namespace detail

/// Maximum-cardinality composite PLP subset of [4, n], by exhaustive
/// backtracking with least-prime-factor pruning.
inline ExtremalResult max_composite_plp_size(std::uint64_t n, const SieveTables& t,
                                             std::uint64_t oracle_limit = kDefaultOracleLimit) {
    const detail::OracleSpace space =
        detail::build_oracle_space(n, t, oracle_limit, "max_composite_plp_size");
    detail::SizeSearch search(space);
    search.run();

    ExtremalResult result;
    result.n = n;
    result.best_size = search.best().size();
    result.witness = detail::sequence_from_values(search.best());
    return result;
}

/// Maximum reciprocal sum over composite PLP subsets of [4, n], by exact
/// rational branch-and-bound.
inline ExtremalResult max_composite_reciprocal_sum(
    std::uint64_t n, const SieveTables& t, std::uint64_t oracle_limit = kDefaultOracleLimit) {
    const detail::OracleSpace space =
        detail::build_oracle_space(n, t, oracle_limit, "max_composite_reciprocal_sum");
    detail::SumSearch search(space);
    search.run();

    ExtremalResult result;
    result.n = n;
    result.best_size = search.best().size();
    result.witness = detail::sequence_from_values(search.best());
    result.best_sum = detail::rational_enclosure(search.best_sum());
    return result;
}

} // namespace plp
