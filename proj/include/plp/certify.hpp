#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plp/errors.hpp"
#include "plp/interval.hpp"
#include "plp/prime_zeta.hpp"
#include "plp/sequence.hpp"
#include "plp/sieve.hpp"

namespace plp {

enum class CertificateKind { reciprocal_bound, decomposition, low_omega_witness, prime_witness };
enum class Verdict { pass, fail, inconclusive };

inline std::string to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::reciprocal_bound: return "reciprocal_bound";
        case CertificateKind::decomposition: return "decomposition";
        case CertificateKind::low_omega_witness: return "low_omega_witness";
        case CertificateKind::prime_witness: return "prime_witness";
    }
    return "?";
}

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Witness {
    std::size_t index = 0;
    BigInt term;
};

/// Term count thresholds that force a prime into a PLP sequence with all
/// terms <= n: `exact` counts primes with p^2 <= n, `rs` comes from the
/// explicit pi(n) upper bound 2*sqrt(n)/ln n * (1 + 3/ln n), floored and
/// bumped to the next integer. exact <= rs for every n >= 2.
struct ThresholdPair {
    std::uint64_t n = 0;
    std::uint64_t exact = 0;
    std::uint64_t rs = 0;
};

enum class WitnessMode { exact, rs };

inline std::string to_string(WitnessMode m) {
    return m == WitnessMode::exact ? "exact" : "rs";
}

struct ReciprocalBoundPayload {
    IntervalValue sum;    // sum of reciprocals of the terms
    IntervalValue bound;  // P(2)
    double margin = 0.0;  // bound.lo - sum.hi, nonnegative on pass
    std::vector<std::uint64_t> least_factors;  // lpf per term, pairwise distinct
};

struct DecompositionPayload {
    IntervalValue prime_sum;
    IntervalValue composite_sum;
    IntervalValue bound;  // P(2)
};

struct LowOmegaPayload {
    unsigned s = 0;
    IntervalValue sum;
    IntervalValue bound;  // P(s)
    std::optional<Witness> witness;
    std::uint32_t witness_omega = 0;
};

struct PrimeWitnessPayload {
    std::uint64_t n = 0;
    ThresholdPair thresholds;
    WitnessMode mode = WitnessMode::exact;
    Witness witness;
};

/// Machine-checkable outcome of one theorem-instance check. A pass verdict
/// means the payload's inequality was established with interval arithmetic;
/// inconclusive means interval overlap prevented a certified comparison.
struct Certificate {
    CertificateKind kind = CertificateKind::reciprocal_bound;
    Verdict verdict = Verdict::pass;
    std::variant<ReciprocalBoundPayload, DecompositionPayload, LowOmegaPayload,
                 PrimeWitnessPayload>
        payload;
    std::vector<std::string> flags;  // e.g. "probabilistic"
};

namespace detail {

inline void require_valid_plp(const PlpSequence& seq) {
    const ValidationReport report = validate_plp(seq);
    if (!report.valid) {
        throw PreconditionError("not a valid PLP sequence: "
                                + describe(report.violations.front()));
    }
}

inline void require_terms_within_sieve(const PlpSequence& seq, const SieveTables& t,
                                       const char* op) {
    for (const BigInt& term : seq.terms) {
        if (term > t.limit) {
            throw DomainError(std::string(op) + ": term " + term.get_str()
                              + " exceeds the sieve limit " + std::to_string(t.limit));
        }
    }
}

struct TermClass {
    bool prime = false;
    bool probabilistic = false;
};

/// Prime/composite classification: by sieve table when the term is in
/// range, by the fixed-witness test otherwise.
inline TermClass classify_term(const BigInt& term, const SieveTables& t) {
    if (term <= t.limit) {
        const std::uint64_t n = term.get_ui();
        return {is_prime_in_range(t, n), false};
    }
    const PrimalityResult r = classify_prime(term);
    return {r.is_prime, r.probabilistic};
}

/// Three-way certified comparison of an interval quantity against a bound.
enum class HypothesisStatus { certified_true, certified_false, ambiguous };

inline HypothesisStatus compare_exceeds(const IntervalValue& sum, const IntervalValue& bound) {
    if (sum.lo > bound.hi) return HypothesisStatus::certified_true;
    if (sum.hi <= bound.lo) return HypothesisStatus::certified_false;
    return HypothesisStatus::ambiguous;
}

} // namespace detail

/// Certifies sum 1/a_n <= P(2) for an all-composite PLP sequence: checks
/// the per-term chain a_i >= lpf(a_i)^2, the pairwise-distinct least prime
/// factors, and the certified endpoint comparison. The inequality is a
/// theorem for valid input, so anything short of a pass is an internal
/// error, not a fail verdict.
inline Certificate check_composite_reciprocal_bound(const PlpSequence& seq,
                                                    const SieveTables& t) {
    detail::require_valid_plp(seq);
    detail::require_terms_within_sieve(seq, t, "check_composite_reciprocal_bound");

    ReciprocalBoundPayload payload;
    payload.least_factors.reserve(seq.size());
    for (const BigInt& term : seq.terms) {
        const std::uint64_t n = term.get_ui();
        const std::uint64_t p = least_prime_factor(t, n);
        if (p == n) throw NotAllCompositeError(term);
        if (n < p * p) {
            throw InternalError("composite " + std::to_string(n)
                                + " smaller than the square of its least prime factor");
        }
        payload.least_factors.push_back(p);
    }
    std::vector<std::uint64_t> sorted = payload.least_factors;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InternalError("coprime composites produced a repeated least prime factor");
    }

    payload.sum = reciprocal_sum(seq);
    payload.bound = p_constant(2, t);
    if (!(payload.sum.hi <= payload.bound.lo)) {
        throw InternalError("certified comparison sum <= P(2) failed on valid input");
    }
    payload.margin = rnd::sub_down(payload.bound.lo, payload.sum.hi);
    return {CertificateKind::reciprocal_bound, Verdict::pass, payload, {}};
}

/// Splits the reciprocal sum of a PLP sequence into its prime and composite
/// parts. Passes when the composite part is certifiably within P(2) — the
/// finite shadow of the convergence statement for the composite
/// subsequence.
inline Certificate decompose_reciprocal_sum(const PlpSequence& seq, const SieveTables& t) {
    detail::require_valid_plp(seq);

    DecompositionPayload payload;
    payload.prime_sum = {0.0, 0.0};
    payload.composite_sum = {0.0, 0.0};
    bool probabilistic = false;
    for (const BigInt& term : seq.terms) {
        const detail::TermClass c = detail::classify_term(term, t);
        probabilistic |= c.probabilistic;
        const IntervalValue r = detail::reciprocal_enclosure(term);
        if (c.prime) {
            payload.prime_sum += r;
        } else {
            payload.composite_sum += r;
        }
    }
    payload.bound = p_constant(2, t);
    if (!(payload.composite_sum.hi <= payload.bound.hi)) {
        throw InternalError("composite part of a valid PLP sequence exceeded P(2)");
    }
    std::vector<std::string> flags;
    if (probabilistic) flags.emplace_back("probabilistic");
    return {CertificateKind::decomposition, Verdict::pass, payload, std::move(flags)};
}

/// Witness search for the low-Omega statement: when sum 1/a_n certifiably
/// exceeds P(s), some term has at most s-1 prime factors counted with
/// multiplicity. Returns inconclusive when the sum and P(s) enclosures
/// overlap; throws PreconditionError when the hypothesis certifiably fails.
inline Certificate low_omega_witness(const PlpSequence& seq, unsigned s, const SieveTables& t) {
    if (s < 2) throw DomainError("low_omega_witness: s must be >= 2");
    detail::require_valid_plp(seq);
    detail::require_terms_within_sieve(seq, t, "low_omega_witness");

    LowOmegaPayload payload;
    payload.s = s;
    payload.sum = reciprocal_sum(seq);
    payload.bound = p_constant(s, t);

    switch (detail::compare_exceeds(payload.sum, payload.bound)) {
        case detail::HypothesisStatus::certified_false:
            throw PreconditionError(
                "low_omega_witness: reciprocal sum is certifiably <= P("
                + std::to_string(s) + "); hypothesis fails (sum hi "
                + std::to_string(payload.sum.hi) + ", bound lo "
                + std::to_string(payload.bound.lo) + ")");
        case detail::HypothesisStatus::ambiguous:
            return {CertificateKind::low_omega_witness, Verdict::inconclusive, payload, {}};
        case detail::HypothesisStatus::certified_true:
            break;
    }

    for (std::size_t i = 0; i < seq.terms.size(); ++i) {
        const Factorization f = factorize(t, seq.terms[i].get_ui());
        if (f.big_omega() <= s - 1) {
            payload.witness = Witness{i, seq.terms[i]};
            payload.witness_omega = f.big_omega();
            return {CertificateKind::low_omega_witness, Verdict::pass, payload, {}};
        }
    }
    throw InternalError("low_omega_witness: hypothesis certified but no witness found");
}

/// Both prime-forcing thresholds for sequences with terms <= n. The rs
/// formula is evaluated with upward rounding before the floor, so the
/// integer threshold never undershoots the real-valued bound.
inline ThresholdPair compute_thresholds(std::uint64_t n, const SieveTables& t) {
    if (n < 2) throw DomainError("compute_thresholds: n must be >= 2");
    ThresholdPair th;
    th.n = n;
    th.exact = prime_count_at_sqrt(t, n) + 1;

    const double x_up = rnd::up(static_cast<double>(n));
    const double x_down = rnd::down(static_cast<double>(n));
    const double ln_down = rnd::log_down(x_down);
    const double sqrt_up = rnd::sqrt_up(x_up);
    const double q_up = rnd::div_up(rnd::mul_up(2.0, sqrt_up), ln_down);
    const double inner_up = rnd::add_up(1.0, rnd::div_up(3.0, ln_down));
    const double bound_up = rnd::mul_up(q_up, inner_up);
    th.rs = static_cast<std::uint64_t>(std::floor(bound_up)) + 1;

    if (th.exact > th.rs) {
        throw InternalError("compute_thresholds: exact threshold exceeds rs threshold at n = "
                            + std::to_string(n));
    }
    return th;
}

/// Witness search for the density statement: a valid PLP sequence with at
/// least threshold-many terms, all <= n, must contain a prime. Scans
/// ascending and certifies the first prime term found.
inline Certificate prime_witness_by_density(const PlpSequence& seq, std::uint64_t n,
                                            const SieveTables& t, WitnessMode mode) {
    detail::require_valid_plp(seq);
    for (const BigInt& term : seq.terms) {
        if (term > n) {
            throw DomainError("prime_witness_by_density: term " + term.get_str()
                              + " exceeds n = " + std::to_string(n));
        }
    }
    const ThresholdPair th = compute_thresholds(n, t);
    const std::uint64_t required = (mode == WitnessMode::exact) ? th.exact : th.rs;
    if (seq.size() < required) {
        throw PreconditionError("prime_witness_by_density: sequence has "
                                + std::to_string(seq.size()) + " terms, below the "
                                + to_string(mode) + " threshold (thresholds for n = "
                                + std::to_string(n) + ": exact " + std::to_string(th.exact)
                                + ", rs " + std::to_string(th.rs) + ")");
    }

    PrimeWitnessPayload payload;
    payload.n = n;
    payload.thresholds = th;
    payload.mode = mode;
    bool probabilistic = false;
    for (std::size_t i = 0; i < seq.terms.size(); ++i) {
        const detail::TermClass c = detail::classify_term(seq.terms[i], t);
        probabilistic |= c.probabilistic;
        if (c.prime) {
            payload.witness = Witness{i, seq.terms[i]};
            std::vector<std::string> flags;
            if (probabilistic) flags.emplace_back("probabilistic");
            return {CertificateKind::prime_witness, Verdict::pass, payload, std::move(flags)};
        }
    }
    throw InternalError("prime_witness_by_density: threshold met but no prime term found");
}

/// Re-checks a certificate's payload inequalities with fresh interval
/// arithmetic. Pass certificates of a correct implementation always
/// revalidate.
inline bool revalidate(const Certificate& cert, const SieveTables& t) {
    switch (cert.kind) {
        case CertificateKind::reciprocal_bound: {
            const auto& p = std::get<ReciprocalBoundPayload>(cert.payload);
            std::vector<std::uint64_t> sorted = p.least_factors;
            std::sort(sorted.begin(), sorted.end());
            const bool distinct =
                std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
            return cert.verdict == Verdict::pass && p.sum.valid() && p.bound.valid()
                   && distinct && p.sum.hi <= p.bound.lo;
        }
        case CertificateKind::decomposition: {
            const auto& p = std::get<DecompositionPayload>(cert.payload);
            return cert.verdict == Verdict::pass && p.prime_sum.valid()
                   && p.composite_sum.valid() && p.composite_sum.hi <= p.bound.hi;
        }
        case CertificateKind::low_omega_witness: {
            const auto& p = std::get<LowOmegaPayload>(cert.payload);
            if (cert.verdict == Verdict::inconclusive) {
                return detail::compare_exceeds(p.sum, p.bound)
                       == detail::HypothesisStatus::ambiguous;
            }
            if (cert.verdict != Verdict::pass || !p.witness) return false;
            if (detail::compare_exceeds(p.sum, p.bound)
                != detail::HypothesisStatus::certified_true) {
                return false;
            }
            const Factorization f = factorize(t, p.witness->term.get_ui());
            return f.big_omega() == p.witness_omega && f.big_omega() <= p.s - 1;
        }
        case CertificateKind::prime_witness: {
            const auto& p = std::get<PrimeWitnessPayload>(cert.payload);
            return cert.verdict == Verdict::pass && p.witness.term <= p.n
                   && detail::classify_term(p.witness.term, t).prime;
        }
    }
    return false;
}

} // namespace plp
