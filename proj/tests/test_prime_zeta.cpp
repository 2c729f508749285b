#include <catch2/catch.hpp>

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include <mpfr.h>

#include "plp/prime_zeta.hpp"
#include "plp/sequence.hpp"
#include "test_helpers.hpp"

using namespace plp;

namespace {

double zeta_oracle(double s, mpfr_rnd_t rnd) {
    mpfr_t x, r;
    mpfr_inits2(128, x, r, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(x, s, MPFR_RNDN);
    mpfr_zeta(r, x, MPFR_RNDN);
    const double result = mpfr_get_d(r, rnd);
    mpfr_clears(x, r, static_cast<mpfr_ptr>(nullptr));
    return result;
}

// Reference P(2) to well below every width used here.
constexpr double kP2 = 0.4522474200410655;
constexpr double kP3 = 0.17476263929944354;
constexpr double kP4 = 0.07699313976424685;

} // namespace

TEST_CASE("zeta_real matches analytically known values", "[prime_zeta]") {
    const IntervalValue z2 = zeta_real(2.0, 1e-9);
    CHECK(z2.contains(1.6449340668482264));  // pi^2/6
    CHECK(z2.width() <= 1e-9);

    const IntervalValue z4 = zeta_real(4.0, 1e-9);
    CHECK(z4.contains(1.082323233711138));  // pi^4/90
    CHECK(z4.width() <= 1e-9);
}

TEST_CASE("zeta_real at s = 10 against a direct-sum oracle", "[prime_zeta]") {
    // Independent oracle: long double sum to 1e4; the tail is below 1e-40.
    long double sum = 0.0L;
    for (int k = 10'000; k >= 1; --k) {
        sum += std::pow(static_cast<long double>(k), -10.0L);
    }
    const IntervalValue z10 = zeta_real(10.0, 1e-9);
    CHECK(z10.contains(static_cast<double>(sum)));
    CHECK(z10.contains(1.0009945751278182));
}

TEST_CASE("zeta_real encloses mpfr_zeta across a range of s", "[prime_zeta]") {
    for (double s : {1.5, 2.0, 2.5, 3.0, 4.0, 6.5, 10.0, 20.0}) {
        const IntervalValue z = zeta_real(s, 1e-8);
        CHECK(z.lo <= zeta_oracle(s, MPFR_RNDD));
        CHECK(z.hi >= zeta_oracle(s, MPFR_RNDU));
        CHECK(z.width() <= 1e-8);
    }
}

TEST_CASE("zeta_real domain and precision errors", "[prime_zeta]") {
    CHECK_THROWS_AS(zeta_real(1.0, 1e-6), DomainError);
    CHECK_THROWS_AS(zeta_real(0.5, 1e-6), DomainError);
    CHECK_THROWS_AS(zeta_real(2.0, 0.0), DomainError);
    CHECK_THROWS_AS(zeta_real(2.0, 1e-18), PrecisionError);
}

TEST_CASE("prime_zeta_direct examples", "[prime_zeta]") {
    const auto& t = testutil::shared_sieve();

    const IntervalValue d100 = prime_zeta_direct(t, 2.0, 100);
    CHECK(d100.width() <= 0.01 * (1 + 1e-9));
    CHECK(d100.contains(kP2));

    const IntervalValue d2 = prime_zeta_direct(t, 2.0, 2);
    CHECK(d2.lo == Approx(0.25).margin(1e-12));
    CHECK(d2.hi == Approx(0.75).margin(1e-12));
    CHECK(d2.contains(kP2));

    const IntervalValue d3 = prime_zeta_direct(t, 3.0, 10'000);
    CHECK(d3.contains(kP3));

    CHECK_THROWS_AS(prime_zeta_direct(t, 2.0, t.limit + 1), DomainError);
    CHECK_THROWS_AS(prime_zeta_direct(t, 1.0, 100), DomainError);
    CHECK_THROWS_AS(prime_zeta_direct(t, 2.0, 0), DomainError);
}

TEST_CASE("prime_zeta_direct lower endpoints are monotone in the cutoff", "[prime_zeta]") {
    const auto& t = testutil::shared_sieve();
    double prev_lo = 0.0;
    for (std::uint64_t cutoff : {10ull, 100ull, 1000ull, 10'000ull, 100'000ull, 1'000'000ull}) {
        const IntervalValue v = prime_zeta_direct(t, 2.0, cutoff);
        CHECK(v.lo >= prev_lo);
        prev_lo = v.lo;
    }
}

TEST_CASE("prime_zeta_mobius hits the requested width", "[prime_zeta]") {
    const IntervalValue p2 = prime_zeta_mobius(2.0, 1e-10);
    CHECK(p2.width() <= 1e-10);
    CHECK(p2.contains(0.45224742004));
    CHECK(p2.contains(kP2));

    const IntervalValue loose = prime_zeta_mobius(2.0, 1e-3);
    CHECK(loose.width() <= 1e-3);
    CHECK(loose.contains(kP2));

    const IntervalValue p3 = prime_zeta_mobius(3.0, 1e-10);
    CHECK(p3.contains(kP3));
    // consistent with the 11-digit truncation 0.17476263929
    CHECK(std::abs(p3.mid() - 0.17476263929) < 1e-10);

    CHECK_THROWS_AS(prime_zeta_mobius(1.0, 1e-6), DomainError);
    CHECK_THROWS_AS(prime_zeta_mobius(2.0, -1.0), DomainError);
}

TEST_CASE("direct and mobius enclosures intersect", "[prime_zeta]") {
    const auto& t = testutil::shared_sieve();
    for (double s : {2.0, 3.0, 4.0, 5.0}) {
        const IntervalValue mob = prime_zeta_mobius(s, 1e-10);
        IntervalValue prev{0.0, 1.0};
        for (std::uint64_t cutoff : {1000ull, 100'000ull, 2'000'000ull}) {
            const IntervalValue direct = prime_zeta_direct(t, s, cutoff);
            CHECK(direct.intersects(mob));
            CHECK(direct.intersects(prev));
            prev = direct;
        }
    }
}

TEST_CASE("p_constant caches the dual-method intersection", "[prime_zeta]") {
    const auto& t = testutil::shared_sieve();

    const IntervalValue p2 = p_constant(2, t);
    CHECK(p2.lo >= 0.45224742003);
    CHECK(p2.hi <= 0.45224742005);
    // Consistent with the printed 4-decimal approximation 0.4523.
    CHECK(std::abs(p2.mid() - 0.4523) < 1e-4);

    const IntervalValue p4 = p_constant(4, t);
    CHECK(p4.contains(kP4));
    CHECK(p4.contains(0.0769931397642468));

    CHECK_THROWS_AS(p_constant(1, t), DomainError);
    CHECK_THROWS_AS(p_constant(0, t), DomainError);
}

TEST_CASE("P(s) decreases strictly in s", "[prime_zeta]") {
    const auto& t = testutil::shared_sieve();
    for (unsigned s = 2; s <= 5; ++s) {
        CHECK(p_constant(s, t).lo > p_constant(s + 1, t).hi);
    }
}

TEST_CASE("concurrent readers share sieve tables and cached constants", "[prime_zeta]") {
    const auto& t = testutil::shared_sieve();
    std::atomic<int> failures{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < 8; ++w) {
        workers.emplace_back([&, w] {
            for (unsigned s = 2; s <= 5; ++s) {
                const IntervalValue p = p_constant(s, t);
                if (!p.valid() || p.lo <= 0.0) ++failures;
            }
            for (std::uint64_t n = 2 + w; n < 2000; n += 8) {
                if (least_prime_factor(t, n) > n) ++failures;
                if (prime_count_at_sqrt(t, n) != prime_count(t, isqrt(n))) ++failures;
            }
        });
    }
    for (auto& th : workers) th.join();
    CHECK(failures.load() == 0);
}

TEST_CASE("prime square partial sums stay below P(2)", "[prime_zeta]") {
    const auto& t = testutil::shared_sieve();
    const IntervalValue p2 = p_constant(2, t);
    IntervalValue partial{0.0, 0.0};
    for (std::uint32_t p : t.primes) {
        const std::uint64_t sq = std::uint64_t(p) * p;
        if (sq > t.limit) break;
        partial += IntervalValue{rnd::div_down(1.0, double(sq)), rnd::div_up(1.0, double(sq))};
        REQUIRE(partial.hi < p2.hi);
    }
}
