#include <catch2/catch.hpp>

#include <map>
#include <numeric>
#include <random>

#include "plp/sieve.hpp"
#include "test_helpers.hpp"

using namespace plp;

TEST_CASE("build_sieve small tables", "[sieve]") {
    const SieveTables t = build_sieve(10);
    const std::map<std::uint64_t, std::uint64_t> expected = {
        {2, 2}, {3, 3}, {4, 2}, {5, 5}, {6, 2}, {7, 7}, {8, 2}, {9, 3}, {10, 2}};
    for (const auto& [n, lpf] : expected) {
        CHECK(least_prime_factor(t, n) == lpf);
    }
    CHECK(t.primes == std::vector<std::uint32_t>{2, 3, 5, 7});
}

TEST_CASE("build_sieve smallest legal limit", "[sieve]") {
    const SieveTables t = build_sieve(2);
    CHECK(t.primes == std::vector<std::uint32_t>{2});
}

TEST_CASE("build_sieve rejects out-of-range limits", "[sieve]") {
    CHECK_THROWS_AS(build_sieve(1), ConfigError);
    CHECK_THROWS_AS(build_sieve(0), ConfigError);
    CHECK_THROWS_AS(build_sieve(101, 100), ConfigError);
}

TEST_CASE("primes below 100", "[sieve]") {
    const SieveTables t = build_sieve(100);
    CHECK(t.primes.size() == 25);
    CHECK(prime_count(t, 100) == 25);
}

TEST_CASE("least_prime_factor examples", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    CHECK(least_prime_factor(t, 91) == 7);
    CHECK(least_prime_factor(t, 2) == 2);
    CHECK(least_prime_factor(t, 97) == 97);
    CHECK_THROWS_AS(least_prime_factor(t, 1), DomainError);
    CHECK_THROWS_AS(least_prime_factor(t, t.limit + 1), DomainError);
}

TEST_CASE("lpf matches trial division up to 1e5", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    for (std::uint64_t n = 2; n <= 100'000; ++n) {
        REQUIRE(t.lpf[n] == testutil::trial_lpf(n));
    }
}

TEST_CASE("factorize examples", "[sieve]") {
    const auto& t = testutil::shared_sieve();

    const Factorization f360 = factorize(t, 360);
    CHECK(f360.factors
          == std::vector<std::pair<std::uint64_t, std::uint32_t>>{{2, 3}, {3, 2}, {5, 1}});
    CHECK(f360.big_omega() == 6);
    CHECK(f360.small_omega() == 3);

    const Factorization f1 = factorize(t, 1);
    CHECK(f1.factors.empty());
    CHECK(f1.big_omega() == 0);
    CHECK(f1.small_omega() == 0);

    const Factorization f97 = factorize(t, 97);
    CHECK(f97.factors == std::vector<std::pair<std::uint64_t, std::uint32_t>>{{97, 1}});
    CHECK(f97.big_omega() == 1);

    CHECK_THROWS_AS(factorize(t, 0), DomainError);
    CHECK_THROWS_AS(factorize(t, t.limit + 1), DomainError);
}

TEST_CASE("factorize reconstructs its input", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    for (std::uint64_t n = 1; n <= 100'000; ++n) {
        const Factorization f = factorize(t, n);
        std::uint64_t prod = 1;
        for (const auto& [p, e] : f.factors) {
            for (std::uint32_t i = 0; i < e; ++i) prod *= p;
        }
        REQUIRE(prod == n);
    }
}

TEST_CASE("prime_count examples and spot checks", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    CHECK(prime_count(t, 10) == 4);
    CHECK(prime_count(t, 1) == 0);
    CHECK(prime_count(t, 100) == 25);
    CHECK_THROWS_AS(prime_count(t, t.limit + 1), DomainError);

    for (std::uint64_t x : {57ull, 541ull, 1000ull, 4096ull, 30000ull}) {
        CHECK(prime_count(t, x) == testutil::trial_prime_count(x));
    }
}

TEST_CASE("isqrt is exact at boundaries", "[sieve]") {
    CHECK(isqrt(0) == 0);
    CHECK(isqrt(1) == 1);
    CHECK(isqrt(2) == 1);
    CHECK(isqrt(3) == 1);
    CHECK(isqrt(4) == 2);
    CHECK(isqrt(99) == 9);
    CHECK(isqrt(100) == 10);
    CHECK(isqrt(101) == 10);
    // perfect squares and their neighbours across a wide range
    for (std::uint64_t r = 1; r < 3'000'000; r = r * 3 / 2 + 1) {
        CHECK(isqrt(r * r) == r);
        CHECK(isqrt(r * r - 1) == r - 1);
        CHECK(isqrt(r * r + 1) == r);
    }
}

TEST_CASE("prime_count_at_sqrt uses the integer criterion", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    CHECK(prime_count_at_sqrt(t, 100) == 4);
    CHECK(prime_count_at_sqrt(t, 48) == 3);   // 7^2 = 49 > 48
    CHECK(prime_count_at_sqrt(t, 49) == 4);
    CHECK(prime_count_at_sqrt(t, 3) == 0);    // 2^2 = 4 > 3
    CHECK(prime_count_at_sqrt(t, 4) == 1);
    CHECK(prime_count_at_sqrt(t, 1) == 0);
    CHECK_THROWS_AS(prime_count_at_sqrt(t, 0), DomainError);

    for (std::uint64_t n = 2; n <= 20'000; ++n) {
        REQUIRE(prime_count_at_sqrt(t, n) == prime_count(t, isqrt(n)));
    }
}

TEST_CASE("gcd examples", "[sieve]") {
    CHECK(gcd(BigInt(17), BigInt(257)) == 1);
    CHECK(gcd(BigInt(0), BigInt(12)) == 12);
    CHECK(gcd(BigInt(1024 * 3), BigInt(16 * 7)) == 16);
}

TEST_CASE("gcd agrees with factorization-based gcd", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    std::mt19937_64 rng(20240817);
    for (int i = 0; i < 10'000; ++i) {
        const std::uint64_t a = 1 + rng() % 1'000'000;
        const std::uint64_t b = 1 + rng() % 1'000'000;

        // gcd via minimum exponents of the two factorizations
        const Factorization fa = factorize(t, a);
        std::uint64_t g = 1;
        for (const auto& [p, e] : fa.factors) {
            std::uint64_t rest = b;
            std::uint32_t eb = 0;
            while (rest % p == 0) {
                rest /= p;
                ++eb;
            }
            const std::uint32_t m = std::min(e, eb);
            for (std::uint32_t k = 0; k < m; ++k) g *= p;
        }
        REQUIRE(gcd(BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<unsigned long>(b)))
                == g);
    }
}

TEST_CASE("is_prime examples", "[sieve]") {
    CHECK(is_prime(BigInt(65537)));
    CHECK_FALSE(is_prime(BigInt(1)));
    CHECK_FALSE(is_prime(BigInt(0)));
    CHECK_FALSE(is_prime(BigInt("4294967297")));  // 641 * 6700417
    CHECK(is_prime(BigInt(2)));
    CHECK(is_prime(BigInt("2147483647")));  // 2^31 - 1

    const PrimalityResult small = classify_prime(BigInt(65537));
    CHECK(small.is_prime);
    CHECK_FALSE(small.probabilistic);
}

TEST_CASE("is_prime agrees with the sieve classification", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    for (std::uint64_t n = 0; n <= 20'000; ++n) {
        REQUIRE(is_prime(BigInt(static_cast<unsigned long>(n))) == is_prime_in_range(t, n));
    }
}

TEST_CASE("is_prime flags the probabilistic regime", "[sieve]") {
    // 2^89 - 1 is a Mersenne prime, far above the 64-bit deterministic range.
    const BigInt m89 = (BigInt(1) << 89) - 1;
    const PrimalityResult r = classify_prime(m89);
    CHECK(r.is_prime);
    CHECK(r.probabilistic);

    // A composite above 2^64: compositeness is still reported.
    const BigInt composite = (BigInt(1) << 89) + 1;  // divisible by 3
    CHECK_FALSE(classify_prime(composite).is_prime);
}

TEST_CASE("rs_upper_bound examples", "[sieve]") {
    const double b100 = rs_upper_bound(100);
    CHECK(b100 == Approx(28.788).margin(0.01));
    CHECK(25 < b100);

    const double b2 = rs_upper_bound(2);
    CHECK(b2 == Approx(9.13).margin(0.01));
    CHECK(1 < b2);

    const double b1e6 = rs_upper_bound(1'000'000);
    CHECK(b1e6 > 78498);
    CHECK(b1e6 == Approx(80241.23).margin(0.5));

    CHECK_THROWS_AS(rs_upper_bound(1), DomainError);
    CHECK_THROWS_AS(rs_upper_bound(0), DomainError);
}

TEST_CASE("pi(n) stays below rs_upper_bound exhaustively", "[sieve]") {
    const auto& t = testutil::shared_sieve();
    std::uint64_t pi = 0;
    std::size_t idx = 0;
    for (std::uint64_t n = 2; n <= 100'000; ++n) {
        while (idx < t.primes.size() && t.primes[idx] <= n) {
            ++pi;
            ++idx;
        }
        REQUIRE(double(pi) < rs_upper_bound(n));
    }
}
