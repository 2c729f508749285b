#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plp/certify.hpp"
#include "plp/errors.hpp"
#include "plp/json_io.hpp"
#include "plp/oracle.hpp"
#include "plp/prime_zeta.hpp"
#include "plp/sequence.hpp"
#include "plp/sieve.hpp"

namespace plp::cli {

inline constexpr std::uint64_t kCliDefaultSieveLimit = 10'000'000;
inline constexpr const char* kSieveLimitEnvVar = "PLP_SIEVE_LIMIT";

/// Default sieve limit: PLP_SIEVE_LIMIT when set, 10^7 otherwise.
inline std::uint64_t default_sieve_limit() {
    if (const char* env = std::getenv(kSieveLimitEnvVar)) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v < 2) {
            throw UsageError(std::string(kSieveLimitEnvVar) + " must be a natural number >= 2, got \""
                             + env + "\"");
        }
        return v;
    }
    return kCliDefaultSieveLimit;
}

inline int exit_code_for(Verdict v) {
    switch (v) {
        case Verdict::pass: return 0;
        case Verdict::fail: return 1;
        case Verdict::inconclusive: return 3;
    }
    return 2;
}

enum class SeriesKind { prime_square_partial_sums, direct_pzeta_partials };

/// CSV rows `k, partial_sum_lo, partial_sum_hi, P2_lo, P2_hi` for the
/// running sums of 1/p^2. prime_square_partial_sums keeps the squares
/// within `limit` (the sharpness family); direct_pzeta_partials keeps the
/// primes themselves within `limit`.
inline void emit_series(SeriesKind kind, std::uint64_t limit, const SieveTables& t,
                        std::ostream& out) {
    if (limit > t.limit) {
        throw DomainError("series: limit " + std::to_string(limit) + " exceeds sieve limit "
                          + std::to_string(t.limit));
    }
    const IntervalValue p2 = p_constant(2, t);
    out << "k,partial_sum_lo,partial_sum_hi,P2_lo,P2_hi\n";
    out << std::setprecision(17);
    IntervalValue partial{0.0, 0.0};
    std::uint64_t k = 0;
    for (std::uint32_t p : t.primes) {
        const std::uint64_t p64 = p;
        if (kind == SeriesKind::prime_square_partial_sums) {
            if (p64 * p64 > limit) break;
        } else {
            if (p64 > limit) break;
        }
        // p^2 <= limit^2 <= 10^16 < 2^53: exactly representable.
        const double sq = static_cast<double>(p64 * p64);
        partial += IntervalValue{rnd::div_down(1.0, sq), rnd::div_up(1.0, sq)};
        ++k;
        out << k << ',' << partial.lo << ',' << partial.hi << ',' << p2.lo << ',' << p2.hi
            << '\n';
    }
}

namespace detail {

inline std::string read_all(const std::string& path, std::istream& in) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open input file " + path);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

inline const char* proposition_label(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::reciprocal_bound: return "Proposition 3.1 (composite reciprocal bound)";
        case CertificateKind::decomposition: return "Theorem 3.2 remark (prime/composite decomposition)";
        case CertificateKind::low_omega_witness: return "Proposition 3.3 (low-Omega witness)";
        case CertificateKind::prime_witness: return "Proposition 3.4 (prime witness by density)";
    }
    return "?";
}

inline void print_interval(std::ostream& out, const char* name, const IntervalValue& v) {
    out << "  " << name << " in [" << v.lo << ", " << v.hi << "]\n";
}

inline void print_certificate_human(const Certificate& cert, std::ostream& out) {
    std::string verdict = plp::to_string(cert.verdict);
    std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    out << std::setprecision(17);
    out << proposition_label(cert.kind) << ": " << verdict << '\n';
    if (const auto* p = std::get_if<ReciprocalBoundPayload>(&cert.payload)) {
        print_interval(out, "reciprocal sum", p->sum);
        print_interval(out, "P(2)", p->bound);
        out << "  margin " << p->margin << '\n';
    } else if (const auto* p = std::get_if<DecompositionPayload>(&cert.payload)) {
        print_interval(out, "prime part", p->prime_sum);
        print_interval(out, "composite part", p->composite_sum);
        print_interval(out, "P(2)", p->bound);
    } else if (const auto* p = std::get_if<LowOmegaPayload>(&cert.payload)) {
        out << "  s = " << p->s << '\n';
        print_interval(out, "reciprocal sum", p->sum);
        print_interval(out, ("P(" + std::to_string(p->s) + ")").c_str(), p->bound);
        if (p->witness) {
            out << "  witness term " << p->witness->term.get_str() << " at index "
                << p->witness->index << " with Omega = " << p->witness_omega << " <= "
                << (p->s - 1) << '\n';
        }
    } else if (const auto* p = std::get_if<PrimeWitnessPayload>(&cert.payload)) {
        out << "  n = " << p->n << ", mode " << plp::to_string(p->mode) << ", thresholds exact "
            << p->thresholds.exact << " / rs " << p->thresholds.rs << '\n';
        out << "  witness term " << p->witness.term.get_str() << " at index "
            << p->witness.index << " is prime\n";
    }
    if (!cert.flags.empty()) {
        out << "  flags:";
        for (const auto& f : cert.flags) out << ' ' << f;
        out << '\n';
    }
}

} // namespace detail

/// Parses and runs one command. Results go to `out`, diagnostics to `err`.
/// Exit codes: 0 pass/success, 1 fail/counterexample, 2 usage or domain
/// error, 3 inconclusive.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
    CLI::App app{"pairwise-coprime sequence toolkit: certified prime zeta evaluation, "
                 "PLP sequence generators and validators, and certificate-producing "
                 "theorem checkers"};
    app.name("plp");
    app.require_subcommand(1);

    std::uint64_t sieve_limit = 0;  // resolved after parse so env errors surface cleanly
    auto* sieve_opt = app.add_option("--sieve-limit", sieve_limit,
                                     "Sieve limit for prime tables (default: "
                                     "PLP_SIEVE_LIMIT or 10000000)");

    // zeta
    auto* zeta_cmd = app.add_subcommand("zeta", "Certified interval for P(s) or zeta(s)");
    double zeta_s = 2.0;
    double zeta_width = 1e-10;
    bool zeta_riemann = false;
    std::string zeta_method = "mobius";
    std::uint64_t zeta_cutoff = 0;
    bool zeta_json = false;
    zeta_cmd->add_option("--s", zeta_s, "Real exponent s > 1")->required();
    zeta_cmd->add_option("--width", zeta_width, "Target interval width (default 1e-10)");
    zeta_cmd->add_flag("--riemann", zeta_riemann, "Evaluate zeta(s) instead of P(s)");
    zeta_cmd->add_option("--method", zeta_method, "P(s) evaluation method (default mobius)")
        ->check(CLI::IsMember({"mobius", "direct", "both"}));
    zeta_cmd->add_option("--cutoff", zeta_cutoff,
                         "Prime cutoff for the direct method (default: sieve limit)");
    zeta_cmd->add_flag("--json", zeta_json, "Emit JSON");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Generate a PLP sequence family");
    std::string gen_kind;
    std::uint64_t gen_count = 0;
    std::optional<std::uint64_t> gen_seed;
    std::optional<std::uint64_t> gen_range;
    bool gen_json = false;
    bool gen_csv = false;
    gen_cmd->add_option("--kind", gen_kind, "Family")
        ->required()
        ->check(CLI::IsMember({"fermat", "mersenne_prime_exponent", "fibonacci_prime_index",
                               "prime_squares", "sylvester", "random_greedy"}));
    gen_cmd->add_option("--count", gen_count, "Number of terms")->required();
    gen_cmd->add_option("--seed", gen_seed, "Seed (random_greedy)");
    gen_cmd->add_option("--range-hint", gen_range, "Draw range upper bound (random_greedy)");
    gen_cmd->add_flag("--json", gen_json, "Emit JSON");
    gen_cmd->add_flag("--csv", gen_csv, "Emit one decimal term per line");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Validate a PLP sequence file");
    std::string verify_input;
    bool verify_json = false;
    verify_cmd->add_option("--input", verify_input, "Sequence JSON file, or - for stdin")
        ->required();
    verify_cmd->add_flag("--json", verify_json, "Emit JSON");

    // certify
    auto* cert_cmd = app.add_subcommand("certify", "Run a certificate-producing theorem check");
    std::string cert_prop;
    std::string cert_input;
    unsigned cert_s = 2;
    std::uint64_t cert_n = 0;
    std::string cert_mode = "exact";
    bool cert_json = false;
    cert_cmd->add_option("--prop", cert_prop, "Which statement to certify: 3.1, 3.3 or 3.4")
        ->required()
        ->check(CLI::IsMember({"3.1", "3.2", "3.3", "3.4"}));
    cert_cmd->add_option("--input", cert_input, "Sequence JSON file, or - for stdin")
        ->required();
    auto* cert_s_opt = cert_cmd->add_option("--s", cert_s, "Prime-factor budget s >= 2 (prop 3.3)");
    auto* cert_n_opt = cert_cmd->add_option("--n", cert_n, "Term ceiling n (prop 3.4)");
    cert_cmd->add_option("--mode", cert_mode, "Threshold to require: exact or rs (prop 3.4)")
        ->check(CLI::IsMember({"exact", "rs"}));
    cert_cmd->add_flag("--json", cert_json, "Emit JSON");

    // threshold
    auto* th_cmd = app.add_subcommand("threshold", "Prime-forcing term-count thresholds at n");
    std::uint64_t th_n = 0;
    bool th_json = false;
    th_cmd->add_option("--n", th_n, "Term ceiling n >= 2")->required();
    th_cmd->add_flag("--json", th_json, "Emit JSON");

    // decompose
    auto* dec_cmd = app.add_subcommand("decompose",
                                       "Split a reciprocal sum into prime and composite parts");
    std::string dec_input;
    bool dec_json = false;
    dec_cmd->add_option("--input", dec_input, "Sequence JSON file, or - for stdin")->required();
    dec_cmd->add_flag("--json", dec_json, "Emit JSON");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle",
                                          "Exhaustive extremal composite PLP search at small n");
    std::uint64_t oracle_n = 0;
    bool oracle_sum = false;
    std::uint64_t oracle_limit = kDefaultOracleLimit;
    bool oracle_json = false;
    oracle_cmd->add_option("--n", oracle_n, "Search ceiling, 4 <= n <= oracle limit")->required();
    oracle_cmd->add_flag("--sum", oracle_sum, "Maximize the reciprocal sum instead of the size");
    oracle_cmd->add_option("--oracle-limit", oracle_limit,
                           "Feasibility ceiling for n (default 5000)");
    oracle_cmd->add_flag("--json", oracle_json, "Emit JSON");

    // series
    auto* series_cmd = app.add_subcommand("series", "CSV convergence series for offline plotting");
    std::string series_kind;
    std::uint64_t series_limit = 0;
    series_cmd->add_option("--kind", series_kind, "Series kind")
        ->required()
        ->check(CLI::IsMember({"prime_square_partial_sums", "direct_pzeta_partials"}));
    series_cmd->add_option("--limit", series_limit, "Ceiling for the series")->required();

    // Let the global --sieve-limit appear after the subcommand name too.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->fallthrough();
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        err << app.help();
        return 2;
    }

    try {
        if (sieve_opt->count() == 0) sieve_limit = default_sieve_limit();
        if (sieve_limit < 2) throw UsageError("--sieve-limit must be >= 2");

        // Sieve construction is deferred and cached: only subcommands that
        // need prime tables pay for them.
        std::optional<SieveTables> sieve_storage;
        const auto sieve = [&]() -> const SieveTables& {
            if (!sieve_storage) sieve_storage = build_sieve(sieve_limit);
            return *sieve_storage;
        };

        out << std::setprecision(17);

        if (app.got_subcommand(zeta_cmd)) {
            IntervalValue v;
            std::string label;
            if (zeta_riemann) {
                v = zeta_real(zeta_s, zeta_width);
                label = "zeta";
            } else {
                label = "P";
                if (zeta_method == "mobius") {
                    v = prime_zeta_mobius(zeta_s, zeta_width);
                } else {
                    const std::uint64_t cutoff =
                        zeta_cutoff != 0 ? zeta_cutoff : std::min(sieve_limit, sieve().limit);
                    const IntervalValue direct = prime_zeta_direct(sieve(), zeta_s, cutoff);
                    if (zeta_method == "direct") {
                        v = direct;
                    } else {
                        const IntervalValue mob = prime_zeta_mobius(zeta_s, zeta_width);
                        const auto both = intersection(direct, mob);
                        if (!both) {
                            throw InternalError("direct and Moebius enclosures are disjoint");
                        }
                        v = *both;
                    }
                }
            }
            if (zeta_json) {
                out << io::to_json(v).dump() << '\n';
            } else {
                out << label << '(' << zeta_s << ") in [" << v.lo << ", " << v.hi
                    << "] (width " << v.width() << ")\n";
            }
            return 0;
        }

        if (app.got_subcommand(gen_cmd)) {
            GenerateOptions opts;
            opts.seed = gen_seed;
            opts.range_hint = gen_range;
            const auto kind = generator_kind_from_string(gen_kind);
            if (!kind) throw UsageError("unknown generator kind " + gen_kind);
            if (*kind == GeneratorKind::prime_squares) opts.sieve = &sieve();
            const PlpSequence seq = generate(*kind, gen_count, opts);
            if (gen_json) {
                out << io::to_json(seq).dump() << '\n';
            } else {
                for (const BigInt& t : seq.terms) out << t.get_str() << '\n';
            }
            return 0;
        }

        if (app.got_subcommand(verify_cmd)) {
            const PlpSequence seq =
                io::sequence_from_json_text(detail::read_all(verify_input, in));
            const ValidationReport report = validate_plp(seq);
            if (verify_json) {
                out << io::to_json(report).dump() << '\n';
            } else if (report.valid) {
                out << "valid PLP sequence (" << seq.size() << " terms)\n";
            } else {
                out << "invalid PLP sequence:\n";
                for (const Violation& v : report.violations) {
                    out << "  " << describe(v) << '\n';
                }
            }
            return report.valid ? 0 : 1;
        }

        if (app.got_subcommand(cert_cmd)) {
            if (cert_prop == "3.2") {
                throw UsageError(
                    "the prime/composite decomposition has its own subcommand: decompose");
            }
            const PlpSequence seq = io::sequence_from_json_text(detail::read_all(cert_input, in));
            Certificate cert;
            if (cert_prop == "3.1") {
                cert = check_composite_reciprocal_bound(seq, sieve());
            } else if (cert_prop == "3.3") {
                if (cert_s_opt->count() == 0) throw UsageError("certify --prop 3.3 requires --s");
                cert = low_omega_witness(seq, cert_s, sieve());
            } else {
                if (cert_n_opt->count() == 0) throw UsageError("certify --prop 3.4 requires --n");
                const WitnessMode mode =
                    cert_mode == "exact" ? WitnessMode::exact : WitnessMode::rs;
                cert = prime_witness_by_density(seq, cert_n, sieve(), mode);
            }
            if (cert_json) {
                out << io::to_json(cert).dump() << '\n';
            } else {
                detail::print_certificate_human(cert, out);
            }
            return exit_code_for(cert.verdict);
        }

        if (app.got_subcommand(th_cmd)) {
            const ThresholdPair th = compute_thresholds(th_n, sieve());
            if (th_json) {
                out << io::to_json(th).dump() << '\n';
            } else {
                out << "n = " << th.n << ": exact threshold " << th.exact
                    << " (pi(sqrt n) + 1), rs threshold " << th.rs << '\n';
            }
            return 0;
        }

        if (app.got_subcommand(dec_cmd)) {
            const PlpSequence seq = io::sequence_from_json_text(detail::read_all(dec_input, in));
            const Certificate cert = decompose_reciprocal_sum(seq, sieve());
            if (dec_json) {
                out << io::to_json(cert).dump() << '\n';
            } else {
                detail::print_certificate_human(cert, out);
            }
            return exit_code_for(cert.verdict);
        }

        if (app.got_subcommand(oracle_cmd)) {
            const ExtremalResult result =
                oracle_sum ? max_composite_reciprocal_sum(oracle_n, sieve(), oracle_limit)
                           : max_composite_plp_size(oracle_n, sieve(), oracle_limit);
            if (oracle_json) {
                out << io::to_json(result).dump() << '\n';
            } else {
                out << "n = " << result.n << ": best composite PLP "
                    << (oracle_sum ? "sum witness" : "size") << " ";
                if (!oracle_sum) out << result.best_size;
                out << " {";
                for (std::size_t i = 0; i < result.witness.terms.size(); ++i) {
                    if (i) out << ", ";
                    out << result.witness.terms[i].get_str();
                }
                out << "}";
                if (result.best_sum) {
                    out << " with sum in [" << result.best_sum->lo << ", " << result.best_sum->hi
                        << "]";
                }
                out << '\n';
            }
            return 0;
        }

        if (app.got_subcommand(series_cmd)) {
            const SeriesKind kind = series_kind == "prime_square_partial_sums"
                                        ? SeriesKind::prime_square_partial_sums
                                        : SeriesKind::direct_pzeta_partials;
            emit_series(kind, series_limit, sieve(), out);
            return 0;
        }

        throw UsageError("no subcommand given");
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace plp::cli
