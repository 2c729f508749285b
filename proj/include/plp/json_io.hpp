#pragma once

#include <string>

#include <json.hpp>

#include "plp/certify.hpp"
#include "plp/errors.hpp"
#include "plp/interval.hpp"
#include "plp/oracle.hpp"
#include "plp/sequence.hpp"

namespace plp::io {

using json = nlohmann::ordered_json;

inline json to_json(const IntervalValue& v) { return json{{"lo", v.lo}, {"hi", v.hi}}; }

inline json to_json(const PlpSequence& seq) {
    json terms = json::array();
    for (const BigInt& t : seq.terms) terms.push_back(t.get_str());
    return json{{"terms", std::move(terms)}};
}

/// Parses the sequence file format: {"terms": ["3", "5", "17"]} with terms
/// as decimal strings (numbers are tolerated for convenience).
inline PlpSequence sequence_from_json(const json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
        throw UsageError("sequence file must be an object with a \"terms\" array");
    }
    PlpSequence seq;
    for (const auto& item : j["terms"]) {
        BigInt term;
        if (item.is_string()) {
            if (mpz_set_str(term.get_mpz_t(), item.get_ref<const std::string&>().c_str(), 10)
                != 0) {
                throw UsageError("invalid decimal term \"" + item.get<std::string>() + "\"");
            }
        } else if (item.is_number_unsigned()) {
            term = BigInt(std::to_string(item.get<std::uint64_t>()));
        } else {
            throw UsageError("sequence terms must be decimal strings");
        }
        seq.terms.push_back(std::move(term));
    }
    return seq;
}

inline PlpSequence sequence_from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw UsageError("input is not valid JSON");
    return sequence_from_json(j);
}

inline std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::term_le_one: return "term_le_one";
        case ViolationKind::not_increasing: return "not_increasing";
        case ViolationKind::common_factor: return "common_factor";
    }
    return "?";
}

inline json to_json(const ValidationReport& report) {
    json violations = json::array();
    for (const Violation& v : report.violations) {
        violations.push_back(json{{"kind", to_string(v.kind)},
                                  {"indices", json::array({v.first, v.second})},
                                  {"detail", v.detail.get_str()}});
    }
    return json{{"valid", report.valid}, {"violations", std::move(violations)}};
}

inline json to_json(const ThresholdPair& th) {
    return json{{"n", th.n}, {"exact", th.exact}, {"rs", th.rs}};
}

inline json to_json(const Witness& w) {
    return json{{"index", w.index}, {"term", w.term.get_str()}};
}

inline json to_json(const Certificate& cert) {
    json j{{"kind", plp::to_string(cert.kind)}, {"verdict", plp::to_string(cert.verdict)}};
    if (const auto* p = std::get_if<ReciprocalBoundPayload>(&cert.payload)) {
        j["sum"] = to_json(p->sum);
        j["bound"] = to_json(p->bound);
        j["margin"] = p->margin;
    } else if (const auto* p = std::get_if<DecompositionPayload>(&cert.payload)) {
        j["prime_sum"] = to_json(p->prime_sum);
        j["composite_sum"] = to_json(p->composite_sum);
        j["bound"] = to_json(p->bound);
    } else if (const auto* p = std::get_if<LowOmegaPayload>(&cert.payload)) {
        j["s"] = p->s;
        j["sum"] = to_json(p->sum);
        j["bound"] = to_json(p->bound);
        if (p->witness) {
            j["witness"] = to_json(*p->witness);
            j["omega"] = p->witness_omega;
        }
    } else if (const auto* p = std::get_if<PrimeWitnessPayload>(&cert.payload)) {
        j["n"] = p->n;
        j["mode"] = plp::to_string(p->mode);
        j["thresholds"] = json{{"exact", p->thresholds.exact}, {"rs", p->thresholds.rs}};
        j["witness"] = to_json(p->witness);
    }
    if (!cert.flags.empty()) j["flags"] = cert.flags;
    return j;
}

inline json to_json(const ExtremalResult& r) {
    json j{{"n", r.n}, {"best_size", r.best_size}};
    json terms = json::array();
    for (const BigInt& t : r.witness.terms) terms.push_back(t.get_str());
    j["witness"] = std::move(terms);
    if (r.best_sum) j["best_sum"] = to_json(*r.best_sum);
    return j;
}

} // namespace plp::io
