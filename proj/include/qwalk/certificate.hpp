#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "qwalk/intpoly.hpp"
#include "qwalk/multiplicity.hpp"

namespace qwalk {

inline std::string fnv1a64_hex(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct WiedemannTranscript {
    uint32_t prime = 0;
    uint64_t seed = 0;
    int trials = 0;
    int degree = -1;
    bool unlucky = false;
    std::vector<int> trial_degrees;  // lcm degree after each trial
};

struct Provenance {
    std::vector<uint32_t> primes;  // good primes folded into the CRT lift
    uint64_t master_seed = 0;
    int stability = 0;
    int max_trials = 0;
    int krylov_trials = 0;
    uint32_t krylov_prime = 0;
    std::map<std::string, long> pins;          // factor index -> pinned multiplicity
    std::map<std::string, long> lower_bounds;  // factor index -> bound used
    std::vector<WiedemannTranscript> wiedemann;
    std::vector<std::string> warnings;
};

struct CertificateFactor {
    IntPoly factor;
    long multiplicity = -1;
    std::array<mpz_class, 4> psums;
};

// The comparable output of the pipeline: exact minimal polynomial over Z,
// its irreducible factors with multiplicities, the four traces, and the
// provenance needed to reproduce the run.
struct SpectrumCertificate {
    std::string graph_hash;
    long dim = 0;
    int k = 0;
    IntPoly minpoly;
    std::vector<CertificateFactor> factors;
    std::array<mpz_class, 4> traces;
    Provenance provenance;
};

struct IncompleteCertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void verify_certificate(const SpectrumCertificate& c) {
    if (c.dim <= 0 || c.minpoly.is_zero() || c.factors.empty())
        throw IncompleteCertificateError("certificate: missing dimension, minimal polynomial or factors");
    IntPoly prod = IntPoly::one();
    mpz_class degsum = 0;
    std::array<mpz_class, 4> tsum{0, 0, 0, 0};
    for (const auto& f : c.factors) {
        if (f.multiplicity < 0)
            throw IncompleteCertificateError("certificate: factor without multiplicity");
        prod = ip::mul(prod, f.factor);
        degsum += mpz_class(f.factor.degree()) * f.multiplicity;
        for (int e = 0; e < 4; ++e) tsum[e] += f.psums[e] * f.multiplicity;
    }
    if (!(prod == c.minpoly))
        throw IncompleteCertificateError("certificate: factors do not multiply to the minimal polynomial");
    if (degsum != c.dim)
        throw IncompleteCertificateError("certificate: factor degrees times multiplicities do not sum to dim");
    for (int e = 0; e < 4; ++e)
        if (tsum[e] != c.traces[e])
            throw IncompleteCertificateError("certificate: multiplicities contradict tr(S^" +
                                             std::to_string(e + 1) + ")");
}

struct CompareVerdict {
    bool cospectral = false;
    std::string detail;
};

// COSPECTRAL iff minimal polynomial and the factor/multiplicity multiset
// agree; otherwise names the first differing component. Both inputs are
// invariant-checked first.
inline CompareVerdict compare_certificates(const SpectrumCertificate& a,
                                           const SpectrumCertificate& b) {
    if (a.k != b.k)
        throw std::invalid_argument("compare: support powers differ (k=" + std::to_string(a.k) +
                                    " vs k=" + std::to_string(b.k) + ")");
    verify_certificate(a);
    verify_certificate(b);
    if (a.dim != b.dim)
        return {false, "dimension differs: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim)};
    if (!(a.minpoly == b.minpoly))
        return {false, "minimal polynomial differs: (" + ip::to_string(a.minpoly) + ") vs (" +
                           ip::to_string(b.minpoly) + ")"};
    if (a.factors.size() != b.factors.size())
        return {false, "factor counts differ"};
    for (size_t i = 0; i < a.factors.size(); ++i) {
        if (!(a.factors[i].factor == b.factors[i].factor))
            return {false, "factor " + std::to_string(i) + " differs: (" +
                               ip::to_string(a.factors[i].factor) + ") vs (" +
                               ip::to_string(b.factors[i].factor) + ")"};
        if (a.factors[i].multiplicity != b.factors[i].multiplicity)
            return {false, "multiplicity of (" + ip::to_string(a.factors[i].factor) + ") differs: " +
                               std::to_string(a.factors[i].multiplicity) + " vs " +
                               std::to_string(b.factors[i].multiplicity)};
    }
    return {true, "identical minimal polynomial, factors and multiplicities"};
}

// ---------------------------------------------------------------------------
// JSON (stable: objects are key-sorted, big integers carried as strings)

inline nlohmann::json poly_to_json(const IntPoly& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : f.coeffs) arr.push_back(c.get_str());
    return arr;
}

inline IntPoly poly_from_json(const nlohmann::json& arr) {
    std::vector<mpz_class> c;
    for (const auto& v : arr) c.emplace_back(v.get<std::string>());
    return IntPoly(std::move(c));
}

inline nlohmann::json certificate_to_json(const SpectrumCertificate& c) {
    nlohmann::json j;
    j["graph_hash"] = c.graph_hash;
    j["dim"] = c.dim;
    j["k"] = c.k;
    j["minpoly"] = poly_to_json(c.minpoly);
    j["factors"] = nlohmann::json::array();
    for (const auto& f : c.factors) {
        nlohmann::json jf;
        jf["coeffs"] = poly_to_json(f.factor);
        jf["degree"] = f.factor.degree();
        jf["multiplicity"] = f.multiplicity;
        jf["power_sums"] = {f.psums[0].get_str(), f.psums[1].get_str(), f.psums[2].get_str(),
                            f.psums[3].get_str()};
        j["factors"].push_back(jf);
    }
    j["traces"] = {c.traces[0].get_str(), c.traces[1].get_str(), c.traces[2].get_str(),
                   c.traces[3].get_str()};
    nlohmann::json p;
    p["primes"] = c.provenance.primes;
    p["master_seed"] = c.provenance.master_seed;
    p["stability"] = c.provenance.stability;
    p["trials"] = {{"wiedemann_max", c.provenance.max_trials},
                   {"krylov", c.provenance.krylov_trials}};
    p["krylov_prime"] = c.provenance.krylov_prime;
    p["pins"] = c.provenance.pins;
    p["lower_bounds"] = c.provenance.lower_bounds;
    p["warnings"] = c.provenance.warnings;
    p["wiedemann"] = nlohmann::json::array();
    for (const auto& t : c.provenance.wiedemann) {
        nlohmann::json jt;
        jt["prime"] = t.prime;
        jt["seed"] = t.seed;
        jt["trials"] = t.trials;
        jt["degree"] = t.degree;
        jt["unlucky"] = t.unlucky;
        jt["trial_degrees"] = t.trial_degrees;
        p["wiedemann"].push_back(jt);
    }
    j["provenance"] = p;
    return j;
}

inline SpectrumCertificate certificate_from_json(const nlohmann::json& j) {
    SpectrumCertificate c;
    c.graph_hash = j.at("graph_hash").get<std::string>();
    c.dim = j.at("dim").get<long>();
    c.k = j.at("k").get<int>();
    c.minpoly = poly_from_json(j.at("minpoly"));
    for (const auto& jf : j.at("factors")) {
        CertificateFactor f;
        f.factor = poly_from_json(jf.at("coeffs"));
        f.multiplicity = jf.at("multiplicity").get<long>();
        for (int e = 0; e < 4; ++e)
            f.psums[e] = mpz_class(jf.at("power_sums")[e].get<std::string>());
        c.factors.push_back(std::move(f));
    }
    for (int e = 0; e < 4; ++e) c.traces[e] = mpz_class(j.at("traces")[e].get<std::string>());
    const auto& p = j.at("provenance");
    c.provenance.primes = p.at("primes").get<std::vector<uint32_t>>();
    c.provenance.master_seed = p.at("master_seed").get<uint64_t>();
    c.provenance.stability = p.at("stability").get<int>();
    c.provenance.max_trials = p.at("trials").at("wiedemann_max").get<int>();
    c.provenance.krylov_trials = p.at("trials").at("krylov").get<int>();
    c.provenance.krylov_prime = p.at("krylov_prime").get<uint32_t>();
    c.provenance.pins = p.at("pins").get<std::map<std::string, long>>();
    c.provenance.lower_bounds = p.at("lower_bounds").get<std::map<std::string, long>>();
    c.provenance.warnings = p.at("warnings").get<std::vector<std::string>>();
    for (const auto& jt : p.at("wiedemann")) {
        WiedemannTranscript t;
        t.prime = jt.at("prime").get<uint32_t>();
        t.seed = jt.at("seed").get<uint64_t>();
        t.trials = jt.at("trials").get<int>();
        t.degree = jt.at("degree").get<int>();
        t.unlucky = jt.at("unlucky").get<bool>();
        t.trial_degrees = jt.at("trial_degrees").get<std::vector<int>>();
        c.provenance.wiedemann.push_back(std::move(t));
    }
    return c;
}

inline std::string certificate_to_string(const SpectrumCertificate& c) {
    return certificate_to_json(c).dump(2) + "\n";
}

} // namespace qwalk
