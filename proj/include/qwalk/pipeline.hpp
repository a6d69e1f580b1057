#pragma once

#include <algorithm>
#include <future>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/certificate.hpp"
#include "qwalk/factor_integer.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/intpoly.hpp"
#include "qwalk/multiplicity.hpp"
#include "qwalk/walk_matrix.hpp"
#include "qwalk/wiedemann.hpp"

namespace qwalk {

struct RunConfig {
    std::vector<PrimeModulus> primes;
    uint64_t master_seed = 0;
    int stability = 3;
    int max_trials = 20;
    int krylov_trials = 2000;
    long lower_bound_floor = 0;  // extra floor for factors whose count did not saturate
    bool concurrent = true;

    static RunConfig defaults() {
        RunConfig c;
        c.primes = list_primes(1999999000, 1999999180);  // the default modulus window
        return c;
    }

    void validate() const {
        if (primes.size() < 2)
            throw std::invalid_argument("config: need at least 2 primes for a stable lift");
        for (auto p : primes)
            if (p.value <= (1u << 30))
                throw std::invalid_argument("config: pipeline primes must exceed 2^30");
        for (size_t i = 1; i < primes.size(); ++i)
            if (!(primes[i - 1] < primes[i]))
                throw std::invalid_argument("config: primes must be strictly ascending");
        if (stability < 2) throw std::invalid_argument("config: stability must be >= 2");
        if (max_trials < stability) throw std::invalid_argument("config: max-trials below stability");
        if (krylov_trials < 1) throw std::invalid_argument("config: krylov-trials must be positive");
    }
};

struct PipelineError : std::runtime_error {
    std::string stage;
    PipelineError(std::string st, const std::string& msg)
        : std::runtime_error("[" + st + "] " + msg), stage(std::move(st)) {}
};

// Full certificate pipeline: transition matrix, support, traces, per-prime
// Wiedemann, CRT lift, factorization, power sums, Krylov pins and bounds,
// multiplicity solve.
inline SpectrumCertificate compute_certificate(const Graph& g, int k, const RunConfig& cfg) {
    cfg.validate();
    SpectrumCertificate cert;
    cert.k = k;
    cert.provenance.master_seed = cfg.master_seed;
    cert.provenance.stability = cfg.stability;
    cert.provenance.max_trials = cfg.max_trials;
    cert.provenance.krylov_trials = cfg.krylov_trials;

    const int d = g.regular_degree();
    if (d < 1) throw PipelineError("graph", "graph is not regular");
    if (!g.connected()) throw PipelineError("graph", "graph is not connected");
    cert.graph_hash = fnv1a64_hex(emit_graph6(g));

    ArcIndex ai = build_arc_index(g);
    ScaledTransitionMatrix T = build_transition(g, ai);
    SupportMatrix S = positive_support_power(T, k);
    cert.dim = S.dim;
    for (int e = 1; e <= 4; ++e) cert.traces[e - 1] = trace_support_power(S, e);

    const bool strongly_conn = is_strongly_connected(S);
    if (!strongly_conn)
        cert.provenance.warnings.push_back("support digraph not strongly connected: Perron pin skipped");

    // ---- per-prime Wiedemann ----
    auto run_prime = [&](PrimeModulus p) {
        WiedemannTranscript t;
        t.prime = p.value;
        t.seed = SplitRng::derive(cfg.master_seed, p.value).next();
        BlackBox bb = [&S, p](const std::vector<uint64_t>& v) { return blackbox_apply(S, v, p.value); };
        FieldPoly mp = wiedemann_minpoly(bb, S.dim, p.value, t.seed, cfg.stability, cfg.max_trials,
                                         &t.trial_degrees);
        t.trials = static_cast<int>(t.trial_degrees.size());
        t.degree = mp.degree();
        return std::make_pair(mp, t);
    };

    std::vector<std::pair<FieldPoly, WiedemannTranscript>> runs(cfg.primes.size());
    if (cfg.concurrent) {
        std::vector<std::future<std::pair<FieldPoly, WiedemannTranscript>>> futs;
        futs.reserve(cfg.primes.size());
        for (auto p : cfg.primes)
            futs.push_back(std::async(std::launch::async, run_prime, p));
        for (size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
    } else {
        for (size_t i = 0; i < cfg.primes.size(); ++i) runs[i] = run_prime(cfg.primes[i]);
    }

    // discard unlucky primes: degree-deficient or non-squarefree residues
    int max_deg = 0;
    for (const auto& [mp, t] : runs) max_deg = std::max(max_deg, mp.degree());
    std::vector<std::pair<PrimeModulus, FieldPoly>> residues;
    for (size_t i = 0; i < runs.size(); ++i) {
        auto& [mp, t] = runs[i];
        if (mp.degree() < max_deg) {
            t.unlucky = true;
            cert.provenance.warnings.push_back("unlucky prime " + std::to_string(t.prime) +
                                               ": minimal polynomial degree " +
                                               std::to_string(mp.degree()) + " < " +
                                               std::to_string(max_deg));
        } else if (!squarefree_check(mp, cfg.primes[i].value)) {
            t.unlucky = true;
            cert.provenance.warnings.push_back("unlucky prime " + std::to_string(t.prime) +
                                               ": residue not square-free");
        } else {
            residues.emplace_back(cfg.primes[i], mp);
            cert.provenance.primes.push_back(t.prime);
        }
        cert.provenance.wiedemann.push_back(t);
    }
    if (residues.size() < 2)
        throw PipelineError("wiedemann", "fewer than 2 good primes; widen the prime range");

    // ---- CRT lift and factorization ----
    IntPoly minpoly;
    try {
        minpoly = crt_lift_minpoly(residues);
    } catch (const UnstableLiftError& e) {
        throw PipelineError("crt", e.what());
    }
    cert.minpoly = minpoly;

    std::vector<IntPoly> irred;
    try {
        irred = factor_integer_poly(minpoly);
    } catch (const NotSquarefreeError& e) {
        throw PipelineError("factor", e.what());
    }
    std::vector<FactorData> fdata;
    for (const auto& f : irred) fdata.push_back(FactorData::from_poly(f));

    MultiplicitySystem sys = build_multiplicity_system(fdata, cert.traces, mpz_class(cert.dim));

    // ---- pins and lower bounds ----
    std::map<size_t, long> pins;

    // Perron pin: with S irreducible and constant row sums r, the largest
    // eigenvalue is exactly r and is simple
    std::optional<long> row_sum;
    {
        bool constant = true;
        for (const auto& r : S.rows) {
            if (!row_sum) row_sum = static_cast<long>(r.size());
            else if (*row_sum != static_cast<long>(r.size())) { constant = false; break; }
        }
        if (!constant) {
            row_sum.reset();
            cert.provenance.warnings.push_back(
                "support row sums not constant: Perron root not identified, pin skipped");
        }
    }
    if (strongly_conn && row_sum) {
        IntPoly perron = IntPoly::from_longs({-*row_sum, 1});
        bool found = false;
        for (size_t j = 0; j < irred.size(); ++j) {
            if (irred[j] == perron) {
                pins[j] = 1;
                found = true;
                break;
            }
        }
        if (!found)
            throw PipelineError("perron", "constant row sum " + std::to_string(*row_sum) +
                                              " is not a root of the minimal polynomial");
    }

    // Krylov estimates per factor, mod the first good prime
    const PrimeModulus kp = residues.front().first;
    cert.provenance.krylov_prime = kp.value;
    const FieldPoly minpoly_mod = ip::reduce_mod(minpoly, kp.value);
    BlackBox bb = [&S, kp](const std::vector<uint64_t>& v) { return blackbox_apply(S, v, kp.value); };
    for (size_t j = 0; j < irred.size(); ++j) {
        uint64_t seed = SplitRng::derive(cfg.master_seed, 0x4b52594c00ull + j).next();
        KrylovCount kc = krylov_eigenspace_count(bb, S.dim, kp.value, ip::reduce_mod(irred[j], kp.value),
                                                 minpoly_mod, cfg.krylov_trials, seed);
        const long deg = irred[j].degree();
        const long m_floor = static_cast<long>((kc.rank + deg - 1) / deg);
        if (kc.saturated && kc.rank % deg == 0) {
            const long m = static_cast<long>(kc.rank) / deg;
            auto it = pins.find(j);
            if (it != pins.end() && it->second != m)
                throw PipelineError("krylov", "Krylov count " + std::to_string(kc.rank) +
                                                  " contradicts the Perron pin for factor " +
                                                  std::to_string(j));
            pins[j] = m;
        } else {
            if (kc.saturated)
                cert.provenance.warnings.push_back(
                    "factor " + std::to_string(j) + ": saturated Krylov rank " +
                    std::to_string(kc.rank) + " not divisible by degree; used as lower bound");
            sys.lower_bounds[j] = std::max(m_floor, cfg.lower_bound_floor);
        }
    }
    for (const auto& [j, m] : pins) cert.provenance.pins[std::to_string(j)] = m;
    for (const auto& [j, b] : sys.lower_bounds)
        cert.provenance.lower_bounds[std::to_string(j)] = b;
    sys.pinned = pins;

    // ---- solve ----
    MultiplicitySystem reduced = reduce_system(sys, pins);
    MultiplicitySolution sol;
    try {
        sol = solve_multiplicities(reduced);
    } catch (const InfeasibleError& e) {
        throw PipelineError("solve", e.what());
    } catch (const FreeRankTooHighError& e) {
        throw PipelineError("solve", e.what());
    }
    if (!sol.unique) {
        std::ostringstream os;
        os << "multiplicity system has " << sol.witnesses.size() << " candidate solutions:";
        for (const auto& w : sol.witnesses) {
            os << " (";
            for (size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
            os << ")";
        }
        throw PipelineError("solve", os.str());
    }

    std::vector<long> mult(irred.size(), -1);
    for (const auto& [j, m] : pins) mult[j] = m;
    {
        size_t si = 0;
        for (size_t j = 0; j < irred.size(); ++j)
            if (mult[j] < 0) mult[j] = sol.values[si++];
    }

    for (size_t j = 0; j < irred.size(); ++j) {
        CertificateFactor cf;
        cf.factor = irred[j];
        cf.multiplicity = mult[j];
        cf.psums = fdata[j].psums;
        cert.factors.push_back(std::move(cf));
    }
    verify_certificate(cert);
    return cert;
}

} // namespace qwalk
