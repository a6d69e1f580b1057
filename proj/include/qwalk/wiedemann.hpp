#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qwalk/fieldpoly.hpp"
#include "qwalk/modarith.hpp"

namespace qwalk {

// Monic annihilator of a linear recurrence: returns c(x) = x^d - c1 x^(d-1) - ...
// with seq[i+d] = sum_j cj seq[i+d-j] for all valid i. Zero sequence gives 1.
inline FieldPoly berlekamp_massey(const std::vector<uint64_t>& seq, uint64_t p) {
    const size_t n = seq.size();
    // connection polynomial convention: C(x) = 1 + c1 x + ..., ascending
    std::vector<uint64_t> C{1}, B{1};
    size_t L = 0, m = 1;
    uint64_t b = 1;
    for (size_t i = 0; i < n; ++i) {
        uint64_t delta = seq[i] % p;
        for (size_t j = 1; j <= L && j <= i && j < C.size(); ++j)
            delta = (delta + mul_mod(C[j], seq[i - j] % p, p)) % p;
        if (delta == 0) {
            ++m;
        } else if (2 * L <= i) {
            std::vector<uint64_t> T = C;
            uint64_t coef = mul_mod(delta, inv_mod(b, p), p);
            if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
            for (size_t j = 0; j < B.size(); ++j)
                C[j + m] = sub_mod(C[j + m], mul_mod(coef, B[j], p), p);
            L = i + 1 - L;
            B = std::move(T);
            b = delta;
            m = 1;
        } else {
            uint64_t coef = mul_mod(delta, inv_mod(b, p), p);
            if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
            for (size_t j = 0; j < B.size(); ++j)
                C[j + m] = sub_mod(C[j + m], mul_mod(coef, B[j], p), p);
            ++m;
        }
    }
    // annihilator is the degree-L reversal of C: x^L + c1 x^(L-1) + ...
    std::vector<uint64_t> ann(L + 1, 0);
    for (size_t j = 0; j <= L; ++j) ann[L - j] = j < C.size() ? C[j] : 0;
    ann[L] = 1;  // c0 = 1
    return FieldPoly(std::move(ann));
}

using BlackBox = std::function<std::vector<uint64_t>(const std::vector<uint64_t>&)>;

struct WiedemannError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Probabilistic minimal polynomial of a black-box matrix mod p.
// Accumulates lcm of Berlekamp-Massey annihilators of projected Krylov
// sequences u^T A^i v (2*dim terms per trial); stops once the lcm has been
// stable for `stability` consecutive trials and annihilates `stability`
// fresh random vectors. The result always divides the true minimal
// polynomial and equals it with high probability.
inline FieldPoly wiedemann_minpoly(const BlackBox& apply, size_t dim, uint64_t p, uint64_t seed,
                                   int stability = 3, int max_trials = 20,
                                   std::vector<int>* trial_degrees = nullptr) {
    if (stability < 2) throw std::invalid_argument("wiedemann_minpoly: stability must be >= 2");
    if (dim == 0) return FieldPoly::one();

    FieldPoly candidate = FieldPoly::one();
    int unchanged = 0;
    for (int trial = 0; trial < max_trials; ++trial) {
        SplitRng rng = SplitRng::derive(seed, static_cast<uint64_t>(trial));
        std::vector<uint64_t> u = rng.field_vector(dim, p);
        std::vector<uint64_t> v = rng.field_vector(dim, p);

        std::vector<uint64_t> seq(2 * dim);
        std::vector<uint64_t> w = v;
        for (size_t i = 0; i < seq.size(); ++i) {
            uint64_t dot = 0;
            for (size_t j = 0; j < dim; ++j) dot = (dot + mul_mod(u[j], w[j], p)) % p;
            seq[i] = dot;
            if (i + 1 < seq.size()) w = apply(w);
        }
        FieldPoly ann = berlekamp_massey(seq, p);
        FieldPoly next = candidate.is_one() ? ann : fp::lcm(candidate, ann, p);
        if (trial_degrees) trial_degrees->push_back(next.degree());

        if (next == candidate) {
            ++unchanged;
        } else {
            candidate = next;
            unchanged = 0;
        }
        if (unchanged >= stability && !candidate.is_one()) {
            bool certified = true;
            for (int c = 0; c < stability; ++c) {
                SplitRng crng = SplitRng::derive(seed, 0x100000 + uint64_t(trial) * stability + c);
                std::vector<uint64_t> probe = crng.field_vector(dim, p);
                std::vector<uint64_t> res = poly_apply(candidate, apply, probe, p);
                for (uint64_t e : res)
                    if (e != 0) { certified = false; break; }
                if (!certified) break;
            }
            if (certified) return candidate;
            unchanged = 0;  // annihilation failed: keep accumulating
        }
    }
    throw WiedemannError("wiedemann_minpoly: no convergence after " + std::to_string(max_trials) +
                         " trials (pathological modulus or bug)");
}

// true iff gcd(f, f') = 1 in GF(p)[x]; pre: f monic nonzero, p > deg f
inline bool squarefree_check(const FieldPoly& f, uint64_t p) {
    if (f.is_zero()) throw std::invalid_argument("squarefree_check: zero polynomial");
    if (f.degree() == 0) return true;
    return fp::gcd(f, fp::derivative(f, p), p).is_one();
}

// Incremental row-reduction rank accumulator over GF(p).
class RankAccumulator {
public:
    explicit RankAccumulator(size_t dim, uint64_t p) : dim_(dim), p_(p) {}

    // returns true if the vector increased the rank
    bool insert(std::vector<uint64_t> v) {
        for (const auto& row : rows_) {
            uint64_t c = v[row.pivot] % p_;
            if (c == 0) continue;
            for (size_t i = 0; i < dim_; ++i)
                v[i] = sub_mod(v[i] % p_, mul_mod(c, row.data[i], p_), p_);
        }
        size_t piv = dim_;
        for (size_t i = 0; i < dim_; ++i)
            if (v[i] % p_ != 0) { piv = i; break; }
        if (piv == dim_) return false;
        uint64_t inv = inv_mod(v[piv], p_);
        for (size_t i = 0; i < dim_; ++i) v[i] = mul_mod(v[i] % p_, inv, p_);
        rows_.push_back({piv, std::move(v)});
        return true;
    }

    size_t rank() const { return rows_.size(); }

private:
    struct Row {
        size_t pivot;
        std::vector<uint64_t> data;
    };
    size_t dim_;
    uint64_t p_;
    std::vector<Row> rows_;
};

struct KrylovCount {
    size_t rank = 0;       // lower bound on dim ker f(A), exact once saturated
    bool saturated = false;  // rank unchanged over the trailing window
    int insertions = 0;
};

// Random-Krylov estimate of dim ker f(A): projects random vectors through
// g(A) with g = minpoly/f (every image lies in ker f(A)) and accumulates
// their rank. Early exit once the rank has been stable for
// `stable_window` consecutive insertions.
inline KrylovCount krylov_eigenspace_count(const BlackBox& apply, size_t dim, uint64_t p,
                                           const FieldPoly& f, const FieldPoly& minpoly, int trials,
                                           uint64_t seed, int stable_window = 50) {
    auto [g, rem] = fp::divmod(minpoly, f, p);
    if (!rem.is_zero())
        throw std::invalid_argument("krylov_eigenspace_count: f does not divide minpoly");

    RankAccumulator acc(dim, p);
    KrylovCount out;
    int stable = 0;
    for (int t = 0; t < trials; ++t) {
        SplitRng rng = SplitRng::derive(seed, 0x200000 + static_cast<uint64_t>(t));
        std::vector<uint64_t> v = rng.field_vector(dim, p);
        std::vector<uint64_t> w = poly_apply(g, apply, v, p);
        ++out.insertions;
        if (acc.insert(std::move(w))) {
            stable = 0;
        } else {
            ++stable;
            if (stable >= stable_window) {
                out.saturated = true;
                break;
            }
        }
        if (acc.rank() == dim) {  // cannot grow further
            out.saturated = true;
            break;
        }
    }
    out.rank = acc.rank();
    return out;
}

} // namespace qwalk
