#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "qwalk/fieldpoly.hpp"
#include "qwalk/intpoly.hpp"
#include "qwalk/modarith.hpp"

namespace qwalk {

struct NotSquarefreeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FactorDegreeCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace fp {

// extended euclid: returns monic g plus s,t with s*a + t*b = g
inline std::tuple<FieldPoly, FieldPoly, FieldPoly> ext_gcd(FieldPoly a, FieldPoly b, uint64_t p) {
    FieldPoly s0 = FieldPoly::one(), s1 = FieldPoly::zero();
    FieldPoly t0 = FieldPoly::zero(), t1 = FieldPoly::one();
    while (!b.is_zero()) {
        auto [q, r] = divmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
        FieldPoly s2 = sub(s0, mul(q, s1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        FieldPoly t2 = sub(t0, mul(q, t1, p), p);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.is_zero()) return {a, s0, t0};
    uint64_t inv = inv_mod(a.lead(), p);
    return {scale(a, inv, p), scale(s0, inv, p), scale(t0, inv, p)};
}

inline FieldPoly pow_mod_poly_big(FieldPoly b, const mpz_class& e, const FieldPoly& m, uint64_t p) {
    FieldPoly r = FieldPoly::one();
    b = mod(b, m, p);
    for (long i = mpz_sizeinbase(e.get_mpz_t(), 2) - 1; i >= 0; --i) {
        r = mod(mul(r, r, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, b, p), m, p);
    }
    return r;
}

} // namespace fp

namespace detail {

// equal-degree splitting (Cantor-Zassenhaus, p odd): f monic squarefree,
// all irreducible factors of degree d
inline void equal_degree_split(const FieldPoly& f, int d, uint64_t p, SplitRng& rng,
                               std::vector<FieldPoly>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    mpz_class e = 1;
    for (int i = 0; i < d; ++i) e *= static_cast<long>(p);
    e = (e - 1) / 2;
    for (;;) {
        std::vector<uint64_t> c(f.degree());
        for (auto& v : c) v = rng.below(p);
        FieldPoly a(std::move(c));
        if (a.degree() < 1) continue;
        FieldPoly b = fp::pow_mod_poly_big(a, e, f, p);
        b = fp::sub(b, FieldPoly::one(), p);
        FieldPoly g = fp::gcd(b, f, p);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, d, p, rng, out);
            equal_degree_split(fp::divmod(f, g, p).first, d, p, rng, out);
            return;
        }
    }
}

// full factorization of a monic squarefree polynomial over GF(p)
inline std::vector<FieldPoly> factor_squarefree_mod(const FieldPoly& f, uint64_t p, SplitRng& rng) {
    std::vector<FieldPoly> out;
    FieldPoly h = f;
    FieldPoly w = FieldPoly::x();
    for (int d = 1; 2 * d <= h.degree(); ++d) {
        w = fp::pow_mod_poly_big(w, mpz_class(static_cast<long>(p)), h, p);  // w = x^(p^d) mod h
        FieldPoly g = fp::gcd(fp::sub(w, FieldPoly::x(), p), h, p);
        if (g.degree() > 0) {
            equal_degree_split(g, d, p, rng, out);
            h = fp::divmod(h, g, p).first;
            w = fp::mod(w, h, p);
        }
    }
    if (h.degree() > 0) out.push_back(h);
    return out;
}

// linear multifactor Hensel: lift f = prod(gi) (mod p) to modulus >= target;
// returns factor coefficients in [0, q) together with the reached modulus q
inline std::pair<std::vector<IntPoly>, mpz_class> hensel_lift(const IntPoly& f,
                                                              const std::vector<FieldPoly>& gs,
                                                              uint64_t p, const mpz_class& target) {
    const size_t r = gs.size();
    // Bezout data mod p: u_i = (prod_{l != i} g_l)^{-1} mod g_i
    std::vector<FieldPoly> us(r);
    for (size_t i = 0; i < r; ++i) {
        FieldPoly prod = FieldPoly::one();
        for (size_t l = 0; l < r; ++l)
            if (l != i) prod = fp::mod(fp::mul(prod, gs[l], p), gs[i], p);
        auto [g, s, t] = fp::ext_gcd(prod, gs[i], p);
        if (!g.is_one()) throw std::logic_error("hensel_lift: factors not pairwise coprime mod p");
        us[i] = fp::mod(s, gs[i], p);
    }

    std::vector<IntPoly> G(r);
    for (size_t i = 0; i < r; ++i) {
        std::vector<mpz_class> c(gs[i].coeffs.size());
        for (size_t j = 0; j < c.size(); ++j) c[j] = static_cast<long>(gs[i].coeffs[j]);
        G[i] = IntPoly(std::move(c));
    }

    mpz_class q(static_cast<long>(p));
    while (q < target) {
        IntPoly prod = IntPoly::one();
        for (const auto& g : G) prod = ip::mul(prod, g);
        IntPoly err = ip::sub(f, prod);
        // err is divisible by q; push its (err/q mod p) correction into each factor
        std::vector<uint64_t> ec(err.coeffs.size());
        for (size_t j = 0; j < err.coeffs.size(); ++j) {
            mpz_class t = err.coeffs[j] / q;
            t %= static_cast<long>(p);
            if (t < 0) t += static_cast<long>(p);
            ec[j] = t.get_ui();
        }
        FieldPoly ebar{std::vector<uint64_t>(ec)};
        for (size_t i = 0; i < r; ++i) {
            FieldPoly delta = fp::mod(fp::mul(ebar, us[i], p), gs[i], p);
            for (size_t j = 0; j < delta.coeffs.size(); ++j) {
                if (G[i].coeffs.size() <= j) G[i].coeffs.resize(j + 1, 0);
                G[i].coeffs[j] += q * static_cast<long>(delta.coeffs[j]);
            }
        }
        q *= static_cast<long>(p);
    }
    return {std::move(G), std::move(q)};
}

inline IntPoly symmetric_lift(const IntPoly& a, const mpz_class& q) {
    IntPoly out = a;
    for (auto& c : out.coeffs) {
        c %= q;
        if (c < 0) c += q;
        if (2 * c > q) c -= q;
    }
    out.trim();
    return out;
}

} // namespace detail

// Irreducible factorization over Z of a monic squarefree polynomial:
// factor mod one good prime, Hensel-lift past the coefficient bound,
// recombine by subset search of increasing cardinality. Linear factors
// come out of the size-1 candidates, so rational roots never require
// factoring the constant term.
inline std::vector<IntPoly> factor_integer_poly(const IntPoly& input, int degree_cap = 32) {
    IntPoly f = input;
    f.normalize();
    if (!f.is_monic()) throw std::invalid_argument("factor_integer_poly: polynomial must be monic");
    if (f.degree() > degree_cap)
        throw FactorDegreeCapError("factor_integer_poly: degree " + std::to_string(f.degree()) +
                                   " above cap " + std::to_string(degree_cap));
    std::vector<IntPoly> result;
    if (f.degree() <= 0) return result;

    if (!ip::squarefree_over_z(f))
        throw NotSquarefreeError("factor_integer_poly: input is not squarefree");

    // strip an x factor so candidate pretests can assume nonzero constant term
    if (f.coeffs[0] == 0) {
        result.push_back(IntPoly::from_longs({0, 1}));
        f = ip::divmod_monic(f, result.back()).first;
    }
    if (f.degree() == 0) return result;
    if (f.degree() == 1) {
        result.push_back(f);
        std::sort(result.begin(), result.end());
        return result;
    }

    // good prime: f stays squarefree mod p
    uint64_t p = 1009;
    for (;;) {
        while (!is_prime_u64(p)) ++p;
        FieldPoly fp_red = ip::reduce_mod(f, p);
        if (fp_red.degree() == f.degree() &&
            fp::gcd(fp_red, fp::derivative(fp_red, p), p).is_one())
            break;
        ++p;
    }

    SplitRng rng = SplitRng::derive(0xfac70f5eedull, p);
    std::vector<FieldPoly> modular = detail::factor_squarefree_mod(ip::reduce_mod(f, p), p, rng);
    std::sort(modular.begin(), modular.end(), [](const FieldPoly& a, const FieldPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.coeffs < b.coeffs;
    });

    // Mignotte-style bound: any factor of f has |coeffs| <= 2^deg(f) * ||f||_2
    mpz_class norm2 = 0;
    for (const auto& c : f.coeffs) norm2 += c * c;
    mpz_class bound = sqrt(norm2) + 1;
    bound <<= f.degree() + 1;  // extra factor 2 for the symmetric range

    auto [lifted, q] = detail::hensel_lift(f, modular, p, bound);

    // subset recombination over the lifted factors
    std::vector<size_t> live(lifted.size());
    for (size_t i = 0; i < live.size(); ++i) live[i] = i;
    IntPoly remaining = f;

    for (size_t take = 1; 2 * take <= live.size();) {
        std::vector<size_t> pick(take);
        for (size_t i = 0; i < take; ++i) pick[i] = i;
        bool found = false;
        for (;;) {
            IntPoly cand = IntPoly::one();
            for (size_t i : pick) cand = ip::mul(cand, lifted[live[i]]);
            cand = detail::symmetric_lift(cand, q);
            IntPoly quotient;
            if (cand.is_monic() && ip::try_divide_monic(remaining, cand, quotient)) {
                result.push_back(cand);
                remaining = std::move(quotient);
                std::vector<size_t> next_live;
                for (size_t i = 0, k = 0; i < live.size(); ++i) {
                    if (k < pick.size() && pick[k] == i) { ++k; continue; }
                    next_live.push_back(live[i]);
                }
                live = std::move(next_live);
                found = true;
                break;
            }
            // next combination
            int pos = static_cast<int>(take) - 1;
            while (pos >= 0 && pick[pos] == live.size() - take + pos) --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (size_t i = pos + 1; i < take; ++i) pick[i] = pick[i - 1] + 1;
        }
        if (!found) ++take;
    }
    if (remaining.degree() > 0) result.push_back(remaining);

    std::sort(result.begin(), result.end());
    IntPoly replay = IntPoly::one();
    for (const auto& g : result) replay = ip::mul(replay, g);
    if (!(replay == input)) throw std::logic_error("factor_integer_poly: factor product mismatch");
    return result;
}

} // namespace qwalk
