#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qwalk/fieldpoly.hpp"
#include "qwalk/modarith.hpp"

namespace qwalk {

// Polynomial over Z, coefficients ascending. Normal form is primitive
// (content 1) with positive leading coefficient; minimal polynomials are
// monic so normalization is a no-op for them.
struct IntPoly {
    std::vector<mpz_class> coeffs;

    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> c) : coeffs(std::move(c)) { trim(); }
    static IntPoly from_longs(const std::vector<long>& c) {
        std::vector<mpz_class> v(c.begin(), c.end());
        return IntPoly(std::move(v));
    }
    static IntPoly one() { return from_longs({1}); }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    const mpz_class& lead() const { return coeffs.back(); }
    bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }

    mpz_class content() const {
        mpz_class g = 0;
        for (const auto& c : coeffs) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    // divide out content, make leading coefficient positive
    void normalize() {
        trim();
        if (is_zero()) return;
        mpz_class g = content();
        if (lead() < 0) g = -g;
        if (g != 1)
            for (auto& c : coeffs) c /= g;
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs == b.coeffs; }
    friend bool operator<(const IntPoly& a, const IntPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        for (int i = a.degree(); i >= 0; --i)
            if (a.coeffs[i] != b.coeffs[i]) return a.coeffs[i] < b.coeffs[i];
        return false;
    }
};

namespace ip {

inline IntPoly add(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return IntPoly(std::move(c));
}

inline IntPoly sub(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
    return IntPoly(std::move(c));
}

inline IntPoly mul(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<mpz_class> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            c[i + j] += a.coeffs[i] * b.coeffs[j];
    return IntPoly(std::move(c));
}

inline IntPoly scale(const IntPoly& a, const mpz_class& s) {
    IntPoly c = a;
    for (auto& v : c.coeffs) v *= s;
    c.trim();
    return c;
}

// division by a monic divisor; returns (quotient, remainder)
inline std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& b) {
    if (!b.is_monic()) throw std::invalid_argument("divmod_monic: divisor not monic");
    if (a.degree() < b.degree()) return {IntPoly(), a};
    std::vector<mpz_class> r = a.coeffs;
    std::vector<mpz_class> q(a.degree() - b.degree() + 1, 0);
    for (int i = a.degree(); i >= b.degree(); --i) {
        mpz_class f = r[i];
        if (f == 0) continue;
        q[i - b.degree()] = f;
        for (int j = 0; j <= b.degree(); ++j) r[i - b.degree() + j] -= f * b.coeffs[j];
    }
    return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

// exact division test: if b | a returns the quotient
inline bool try_divide_monic(const IntPoly& a, const IntPoly& b, IntPoly& quotient) {
    auto [q, r] = divmod_monic(a, b);
    if (!r.is_zero()) return false;
    quotient = std::move(q);
    return true;
}

inline IntPoly derivative(const IntPoly& a) {
    if (a.degree() < 1) return IntPoly();
    std::vector<mpz_class> c(a.degree());
    for (int i = 1; i <= a.degree(); ++i) c[i - 1] = a.coeffs[i] * i;
    return IntPoly(std::move(c));
}

inline mpz_class eval(const IntPoly& a, const mpz_class& x) {
    mpz_class r = 0;
    for (auto it = a.coeffs.rbegin(); it != a.coeffs.rend(); ++it) r = r * x + *it;
    return r;
}

inline IntPoly primitive_part(IntPoly a) {
    a.normalize();
    return a;
}

// gcd over Z via the primitive pseudo-remainder sequence
inline IntPoly gcd(IntPoly a, IntPoly b) {
    a = primitive_part(std::move(a));
    b = primitive_part(std::move(b));
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        // pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b
        int delta = a.degree() - b.degree();
        mpz_class lc = b.lead();
        IntPoly r = a;
        for (int i = 0; i <= delta; ++i) {
            if (r.degree() < b.degree()) break;
            // r = lc * r - r.lead() * x^(deg r - deg b) * b
            int shift = r.degree() - b.degree();
            mpz_class rl = r.lead();
            IntPoly t = scale(r, lc);
            std::vector<mpz_class> s(shift + b.coeffs.size(), 0);
            for (size_t j = 0; j < b.coeffs.size(); ++j) s[shift + j] = rl * b.coeffs[j];
            r = sub(t, IntPoly(std::move(s)));
        }
        r = primitive_part(std::move(r));
        a = std::move(b);
        b = std::move(r);
    }
    return primitive_part(std::move(a));
}

inline bool squarefree_over_z(const IntPoly& f) {
    if (f.degree() < 1) return true;
    return gcd(f, derivative(f)).degree() == 0;
}

inline FieldPoly reduce_mod(const IntPoly& a, uint64_t p) {
    std::vector<uint64_t> c(a.coeffs.size());
    mpz_class t;
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
        t = a.coeffs[i] % static_cast<long>(p);
        if (t < 0) t += static_cast<long>(p);
        c[i] = t.get_ui();
    }
    return FieldPoly(std::move(c));
}

inline std::string to_string(const IntPoly& a) {
    if (a.is_zero()) return "0";
    std::string s;
    for (int i = a.degree(); i >= 0; --i) {
        const mpz_class& c = a.coeffs[i];
        if (c == 0) continue;
        if (!s.empty()) s += c > 0 ? " + " : " - ";
        else if (c < 0) s += "-";
        mpz_class ab = abs(c);
        if (i == 0 || ab != 1) s += ab.get_str();
        if (i > 0) s += "x";
        if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
}

} // namespace ip

struct DegreeMismatchError : std::runtime_error {
    uint64_t prime;
    DegreeMismatchError(uint64_t p, int got, int expected)
        : std::runtime_error("crt_lift: residue mod " + std::to_string(p) + " has degree " +
                             std::to_string(got) + ", expected " + std::to_string(expected) +
                             " (unlucky prime)"),
          prime(p) {}
};
struct UnstableLiftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficient-wise CRT of same-degree residues into the symmetric range
// (-M/2, M/2]. The result must already be stable before the last prime is
// folded in, and is verified to reduce back to every input residue.
inline IntPoly crt_lift_minpoly(const std::vector<std::pair<PrimeModulus, FieldPoly>>& residues) {
    if (residues.size() < 2)
        throw std::invalid_argument("crt_lift: need at least 2 residues");
    const int deg = residues[0].second.degree();
    for (const auto& [p, f] : residues)
        if (f.degree() != deg) throw DegreeMismatchError(p.value, f.degree(), deg);

    std::vector<mpz_class> coeffs(deg + 1, 0);
    mpz_class M = 1;
    std::vector<mpz_class> prev;
    for (size_t ri = 0; ri < residues.size(); ++ri) {
        const uint64_t p = residues[ri].first.value;
        const auto& f = residues[ri].second;
        if (ri == 0) {
            for (int i = 0; i <= deg; ++i) coeffs[i] = static_cast<long>(f.coeffs[i]);
            M = static_cast<long>(p);
        } else {
            mpz_class Mp = M * static_cast<long>(p);
            mpz_class Minv_m;  // M^{-1} mod p
            {
                mpz_class pm(static_cast<long>(p)), Mm = M % pm;
                if (mpz_invert(Minv_m.get_mpz_t(), Mm.get_mpz_t(), pm.get_mpz_t()) == 0)
                    throw std::logic_error("crt_lift: moduli not coprime");
            }
            for (int i = 0; i <= deg; ++i) {
                mpz_class r = (static_cast<long>(f.coeffs[i]) - coeffs[i]) % static_cast<long>(p);
                if (r < 0) r += static_cast<long>(p);
                r = (r * Minv_m) % static_cast<long>(p);
                coeffs[i] += M * r;
            }
            M = Mp;
        }
        // symmetric range (-M/2, M/2]
        for (auto& c : coeffs) {
            mpz_class cc = c % M;
            if (cc < 0) cc += M;
            if (2 * cc > M) cc -= M;
            c = cc;
        }
        if (ri + 1 == residues.size() && coeffs != prev)
            throw UnstableLiftError("crt_lift: result changed when folding in the final prime; more primes needed");
        prev = coeffs;
    }

    IntPoly out(std::move(coeffs));
    for (const auto& [p, f] : residues)  // reduction replay
        if (!(ip::reduce_mod(out, p.value) == f))
            throw std::logic_error("crt_lift: result does not reduce to an input residue");
    return out;
}

// Sums of k-th powers of the roots, from the coefficients alone
// (Newton's identities); exact for any monic f.
inline std::vector<mpz_class> power_sums(const IntPoly& f, int up_to) {
    if (!f.is_monic()) throw std::invalid_argument("power_sums: polynomial must be monic");
    const int n = f.degree();
    // e[i] = i-th elementary symmetric function of the roots
    std::vector<mpz_class> e(up_to + 1, 0);
    for (int i = 1; i <= up_to && i <= n; ++i) {
        e[i] = f.coeffs[n - i];
        if (i % 2 == 1) e[i] = -e[i];
    }
    std::vector<mpz_class> ps(up_to + 1, 0);
    for (int k = 1; k <= up_to; ++k) {
        mpz_class s = 0;
        if (k <= n) {
            s = e[k] * k;
            if (k % 2 == 0) s = -s;
        }
        for (int i = 1; i < k && i <= n; ++i) {
            mpz_class t = e[i] * ps[k - i];
            if (i % 2 == 0) t = -t;
            s += t;
        }
        ps[k] = s;
    }
    return {ps.begin() + 1, ps.end()};
}

} // namespace qwalk
