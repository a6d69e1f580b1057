#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/modarith.hpp"

namespace qwalk {

// Dense polynomial over GF(p), coefficients ascending, no trailing zeros.
// The zero polynomial has an empty coefficient vector.
struct FieldPoly {
    std::vector<uint64_t> coeffs;

    FieldPoly() = default;
    explicit FieldPoly(std::vector<uint64_t> c) : coeffs(std::move(c)) { trim(); }
    static FieldPoly one() { return FieldPoly({1}); }
    static FieldPoly zero() { return FieldPoly(); }
    static FieldPoly x() { return FieldPoly({0, 1}); }

    bool is_zero() const { return coeffs.empty(); }
    bool is_one() const { return coeffs.size() == 1 && coeffs[0] == 1; }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }  // -1 for zero
    uint64_t lead() const { return coeffs.back(); }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }
    friend bool operator==(const FieldPoly& a, const FieldPoly& b) { return a.coeffs == b.coeffs; }
};

namespace fp {

inline FieldPoly add(const FieldPoly& a, const FieldPoly& b, uint64_t p) {
    std::vector<uint64_t> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] = a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] = add_mod(c[i], b.coeffs[i], p);
    return FieldPoly(std::move(c));
}

inline FieldPoly sub(const FieldPoly& a, const FieldPoly& b, uint64_t p) {
    std::vector<uint64_t> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) c[i] = a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) c[i] = sub_mod(c[i], b.coeffs[i], p);
    return FieldPoly(std::move(c));
}

inline FieldPoly scale(const FieldPoly& a, uint64_t s, uint64_t p) {
    FieldPoly c = a;
    for (auto& v : c.coeffs) v = mul_mod(v, s, p);
    c.trim();
    return c;
}

inline FieldPoly mul(const FieldPoly& a, const FieldPoly& b, uint64_t p) {
    if (a.is_zero() || b.is_zero()) return FieldPoly();
    std::vector<uint64_t> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
    for (size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0) continue;
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            c[i + j] = (c[i + j] + mul_mod(a.coeffs[i], b.coeffs[j], p)) % p;
    }
    return FieldPoly(std::move(c));
}

inline FieldPoly monic(const FieldPoly& a, uint64_t p) {
    if (a.is_zero()) return a;
    return scale(a, inv_mod(a.lead(), p), p);
}

// division with remainder: a = q*b + r, deg r < deg b
inline std::pair<FieldPoly, FieldPoly> divmod(const FieldPoly& a, const FieldPoly& b, uint64_t p) {
    if (b.is_zero()) throw std::domain_error("FieldPoly: division by zero");
    if (a.degree() < b.degree()) return {FieldPoly(), a};
    std::vector<uint64_t> r = a.coeffs;
    std::vector<uint64_t> q(a.degree() - b.degree() + 1, 0);
    const uint64_t inv_lead = inv_mod(b.lead(), p);
    for (int i = a.degree(); i >= b.degree(); --i) {
        uint64_t f = mul_mod(r[i], inv_lead, p);
        if (f == 0) continue;
        q[i - b.degree()] = f;
        for (int j = 0; j <= b.degree(); ++j)
            r[i - b.degree() + j] = sub_mod(r[i - b.degree() + j], mul_mod(f, b.coeffs[j], p), p);
    }
    return {FieldPoly(std::move(q)), FieldPoly(std::move(r))};
}

inline FieldPoly mod(const FieldPoly& a, const FieldPoly& b, uint64_t p) {
    return divmod(a, b, p).second;
}

inline FieldPoly gcd(FieldPoly a, FieldPoly b, uint64_t p) {
    while (!b.is_zero()) {
        FieldPoly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

inline FieldPoly lcm(const FieldPoly& a, const FieldPoly& b, uint64_t p) {
    if (a.is_zero() || b.is_zero()) return FieldPoly();
    FieldPoly g = gcd(a, b, p);
    return monic(divmod(mul(a, b, p), g, p).first, p);
}

inline FieldPoly derivative(const FieldPoly& a, uint64_t p) {
    if (a.degree() < 1) return FieldPoly();
    std::vector<uint64_t> c(a.degree());
    for (int i = 1; i <= a.degree(); ++i) c[i - 1] = mul_mod(a.coeffs[i], i % p, p);
    return FieldPoly(std::move(c));
}

inline uint64_t eval(const FieldPoly& a, uint64_t x, uint64_t p) {
    uint64_t r = 0;
    for (auto it = a.coeffs.rbegin(); it != a.coeffs.rend(); ++it)
        r = (mul_mod(r, x, p) + *it) % p;
    return r;
}

// b^e mod m in GF(p)[x]
inline FieldPoly pow_mod_poly(FieldPoly b, uint64_t e, const FieldPoly& m, uint64_t p) {
    FieldPoly r = FieldPoly::one();
    b = mod(b, m, p);
    while (e) {
        if (e & 1) r = mod(mul(r, b, p), m, p);
        b = mod(mul(b, b, p), m, p);
        e >>= 1;
    }
    return r;
}

inline std::string to_string(const FieldPoly& a) {
    if (a.is_zero()) return "0";
    std::string s;
    for (int i = a.degree(); i >= 0; --i) {
        if (a.coeffs[i] == 0) continue;
        if (!s.empty()) s += " + ";
        if (i == 0 || a.coeffs[i] != 1) s += std::to_string(a.coeffs[i]);
        if (i > 0) s += "x";
        if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
}

} // namespace fp

// f(A)*v through a black-box apply, by Horner's rule.
template <class Apply>
std::vector<uint64_t> poly_apply(const FieldPoly& f, Apply&& apply, const std::vector<uint64_t>& v,
                                 uint64_t p) {
    std::vector<uint64_t> w(v.size(), 0);
    if (f.is_zero()) return w;
    for (size_t i = 0; i < v.size(); ++i) w[i] = mul_mod(f.lead(), v[i], p);
    for (int d = f.degree() - 1; d >= 0; --d) {
        w = apply(w);
        if (f.coeffs[d] != 0)
            for (size_t i = 0; i < v.size(); ++i) w[i] = (w[i] + mul_mod(f.coeffs[d], v[i], p)) % p;
    }
    return w;
}

} // namespace qwalk
