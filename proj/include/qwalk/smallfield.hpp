#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qwalk {

// Arithmetic tables for GF(q), q = p or p^2, q <= 25. Extension elements
// a + b*t are encoded as a + p*b, with t a root of the Conway polynomial;
// the tables are built once from that polynomial, so all generators are
// reproducible bit for bit.
class SmallField {
public:
    static SmallField make(int q) {
        switch (q) {
            case 2: case 3: case 5: case 7: return SmallField(q, 1, 0, 0);
            case 4:  return SmallField(2, 2, 1, 1);   // t^2 + t + 1
            case 9:  return SmallField(3, 2, 2, 2);   // t^2 + 2t + 2
            case 25: return SmallField(5, 2, 2, 4);   // t^2 + 4t + 2
            default: throw std::invalid_argument("SmallField: unsupported order " + std::to_string(q));
        }
    }

    int order() const { return q_; }
    int characteristic() const { return p_; }
    int degree() const { return k_; }

    int add(int x, int y) const { return add_[x * q_ + y]; }
    int sub(int x, int y) const { return add_[x * q_ + neg_[y]]; }
    int neg(int x) const { return neg_[x]; }
    int mul(int x, int y) const { return mul_[x * q_ + y]; }

    int inv(int x) const {
        if (x == 0) throw std::domain_error("SmallField: inverse of zero");
        return inv_[x];
    }

    int pow(int x, long e) const {
        int r = 1, b = x;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    // Frobenius x -> x^p (conjugation of GF(p^2) over GF(p))
    int frobenius(int x) const { return frob_[x]; }

private:
    SmallField(int p, int k, int c0, int c1) : p_(p), k_(k), q_(1) {
        for (int i = 0; i < k; ++i) q_ *= p;
        add_.resize(q_ * q_);
        mul_.resize(q_ * q_);
        neg_.resize(q_);
        inv_.assign(q_, 0);
        frob_.resize(q_);
        for (int x = 0; x < q_; ++x) {
            int a0 = x % p, a1 = x / p;
            neg_[x] = (p - a0) % p + p * ((p - a1) % p);
            for (int y = 0; y < q_; ++y) {
                int b0 = y % p, b1 = y / p;
                add_[x * q_ + y] = (a0 + b0) % p + p * ((a1 + b1) % p);
                // t^2 = -(c0 + c1 t)
                int hi = a1 * b1;
                int r0 = ((a0 * b0 - hi * c0) % p + p * p) % p;
                int r1 = ((a0 * b1 + a1 * b0 - hi * c1) % p + p * p) % p;
                mul_[x * q_ + y] = r0 + p * r1;
            }
        }
        for (int x = 1; x < q_; ++x)
            for (int y = 1; y < q_; ++y)
                if (mul_[x * q_ + y] == 1) inv_[x] = y;
        for (int x = 0; x < q_; ++x) frob_[x] = pow(x, p);
    }

    int p_, k_, q_;
    std::vector<int> add_, mul_, neg_, inv_, frob_;
};

} // namespace qwalk
