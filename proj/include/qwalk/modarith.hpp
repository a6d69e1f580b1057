#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qwalk {

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t p) {
    uint64_t s = a + b;
    return s >= p ? s - p : s;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

inline uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t p) {
    uint64_t r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return r;
}

// p prime
inline uint64_t inv_mod(uint64_t a, uint64_t p) {
    return pow_mod(a % p, p - 2, p);
}

// Deterministic Miller-Rabin, valid for all n < 2^64.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// A certified prime modulus, value < 2^31. The certificate pipeline
// additionally restricts itself to the window (2^30, 2^31) so that
// 0/1 black-box products stay far from 64-bit overflow.
struct PrimeModulus {
    uint32_t value = 0;

    PrimeModulus() = default;
    explicit PrimeModulus(uint64_t p) {
        if (p >= (1ull << 31))
            throw std::out_of_range("PrimeModulus: modulus above 2^31");
        if (!is_prime_u64(p))
            throw std::invalid_argument("PrimeModulus: " + std::to_string(p) + " is not prime");
        value = static_cast<uint32_t>(p);
    }
    operator uint64_t() const { return value; }
    friend bool operator==(PrimeModulus a, PrimeModulus b) { return a.value == b.value; }
    friend bool operator<(PrimeModulus a, PrimeModulus b) { return a.value < b.value; }
};

// All primes in [lo, hi], ascending.
inline std::vector<PrimeModulus> list_primes(uint64_t lo, uint64_t hi) {
    if (hi >= (1ull << 31))
        throw std::out_of_range("list_primes: range bounds out of supported width (need hi < 2^31)");
    std::vector<PrimeModulus> out;
    for (uint64_t n = lo; n <= hi; ++n)
        if (is_prime_u64(n)) out.push_back(PrimeModulus(n));
    return out;
}

// Seedable splittable generator: splitmix64 streams keyed by
// (master seed, stream index). Identical keys give identical streams.
class SplitRng {
public:
    SplitRng() = default;
    explicit SplitRng(uint64_t state) : state_(state) {}

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static SplitRng derive(uint64_t master, uint64_t index) {
        return SplitRng(mix(master ^ mix(index + 0x51ed27f4ad1c5a39ull)));
    }

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound >= 1
    uint64_t below(uint64_t bound) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % bound;
    }

    std::vector<uint64_t> field_vector(size_t n, uint64_t p) {
        std::vector<uint64_t> v(n);
        for (auto& e : v) e = below(p);
        return v;
    }

private:
    uint64_t state_ = 0x853c49e6748fea9bull;
};

} // namespace qwalk
