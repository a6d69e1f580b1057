#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "oracles.hpp"
#include "qwalk/incidence.hpp"
#include "qwalk/modarith.hpp"
#include "qwalk/walk_matrix.hpp"
#include "qwalk/wiedemann.hpp"

using namespace qwalk;

namespace {

// replay: sum_k ann[k] * s[i+k] = 0 for every window
void require_annihilates(const FieldPoly& ann, const std::vector<uint64_t>& seq, uint64_t p) {
    const size_t d = ann.degree();
    REQUIRE(d <= seq.size());
    for (size_t i = 0; i + d < seq.size(); ++i) {
        uint64_t acc = 0;
        for (size_t k = 0; k <= d; ++k)
            acc = (acc + mul_mod(ann.coeffs[k], seq[i + k] % p, p)) % p;
        REQUIRE(acc == 0);
    }
}

BlackBox dense_box(const oracles::Mat& A, uint64_t p) {
    return [A, p](const std::vector<uint64_t>& v) { return oracles::matvec(A, v, p); };
}

oracles::Mat diag(const std::vector<uint64_t>& d) {
    oracles::Mat A(d.size(), std::vector<uint64_t>(d.size(), 0));
    for (size_t i = 0; i < d.size(); ++i) A[i][i] = d[i];
    return A;
}

} // namespace

TEST_CASE("list_primes basics") {
    auto ps = list_primes(2, 10);
    REQUIRE(ps.size() == 4);
    REQUIRE(ps[0].value == 2);
    REQUIRE(ps[3].value == 7);
    REQUIRE(list_primes(14, 16).empty());
    REQUIRE_THROWS_AS(list_primes(0, 1ull << 31), std::out_of_range);
}

TEST_CASE("the default modulus window") {
    auto ps = list_primes(1999999000, 1999999180);
    REQUIRE(ps.size() == 12);
    bool found = false;
    for (auto p : ps) {
        REQUIRE(is_prime_u64(p.value));
        if (p.value == 1999999151) found = true;
    }
    REQUIRE(found);
}

TEST_CASE("PrimeModulus rejects composites") {
    REQUIRE_THROWS_AS(PrimeModulus(1999999001), std::invalid_argument);
    REQUIRE_NOTHROW(PrimeModulus(1999999003));
}

TEST_CASE("modular arithmetic near 2^31") {
    const uint64_t p = 1999999151;
    uint64_t a = p - 1, b = p - 2;
    REQUIRE(mul_mod(a, b, p) == mul_mod(b, a, p));
    REQUIRE(mul_mod(a, inv_mod(a, p), p) == 1);
    REQUIRE(pow_mod(5, p - 1, p) == 1);  // Fermat
}

TEST_CASE("SplitRng streams are reproducible and keyed") {
    SplitRng a = SplitRng::derive(42, 7);
    SplitRng b = SplitRng::derive(42, 7);
    SplitRng c = SplitRng::derive(42, 8);
    for (int i = 0; i < 16; ++i) REQUIRE(a.next() == b.next());
    bool differs = false;
    SplitRng a2 = SplitRng::derive(42, 7);
    for (int i = 0; i < 16; ++i)
        if (a2.next() != c.next()) differs = true;
    REQUIRE(differs);
}

TEST_CASE("berlekamp_massey on Fibonacci") {
    std::vector<uint64_t> fib{0, 1, 1, 2, 3, 5, 8, 13};
    FieldPoly ann = berlekamp_massey(fib, 97);
    // x^2 - x - 1
    REQUIRE(ann.coeffs == std::vector<uint64_t>{96, 96, 1});
    require_annihilates(ann, fib, 97);
}

TEST_CASE("berlekamp_massey on a constant sequence") {
    std::vector<uint64_t> s{5, 5, 5, 5};
    FieldPoly ann = berlekamp_massey(s, 7);
    REQUIRE(ann.coeffs == std::vector<uint64_t>{6, 1});  // x - 1
}

TEST_CASE("berlekamp_massey of the zero sequence is 1") {
    REQUIRE(berlekamp_massey({0, 0, 0, 0}, 97).is_one());
    REQUIRE(berlekamp_massey({}, 97).is_one());
}

TEST_CASE("berlekamp_massey on projected identity sequences") {
    SplitRng rng(3);
    const uint64_t p = 97;
    auto u = rng.field_vector(6, p), v = rng.field_vector(6, p);
    std::vector<uint64_t> seq(12);
    for (size_t i = 0; i < seq.size(); ++i) {
        uint64_t dot = 0;
        for (int j = 0; j < 6; ++j) dot = (dot + mul_mod(u[j], v[j], p)) % p;
        seq[i] = dot;  // A = I: u^T A^i v constant
    }
    FieldPoly ann = berlekamp_massey(seq, p);
    REQUIRE(ann.coeffs == std::vector<uint64_t>{p - 1, 1});  // x - 1
}

TEST_CASE("berlekamp_massey annihilation replay on random LFSR output") {
    SplitRng rng(99);
    const uint64_t p = 1999999151;
    for (int t = 0; t < 25; ++t) {
        size_t L = 1 + rng.below(6);
        std::vector<uint64_t> taps(L), s(L);
        for (auto& x : taps) x = rng.below(p);
        for (auto& x : s) x = rng.below(p);
        for (size_t i = L; i < 4 * L + 6; ++i) {
            uint64_t nxt = 0;
            for (size_t j = 0; j < L; ++j) nxt = (nxt + mul_mod(taps[j], s[i - 1 - j], p)) % p;
            s.push_back(nxt);
        }
        FieldPoly ann = berlekamp_massey(s, p);
        REQUIRE(ann.degree() <= int(L));
        require_annihilates(ann, s, p);
    }
}

TEST_CASE("wiedemann on the identity") {
    auto I8 = diag(std::vector<uint64_t>(8, 1));
    for (uint64_t p : {97ull, 1999999151ull}) {
        FieldPoly mp = wiedemann_minpoly(dense_box(I8, p), 8, p, 11);
        REQUIRE(mp.coeffs == std::vector<uint64_t>{p - 1, 1});
    }
}

TEST_CASE("wiedemann on a permutation with cycle type (3,3)") {
    oracles::Mat P(6, std::vector<uint64_t>(6, 0));
    // two 3-cycles: (0 1 2)(3 4 5)
    P[1][0] = P[2][1] = P[0][2] = 1;
    P[4][3] = P[5][4] = P[3][5] = 1;
    FieldPoly mp = wiedemann_minpoly(dense_box(P, 97), 6, 97, 5);
    REQUIRE(mp.coeffs == std::vector<uint64_t>{96, 0, 0, 1});  // x^3 - 1
    REQUIRE(mp == oracles::dense_minpoly(P, 97));
}

TEST_CASE("wiedemann equals the dense oracle on random sparse matrices") {
    SplitRng rng(2024);
    for (int t = 0; t < 20; ++t) {
        size_t dim = 2 + rng.below(24);
        auto A64 = oracles::random_sparse01(dim, 120, rng);
        for (uint64_t p : {97ull, 1999999151ull}) {
            auto A = oracles::mod_from_dense(A64, p);
            FieldPoly got = wiedemann_minpoly(dense_box(A, p), dim, p, 1000 + t, 3, 40);
            REQUIRE(got == oracles::dense_minpoly(A, p));
        }
    }
}

TEST_CASE("wiedemann on S+(U^3) of the line graph of W(2)") {
    Graph g = line_intersection_graph(generate_w(2));
    SupportMatrix S = positive_support_power(build_transition(g, build_arc_index(g)), 3);
    const uint64_t p = 1999999151;
    BlackBox bb = [&S, p](const std::vector<uint64_t>& v) { return blackbox_apply(S, v, p); };
    FieldPoly got = wiedemann_minpoly(bb, S.dim, p, 2024);
    auto dense = oracles::mod_from_dense(oracles::dense_from_support(S), p);
    REQUIRE(got == oracles::dense_minpoly(dense, p));
    REQUIRE(got.degree() == 11);
}

TEST_CASE("wiedemann signals non-convergence when the trial budget is too small") {
    auto I4 = diag(std::vector<uint64_t>(4, 1));
    // one trial can never satisfy a stability-2 stopping rule
    REQUIRE_THROWS_AS(wiedemann_minpoly(dense_box(I4, 97), 4, 97, 1, 2, 1), WiedemannError);
    REQUIRE_THROWS_AS(wiedemann_minpoly(dense_box(I4, 97), 4, 97, 1, 1, 20), std::invalid_argument);
}

TEST_CASE("wiedemann on a nilpotent Jordan block") {
    // minimal polynomial x^5; the annihilation spot-check is what forces
    // the lcm past truncated-looking projection sequences
    oracles::Mat J(5, std::vector<uint64_t>(5, 0));
    for (int i = 0; i + 1 < 5; ++i) J[i][i + 1] = 1;
    for (uint64_t p : {97ull, 1999999151ull}) {
        FieldPoly mp = wiedemann_minpoly(dense_box(J, p), 5, p, 3);
        REQUIRE(mp.coeffs == std::vector<uint64_t>{0, 0, 0, 0, 0, 1});  // x^5
        REQUIRE(mp == oracles::dense_minpoly(J, p));
    }
}

TEST_CASE("field polynomial division and gcd properties") {
    SplitRng rng(55);
    const uint64_t p = 1999999151;
    for (int t = 0; t < 40; ++t) {
        auto rand_poly = [&](size_t maxdeg) {
            std::vector<uint64_t> c(1 + rng.below(maxdeg + 1));
            for (auto& v : c) v = rng.below(p);
            return FieldPoly(std::move(c));
        };
        FieldPoly a = rand_poly(8), b = rand_poly(5);
        if (b.is_zero()) continue;
        auto [q, r] = fp::divmod(a, b, p);
        REQUIRE(fp::add(fp::mul(q, b, p), r, p) == a);  // a = qb + r
        REQUIRE(r.degree() < b.degree());
        FieldPoly g = fp::gcd(a, b, p);
        if (!a.is_zero()) REQUIRE(fp::mod(a, g, p).is_zero());
        REQUIRE(fp::mod(b, g, p).is_zero());
        // lcm * gcd = a * b up to a scalar
        if (!a.is_zero()) {
            FieldPoly l = fp::lcm(a, b, p);
            FieldPoly lhs = fp::monic(fp::mul(l, g, p), p);
            REQUIRE(lhs == fp::monic(fp::mul(a, b, p), p));
        }
    }
}

TEST_CASE("wiedemann transcript is deterministic in the seed") {
    SplitRng rng(5);
    auto A64 = oracles::random_sparse01(15, 200, rng);
    auto A = oracles::mod_from_dense(A64, 97);
    std::vector<int> d1, d2;
    FieldPoly m1 = wiedemann_minpoly(dense_box(A, 97), 15, 97, 123, 3, 20, &d1);
    FieldPoly m2 = wiedemann_minpoly(dense_box(A, 97), 15, 97, 123, 3, 20, &d2);
    REQUIRE(m1 == m2);
    REQUIRE(d1 == d2);
}

TEST_CASE("squarefree_check") {
    const uint64_t p = 97;
    // (x-1)(x-2) = x^2 - 3x + 2
    REQUIRE(squarefree_check(FieldPoly({2, p - 3, 1}), p));
    // (x-1)^2 = x^2 - 2x + 1
    REQUIRE_FALSE(squarefree_check(FieldPoly({1, p - 2, 1}), p));
}

TEST_CASE("squarefree_check against injected squares") {
    SplitRng rng(8);
    const uint64_t p = 1999999151;
    for (int t = 0; t < 20; ++t) {
        // product of distinct linear factors
        std::set<uint64_t> roots;
        while (roots.size() < 4) roots.insert(rng.below(1000));
        FieldPoly f = FieldPoly::one();
        for (uint64_t r : roots) f = fp::mul(f, FieldPoly({p - r, 1}), p);
        REQUIRE(squarefree_check(f, p));
        FieldPoly g = fp::mul(f, FieldPoly({p - *roots.begin(), 1}), p);  // square one root
        REQUIRE_FALSE(squarefree_check(g, p));
    }
}

TEST_CASE("krylov count on the identity") {
    auto I6 = diag(std::vector<uint64_t>(6, 1));
    const uint64_t p = 97;
    FieldPoly x_minus_1({p - 1, 1});
    KrylovCount kc = krylov_eigenspace_count(dense_box(I6, p), 6, p, x_minus_1, x_minus_1, 10, 7);
    REQUIRE(kc.rank == 6);
    REQUIRE(kc.saturated);
}

TEST_CASE("krylov count on diagonal(1,1,2)") {
    auto A = diag({1, 1, 2});
    const uint64_t p = 97;
    // minpoly = (x-1)(x-2) = x^2 - 3x + 2
    FieldPoly minpoly({2, p - 3, 1});
    FieldPoly f1({p - 1, 1}), f2({p - 2, 1});
    KrylovCount k2 = krylov_eigenspace_count(dense_box(A, p), 3, p, f2, minpoly, 60, 7);
    REQUIRE(k2.rank == 1);
    REQUIRE(k2.saturated);
    KrylovCount k1 = krylov_eigenspace_count(dense_box(A, p), 3, p, f1, minpoly, 60, 7);
    REQUIRE(k1.rank == 2);
    REQUIRE(k1.saturated);
    // rank never exceeds the dimension and is deterministic
    KrylovCount k1b = krylov_eigenspace_count(dense_box(A, p), 3, p, f1, minpoly, 60, 7);
    REQUIRE(k1b.rank == k1.rank);
    REQUIRE_THROWS_AS(
        krylov_eigenspace_count(dense_box(A, p), 3, p, FieldPoly({p - 5, 1}), minpoly, 10, 7),
        std::invalid_argument);
}

TEST_CASE("krylov counts match eigenspace dimensions on random diagonals") {
    SplitRng rng(31);
    const uint64_t p = 1999999151;
    for (int t = 0; t < 10; ++t) {
        size_t dim = 4 + rng.below(12);
        std::vector<uint64_t> d(dim);
        std::map<uint64_t, int> mult;
        for (auto& x : d) {
            x = 1 + rng.below(3);  // eigenvalues 1..3
            mult[x]++;
        }
        FieldPoly minpoly = FieldPoly::one();
        for (const auto& [ev, m] : mult) minpoly = fp::mul(minpoly, FieldPoly({p - ev, 1}), p);
        auto A = diag(d);
        for (const auto& [ev, m] : mult) {
            KrylovCount kc = krylov_eigenspace_count(dense_box(A, p), dim, p, FieldPoly({p - ev, 1}),
                                                     minpoly, int(dim) + 60, t * 100 + int(ev));
            REQUIRE(kc.rank == size_t(m));
            REQUIRE(kc.rank <= dim);
        }
    }
}

TEST_CASE("rank accumulator") {
    RankAccumulator acc(3, 97);
    REQUIRE(acc.insert({1, 2, 3}));
    REQUIRE_FALSE(acc.insert({2, 4, 6}));
    REQUIRE(acc.insert({0, 1, 0}));
    REQUIRE(acc.insert({0, 0, 5}));
    REQUIRE_FALSE(acc.insert({10, 20, 30}));
    REQUIRE(acc.rank() == 3);
}
