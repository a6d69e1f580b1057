#include <catch2/catch_amalgamated.hpp>

#include "frozen_cases.hpp"
#include "qwalk/factor_integer.hpp"
#include "qwalk/intpoly.hpp"
#include "qwalk/multiplicity.hpp"

using namespace qwalk;

namespace {

std::pair<PrimeModulus, FieldPoly> residue_of(const IntPoly& f, uint64_t p) {
    return {PrimeModulus(p), ip::reduce_mod(f, p)};
}

// rebuild a monic polynomial from its power sums (inverse Newton)
IntPoly poly_from_power_sums(const std::vector<mpz_class>& ps, int n) {
    std::vector<mpz_class> e(n + 1, 0);
    e[0] = 1;
    for (int k = 1; k <= n; ++k) {
        mpz_class s = 0;
        for (int i = 1; i <= k; ++i) {
            mpz_class t = e[k - i] * ps[i - 1];
            if (i % 2 == 0) t = -t;
            s += t;
        }
        e[k] = s / k;
    }
    std::vector<mpz_class> coeffs(n + 1);
    for (int i = 0; i <= n; ++i) {
        coeffs[n - i] = e[i];
        if (i % 2 == 1) coeffs[n - i] = -coeffs[n - i];
    }
    return IntPoly(std::move(coeffs));
}

} // namespace

TEST_CASE("crt lift of x-5") {
    IntPoly f = IntPoly::from_longs({-5, 1});
    auto lifted = crt_lift_minpoly({residue_of(f, 97), residue_of(f, 101)});
    REQUIRE(lifted == f);
}

TEST_CASE("crt lift reconstructs negative coefficients through the symmetric range") {
    IntPoly f = IntPoly::from_longs({25, 1});  // x + 25
    auto lifted = crt_lift_minpoly({residue_of(f, 1999999003), residue_of(f, 1999999013)});
    REQUIRE(lifted == f);
}

TEST_CASE("crt lift of the ten-factor product") {
    // the expanded coefficients reach ~4.6e27, so two ~2e9 primes cannot
    // cover them: the lift must refuse instead of returning garbage
    IntPoly f = frozen::ten_factor_product();
    REQUIRE_THROWS_AS(crt_lift_minpoly({residue_of(f, 1999999151), residue_of(f, 1999999171)}),
                      UnstableLiftError);
    // five primes put the symmetric range past the largest coefficient
    std::vector<std::pair<PrimeModulus, FieldPoly>> residues;
    for (uint64_t p : {1999999003ull, 1999999013ull, 1999999049ull, 1999999061ull, 1999999081ull})
        residues.push_back(residue_of(f, p));
    auto lifted = crt_lift_minpoly(residues);
    REQUIRE(lifted == f);
    REQUIRE(ip::reduce_mod(lifted, 1999999151) == ip::reduce_mod(f, 1999999151));
}

TEST_CASE("crt lift rejects degree mismatches") {
    REQUIRE_THROWS_AS(
        crt_lift_minpoly({residue_of(IntPoly::from_longs({-5, 1}), 97),
                          residue_of(IntPoly::from_longs({1, 0, 1}), 101)}),
        DegreeMismatchError);
}

TEST_CASE("crt lift reports instability") {
    // a coefficient outside the one-prime symmetric range changes when the
    // second prime arrives
    IntPoly f = IntPoly::from_longs({1500000000, 1});
    REQUIRE_THROWS_AS(crt_lift_minpoly({residue_of(f, 1999999003), residue_of(f, 1999999013)}),
                      UnstableLiftError);
    // three primes make it stable
    auto lifted = crt_lift_minpoly(
        {residue_of(f, 1999999003), residue_of(f, 1999999013), residue_of(f, 1999999049)});
    REQUIRE(lifted == f);
}

TEST_CASE("crt lift needs two residues") {
    REQUIRE_THROWS_AS(crt_lift_minpoly({residue_of(IntPoly::one(), 97)}), std::invalid_argument);
}

TEST_CASE("power sums of the quadratic factor") {
    auto ps = power_sums(IntPoly::from_longs({7128229, -5426, 1}), 4);
    REQUIRE(ps[0] == 5426);
    REQUIRE(ps[1] == 15185018);
    REQUIRE(ps[2] == mpz_class("43716137114"));
    REQUIRE(ps[3] == mpz_class("128961474307442"));
}

TEST_CASE("power sums of the cubic factor") {
    auto ps = power_sums(IntPoly::from_longs({-7632765, 122869, 799, 1}), 4);
    REQUIRE(ps[0] == -799);
    REQUIRE(ps[1] == 392663);
    REQUIRE(ps[2] == mpz_class("-192667111"));
    REQUIRE(ps[3] == mpz_class("99596332307"));
}

TEST_CASE("power sums of x-1") {
    auto ps = power_sums(IntPoly::from_longs({-1, 1}), 4);
    for (const auto& v : ps) REQUIRE(v == 1);
}

TEST_CASE("power sums replay through the inverse Newton identities") {
    SplitRng rng(17);
    for (int t = 0; t < 30; ++t) {
        int n = 1 + int(rng.below(4));
        std::vector<mpz_class> coeffs(n + 1);
        coeffs[n] = 1;
        for (int i = 0; i < n; ++i) coeffs[i] = long(rng.below(2001)) - 1000;
        IntPoly f(std::move(coeffs));
        auto ps = power_sums(f, 4);
        REQUIRE(poly_from_power_sums(ps, n) == f);
    }
}

TEST_CASE("factoring x^2 - 1") {
    auto fs = factor_integer_poly(IntPoly::from_longs({-1, 0, 1}));
    REQUIRE(fs.size() == 2);
    REQUIRE(fs[0] == IntPoly::from_longs({-1, 1}));
    REQUIRE(fs[1] == IntPoly::from_longs({1, 1}));
}

TEST_CASE("the quadratic factor is irreducible") {
    // discriminant 5426^2 - 4*7128229 = 928560 is not a perfect square:
    // 963^2 = 927369 < 928560 < 929296 = 964^2
    REQUIRE(963 * 963 < 928560);
    REQUIRE(928560 < 964 * 964);
    auto fs = factor_integer_poly(IntPoly::from_longs({7128229, -5426, 1}));
    REQUIRE(fs.size() == 1);
}

TEST_CASE("refactoring the ten-factor product") {
    auto fs = factor_integer_poly(frozen::ten_factor_product());
    auto expect = frozen::ten_factors();
    std::sort(expect.begin(), expect.end());
    REQUIRE(fs == expect);
}

TEST_CASE("factoring handles an x factor") {
    // x(x-1)(x+3)
    IntPoly f = ip::mul(ip::mul(IntPoly::from_longs({0, 1}), IntPoly::from_longs({-1, 1})),
                        IntPoly::from_longs({3, 1}));
    auto fs = factor_integer_poly(f);
    REQUIRE(fs.size() == 3);
    REQUIRE(fs[0] == IntPoly::from_longs({-1, 1}));
    REQUIRE(fs[1] == IntPoly::from_longs({0, 1}));
    REQUIRE(fs[2] == IntPoly::from_longs({3, 1}));
}

TEST_CASE("factoring rejects non-squarefree input") {
    IntPoly f = ip::mul(IntPoly::from_longs({-1, 1}), IntPoly::from_longs({-1, 1}));
    REQUIRE_THROWS_AS(factor_integer_poly(f), NotSquarefreeError);
}

TEST_CASE("factoring respects the degree cap") {
    std::vector<mpz_class> c(40, 0);
    c[39] = 1;
    c[0] = 1;
    REQUIRE_THROWS_AS(factor_integer_poly(IntPoly(std::move(c)), 32), FactorDegreeCapError);
}

TEST_CASE("x^4+1 is irreducible over Z though it splits mod every prime") {
    // recombination must reject every size-1 and size-2 subset of the
    // modular factors and return the whole polynomial
    auto fs = factor_integer_poly(IntPoly::from_longs({1, 0, 0, 0, 1}));
    REQUIRE(fs.size() == 1);
    REQUIRE(fs[0] == IntPoly::from_longs({1, 0, 0, 0, 1}));
}

TEST_CASE("x^4+4 splits into two quadratics") {
    auto fs = factor_integer_poly(IntPoly::from_longs({4, 0, 0, 0, 1}));
    REQUIRE(fs.size() == 2);
    REQUIRE(fs[0] == IntPoly::from_longs({2, -2, 1}));
    REQUIRE(fs[1] == IntPoly::from_longs({2, 2, 1}));
}

TEST_CASE("factoring with large coefficients") {
    // (x - 10^6)(x^2 + 10^9 x + 12345): the discriminant 10^18 - 4*12345
    // lies strictly between consecutive squares, so the quadratic is
    // irreducible and the Hensel bound must scale with the coefficients
    IntPoly lin({mpz_class(-1000000), mpz_class(1)});
    IntPoly quad({mpz_class(12345), mpz_class(1000000000), mpz_class(1)});
    auto fs = factor_integer_poly(ip::mul(lin, quad));
    REQUIRE(fs.size() == 2);
    REQUIRE(fs[0] == lin);
    REQUIRE(fs[1] == quad);
}

TEST_CASE("factoring rejects non-monic input") {
    REQUIRE_THROWS_AS(factor_integer_poly(IntPoly::from_longs({1, 0, 2})), std::invalid_argument);
}

TEST_CASE("factor product replay on random factor sets") {
    SplitRng rng(23);
    for (int t = 0; t < 15; ++t) {
        std::set<std::vector<long>> used;
        IntPoly f = IntPoly::one();
        int nf = 2 + int(rng.below(3));
        for (int i = 0; i < nf; ++i) {
            std::vector<long> c{long(rng.below(41)) - 20, 1};
            if (!used.insert(c).second) { --i; continue; }
            f = ip::mul(f, IntPoly::from_longs(c));
        }
        auto fs = factor_integer_poly(f);
        REQUIRE(fs.size() == size_t(nf));
        IntPoly prod = IntPoly::one();
        for (const auto& g : fs) prod = ip::mul(prod, g);
        REQUIRE(prod == f);
    }
}

TEST_CASE("multiplicity system for the identity support") {
    std::vector<FactorData> fd{FactorData::from_poly(IntPoly::from_longs({-1, 1}))};
    MultiplicitySystem sys = build_multiplicity_system(fd, {6, 6, 6, 6}, 6);
    REQUIRE(sys.unknowns == 1);
    REQUIRE(sys.rows[0][0] == 1);
    auto sol = solve_multiplicities(sys);
    REQUIRE(sol.unique);
    REQUIRE(sol.values == std::vector<long>{6});
}

TEST_CASE("multiplicity system for the arc reversal") {
    std::vector<FactorData> fd{FactorData::from_poly(IntPoly::from_longs({-1, 1})),
                               FactorData::from_poly(IntPoly::from_longs({1, 1}))};
    MultiplicitySystem sys = build_multiplicity_system(fd, {0, 2, 0, 2}, 2);
    auto sol = solve_multiplicities(sys);
    REQUIRE(sol.unique);
    REQUIRE(sol.values == std::vector<long>{1, 1});
}

TEST_CASE("reduce_system substitutes pins") {
    std::vector<FactorData> fd{FactorData::from_poly(IntPoly::from_longs({-1, 1})),
                               FactorData::from_poly(IntPoly::from_longs({1, 1}))};
    MultiplicitySystem sys = build_multiplicity_system(fd, {0, 2, 0, 2}, 2);

    SECTION("pin nothing is the identity transformation") {
        MultiplicitySystem r = reduce_system(sys, {});
        REQUIRE(r.unknowns == 2);
        REQUIRE(r.rows == sys.rows);
        REQUIRE(r.rhs == sys.rhs);
    }
    SECTION("pinning one unknown eliminates its column") {
        MultiplicitySystem r = reduce_system(sys, {{0, 1}});
        REQUIRE(r.unknowns == 1);
        REQUIRE(r.rhs[0] == 1);   // 2 - 1*1
        REQUIRE(r.rhs[1] == -1);  // 0 - 1*1
        auto sol = solve_multiplicities(r);
        REQUIRE(sol.unique);
        REQUIRE(sol.values == std::vector<long>{1});
    }
    SECTION("pinning everything consistently leaves an empty consistent system") {
        MultiplicitySystem r = reduce_system(sys, {{0, 1}, {1, 1}});
        REQUIRE(r.unknowns == 0);
        auto sol = solve_multiplicities(r);
        REQUIRE(sol.unique);
        REQUIRE(sol.values.empty());
    }
    SECTION("pinning everything inconsistently is infeasible") {
        MultiplicitySystem r = reduce_system(sys, {{0, 2}, {1, 1}});
        REQUIRE_THROWS_AS(solve_multiplicities(r), InfeasibleError);
    }
    SECTION("unknown pinned column") {
        REQUIRE_THROWS_AS(reduce_system(sys, {{5, 1}}), std::out_of_range);
    }
}

TEST_CASE("the full 5x10 system is built with the frozen coefficients") {
    auto polys = frozen::ten_factors();
    std::sort(polys.begin(), polys.end());
    std::vector<FactorData> fd;
    for (const auto& f : polys) fd.push_back(FactorData::from_poly(f));
    std::array<mpz_class, 4> traces{mpz_class("98280"), mpz_class("6670853280"),
                                    mpz_class("318986389121400"),
                                    mpz_class("21401273663621790120")};
    MultiplicitySystem sys = build_multiplicity_system(fd, traces, 98280);
    REQUIRE(sys.unknowns == 10);

    // frozen coefficient table in the original factor order
    // (x-1),(x-15),(x-125),(x-127),(x-68005),(x+25),(x+23),(x+9),quad,cubic;
    // canonical sorting permutes the columns
    const size_t where[10] = {4, 3, 2, 1, 0, 7, 6, 5, 8, 9};
    const char* rows[5][10] = {
        {"1", "1", "1", "1", "1", "1", "1", "1", "2", "3"},
        {"1", "15", "125", "127", "68005", "-25", "-23", "-9", "5426", "-799"},
        {"1", "225", "15625", "16129", "4624680025", "625", "529", "81", "15185018", "392663"},
        {"1", "3375", "1953125", "2048383", "314501365100125", "-15625", "-12167", "-729",
         "43716137114", "-192667111"},
        {"1", "50625", "244140625", "260144641", "21387665333634000625", "390625", "279841",
         "6561", "128961474307442", "99596332307"},
    };
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 10; ++j)
            REQUIRE(sys.rows[i][where[j]] == mpz_class(rows[i][j]));
    REQUIRE(sys.rhs[0] == traces[0]);  // the dimension equals tr(S) here
    for (int k = 1; k <= 4; ++k) REQUIRE(sys.rhs[k] == traces[k - 1]);

    SECTION("pinning the three known multiplicities leaves a 5x7 integer system") {
        // canonical indices: 0 = (x-68005) -> 1, 8 = quad -> 105, 9 = cubic -> 680
        MultiplicitySystem r = reduce_system(sys, {{0, 1}, {8, 105}, {9, 680}});
        REQUIRE(r.unknowns == 7);
        REQUIRE(r.rhs[0] == 98280 - 1 - 2 * 105 - 3 * 680);
    }
}

TEST_CASE("the recorded solution fits the reduced system but not the full one") {
    // multiplicities in the original factor order, including the pins
    const long m[10] = {15625, 2625, 4914, 5460, 1, 24570, 27300, 15625, 105, 680};
    const long deg[10] = {1, 1, 1, 1, 1, 1, 1, 1, 2, 3};
    long dimsum = 0;
    for (int j = 0; j < 10; ++j) dimsum += deg[j] * m[j];
    // the degree row of the full system is not satisfied (98370 != 98280);
    // the reduced system is (unit-tested above); both facts are recorded
    REQUIRE(dimsum == 98370);
    REQUIRE(dimsum != 98280);
    auto sys = frozen::reduced_system_5x7();
    const long reduced[7] = {15625, 2625, 4914, 5460, 24570, 27300, 15625};
    for (size_t i = 0; i < sys.rows.size(); ++i) {
        mpz_class s = 0;
        for (int j = 0; j < 7; ++j) s += sys.rows[i][j] * reduced[j];
        REQUIRE(s == sys.rhs[i]);
    }
}

TEST_CASE("the reduced 5x7 system has the frozen unique solution") {
    auto sol = solve_multiplicities(frozen::reduced_system_5x7());
    REQUIRE(sol.unique);
    REQUIRE(sol.values == frozen::reduced_system_solution());
}

TEST_CASE("solver reports infeasibility") {
    MultiplicitySystem sys;
    sys.unknowns = 2;
    sys.rows = {{1, 1}};
    sys.rhs = {3};
    sys.lower_bounds[0] = 2;
    sys.lower_bounds[1] = 2;
    sys.box_hi = 10;
    REQUIRE_THROWS_AS(solve_multiplicities(sys), InfeasibleError);
}

TEST_CASE("solver reports non-integer unique solutions as infeasible") {
    MultiplicitySystem sys;
    sys.unknowns = 1;
    sys.rows = {{2}};
    sys.rhs = {3};
    sys.box_hi = 10;
    REQUIRE_THROWS_AS(solve_multiplicities(sys), InfeasibleError);
}

TEST_CASE("solver caps the free rank") {
    MultiplicitySystem sys;
    sys.unknowns = 5;
    sys.rows = {{1, 1, 1, 1, 1}};
    sys.rhs = {4};
    sys.box_hi = 4;
    REQUIRE_THROWS_AS(solve_multiplicities(sys), FreeRankTooHighError);
}

TEST_CASE("solver returns every witness when the solution is not unique") {
    MultiplicitySystem sys;
    sys.unknowns = 2;
    sys.rows = {{1, 1}};
    sys.rhs = {3};
    sys.box_hi = 3;
    auto sol = solve_multiplicities(sys);
    REQUIRE_FALSE(sol.unique);
    REQUIRE(sol.witnesses.size() == 4);  // (0,3),(1,2),(2,1),(3,0)
}

TEST_CASE("solver handles three free variables at the cap") {
    MultiplicitySystem sys;
    sys.unknowns = 4;
    sys.rows = {{1, 1, 1, 1}};
    sys.rhs = {4};
    sys.box_hi = 1;  // forces (1,1,1,1)
    auto sol = solve_multiplicities(sys);
    REQUIRE(sol.unique);
    REQUIRE(sol.values == std::vector<long>{1, 1, 1, 1});
}

TEST_CASE("solver handles a vacuous congruence on the innermost variable") {
    // second row does not involve the free unknown at all
    MultiplicitySystem sys;
    sys.unknowns = 3;
    sys.rows = {{1, 1, 0}, {0, 0, 2}};
    sys.rhs = {2, 4};
    sys.box_hi = 2;
    auto sol = solve_multiplicities(sys);
    REQUIRE_FALSE(sol.unique);
    REQUIRE(sol.witnesses.size() == 3);  // x2 in {0,1,2}, x3 = 2
    for (const auto& w : sol.witnesses) REQUIRE(w[2] == 2);
}
