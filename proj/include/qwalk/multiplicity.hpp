#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qwalk/intpoly.hpp"

namespace qwalk {

struct FactorData {
    IntPoly factor;
    int degree = 0;
    std::array<mpz_class, 4> psums;  // p1..p4: sums of k-th powers of the roots

    static FactorData from_poly(const IntPoly& f) {
        FactorData d;
        d.factor = f;
        d.degree = f.degree();
        auto ps = power_sums(f, 4);
        for (int i = 0; i < 4; ++i) d.psums[i] = ps[i];
        return d;
    }
};

// Linear system for the factor multiplicities: row 0 is the dimension
// equation (sum deg_j * m_j = dim), rows 1..4 the trace equations
// (sum p_k(f_j) * m_j = tr(S^k)).
struct MultiplicitySystem {
    size_t unknowns = 0;
    std::vector<std::vector<mpz_class>> rows;  // each of size `unknowns`
    std::vector<mpz_class> rhs;
    std::map<size_t, long> pinned;        // column -> fixed multiplicity
    std::map<size_t, long> lower_bounds;  // column -> lower bound (default 0)
    mpz_class box_hi = 0;                 // upper bound for every unknown
};

inline MultiplicitySystem build_multiplicity_system(const std::vector<FactorData>& factors,
                                                    const std::array<mpz_class, 4>& traces,
                                                    const mpz_class& dim) {
    MultiplicitySystem sys;
    sys.unknowns = factors.size();
    sys.rows.assign(5, std::vector<mpz_class>(sys.unknowns, 0));
    sys.rhs.assign(5, 0);
    for (size_t j = 0; j < factors.size(); ++j) {
        sys.rows[0][j] = factors[j].degree;
        for (int k = 1; k <= 4; ++k) sys.rows[k][j] = factors[j].psums[k - 1];
    }
    sys.rhs[0] = dim;
    for (int k = 1; k <= 4; ++k) sys.rhs[k] = traces[k - 1];
    sys.box_hi = dim;
    return sys;
}

// Substitutes pinned values, drops their columns and renumbers the
// remaining unknowns; rows are reduced to primitive integer form.
inline MultiplicitySystem reduce_system(const MultiplicitySystem& sys,
                                        const std::map<size_t, long>& pinned) {
    for (const auto& [col, val] : pinned)
        if (col >= sys.unknowns)
            throw std::out_of_range("reduce_system: pinned factor " + std::to_string(col) + " unknown");

    MultiplicitySystem out;
    std::vector<size_t> keep;
    for (size_t j = 0; j < sys.unknowns; ++j)
        if (!pinned.count(j)) keep.push_back(j);
    out.unknowns = keep.size();
    out.box_hi = sys.box_hi;
    out.rows.assign(sys.rows.size(), std::vector<mpz_class>(out.unknowns, 0));
    out.rhs = sys.rhs;
    for (size_t i = 0; i < sys.rows.size(); ++i) {
        for (const auto& [col, val] : pinned) out.rhs[i] -= sys.rows[i][col] * val;
        for (size_t j = 0; j < keep.size(); ++j) out.rows[i][j] = sys.rows[i][keep[j]];
        // primitive form
        mpz_class g = 0;
        for (const auto& c : out.rows[i]) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.rhs[i].get_mpz_t());
        if (g > 1) {
            for (auto& c : out.rows[i]) c /= g;
            out.rhs[i] /= g;
        }
    }
    for (size_t j = 0; j < keep.size(); ++j) {
        auto it = sys.lower_bounds.find(keep[j]);
        if (it != sys.lower_bounds.end()) out.lower_bounds[j] = it->second;
    }
    // carried pins stay substituted; out.pinned left empty
    return out;
}

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FreeRankTooHighError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MultiplicitySolution {
    bool unique = false;
    std::vector<long> values;                         // when unique
    std::vector<std::vector<long>> witnesses;  // all solutions found otherwise
};

namespace detail {

// arithmetic progressions x ≡ r (mod m); m == 0 encodes "no constraint"
struct Progression {
    mpz_class r = 0, m = 1;
    bool empty = false;
};

inline Progression intersect(const Progression& a, const mpz_class& coef, const mpz_class& rhs,
                             const mpz_class& mod) {
    // add constraint coef * x ≡ rhs (mod mod) to progression a
    if (a.empty) return a;
    if (mod <= 1) return a;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), coef.get_mpz_t(), mod.get_mpz_t());
    if (rhs % g != 0) return {0, 1, true};
    mpz_class m2 = mod / g;
    if (m2 == 1) return a;
    mpz_class c2 = (coef / g) % m2, r2 = (rhs / g) % m2, inv;
    if (c2 < 0) c2 += m2;
    if (r2 < 0) r2 += m2;
    if (mpz_invert(inv.get_mpz_t(), c2.get_mpz_t(), m2.get_mpz_t()) == 0)
        throw std::logic_error("progression: not invertible after gcd removal");
    r2 = (r2 * inv) % m2;
    // combine x ≡ a.r (mod a.m) with x ≡ r2 (mod m2)
    mpz_class g2, diff = r2 - a.r;
    mpz_gcd(g2.get_mpz_t(), a.m.get_mpz_t(), m2.get_mpz_t());
    if (diff % g2 != 0) return {0, 1, true};
    mpz_class lcm = a.m / g2 * m2;
    mpz_class m_div = a.m / g2, m2_div = m2 / g2, k;
    if (mpz_invert(k.get_mpz_t(), m_div.get_mpz_t(), m2_div.get_mpz_t()) == 0 && m2_div != 1)
        throw std::logic_error("progression: CRT inverse failed");
    mpz_class t = ((diff / g2) % m2_div) * k % m2_div;
    mpz_class r = a.r + a.m * t;
    r %= lcm;
    if (r < 0) r += lcm;
    return {r, lcm, false};
}

} // namespace detail

// Enumerates all integer solutions of the (already reduced) system inside
// the box [lower_bound_j, box_hi]: exact rational elimination, interval
// propagation on the free variables, then lattice enumeration with the
// last free variable driven by the congruence conditions of the pivot
// rows. Returns the unique solution or every solution found.
inline MultiplicitySolution solve_multiplicities(const MultiplicitySystem& sys,
                                                 int free_rank_cap = 3,
                                                 unsigned long enum_budget = 400000000UL,
                                                 size_t witness_cap = 16) {
    const size_t u = sys.unknowns;
    const size_t nr = sys.rows.size();

    // rational row echelon
    std::vector<std::vector<mpq_class>> A(nr, std::vector<mpq_class>(u + 1));
    for (size_t i = 0; i < nr; ++i) {
        for (size_t j = 0; j < u; ++j) A[i][j] = sys.rows[i][j];
        A[i][u] = sys.rhs[i];
    }
    std::vector<size_t> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < u && row < nr; ++col) {
        size_t sel = row;
        while (sel < nr && A[sel][col] == 0) ++sel;
        if (sel == nr) continue;
        std::swap(A[sel], A[row]);
        mpq_class inv = 1 / A[row][col];
        for (size_t j = col; j <= u; ++j) A[row][j] *= inv;
        for (size_t i = 0; i < nr; ++i) {
            if (i == row || A[i][col] == 0) continue;
            mpq_class f = A[i][col];
            for (size_t j = col; j <= u; ++j) A[i][j] -= f * A[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    const size_t rank = row;
    for (size_t i = rank; i < nr; ++i)
        if (A[i][u] != 0)
            throw InfeasibleError("solve_multiplicities: inconsistent system");

    std::vector<char> is_pivot(u, 0);
    for (size_t c : pivot_col) is_pivot[c] = 1;
    std::vector<size_t> free_cols;
    for (size_t j = 0; j < u; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    if (static_cast<int>(free_cols.size()) > free_rank_cap)
        throw FreeRankTooHighError("solve_multiplicities: free rank " +
                                   std::to_string(free_cols.size()) + " above cap " +
                                   std::to_string(free_rank_cap));

    auto lb = [&](size_t j) -> mpz_class {
        auto it = sys.lower_bounds.find(j);
        return it == sys.lower_bounds.end() ? mpz_class(0) : mpz_class(it->second);
    };
    const mpz_class hi = sys.box_hi;

    // integer pivot relations: D_i * x_{p_i} = C_i - sum_f A_if * x_f
    struct Relation {
        size_t pcol;
        mpz_class D, C;
        std::vector<mpz_class> fcoef;  // per free col
    };
    std::vector<Relation> rels(rank);
    for (size_t i = 0; i < rank; ++i) {
        mpz_class den = 1;
        mpz_class l;
        for (size_t f = 0; f < free_cols.size(); ++f) {
            mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), A[i][free_cols[f]].get_den().get_mpz_t());
            den = l;
        }
        mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), A[i][u].get_den().get_mpz_t());
        den = l;
        rels[i].pcol = pivot_col[i];
        rels[i].D = den;
        rels[i].C = mpq_class(A[i][u] * den).get_num();
        rels[i].fcoef.resize(free_cols.size());
        for (size_t f = 0; f < free_cols.size(); ++f)
            rels[i].fcoef[f] = mpq_class(A[i][free_cols[f]] * den).get_num();
    }

    MultiplicitySolution out;
    auto record = [&](const std::vector<mpz_class>& x) {
        // replay against the original equations
        for (size_t i = 0; i < nr; ++i) {
            mpz_class s = 0;
            for (size_t j = 0; j < u; ++j) s += sys.rows[i][j] * x[j];
            if (s != sys.rhs[i]) return;
        }
        std::vector<long> v(u);
        for (size_t j = 0; j < u; ++j) v[j] = static_cast<long>(x[j].get_si());
        out.witnesses.push_back(std::move(v));
    };

    if (free_cols.empty()) {
        std::vector<mpz_class> x(u, 0);
        bool ok = true;
        for (size_t i = 0; i < rank && ok; ++i) {
            if (rels[i].C % rels[i].D != 0) ok = false;
            else {
                x[rels[i].pcol] = rels[i].C / rels[i].D;
                if (x[rels[i].pcol] < lb(rels[i].pcol) || x[rels[i].pcol] > hi) ok = false;
            }
        }
        if (ok) record(x);
    } else {
        // interval propagation over the free variables
        std::vector<mpz_class> lo_f(free_cols.size()), hi_f(free_cols.size());
        for (size_t f = 0; f < free_cols.size(); ++f) {
            lo_f[f] = lb(free_cols[f]);
            hi_f[f] = hi;
        }
        for (int pass = 0; pass < 100; ++pass) {
            bool changed = false;
            for (const auto& rel : rels) {
                // D*lb_p <= C - sum fcoef*x_f <= D*hi_p
                mpz_class blo = rel.D * lb(rel.pcol), bhi = rel.D * hi;
                for (size_t f = 0; f < free_cols.size(); ++f) {
                    if (rel.fcoef[f] == 0) continue;
                    // rest interval of C - sum_{f' != f} coef*x
                    mpz_class rlo = rel.C, rhi = rel.C;
                    for (size_t f2 = 0; f2 < free_cols.size(); ++f2) {
                        if (f2 == f) continue;
                        const mpz_class& c = rel.fcoef[f2];
                        if (c > 0) { rlo -= c * hi_f[f2]; rhi -= c * lo_f[f2]; }
                        else if (c < 0) { rlo -= c * lo_f[f2]; rhi -= c * hi_f[f2]; }
                    }
                    // blo <= rest - coef*x <= bhi  =>  rest-bhi <= coef*x <= rest-blo
                    mpz_class nlo = rlo - bhi, nhi = rhi - blo, q;
                    const mpz_class& c = rel.fcoef[f];
                    if (c > 0) {
                        mpz_cdiv_q(q.get_mpz_t(), nlo.get_mpz_t(), c.get_mpz_t());
                        if (q > lo_f[f]) { lo_f[f] = q; changed = true; }
                        mpz_fdiv_q(q.get_mpz_t(), nhi.get_mpz_t(), c.get_mpz_t());
                        if (q < hi_f[f]) { hi_f[f] = q; changed = true; }
                    } else {
                        mpz_cdiv_q(q.get_mpz_t(), nhi.get_mpz_t(), c.get_mpz_t());
                        if (q > lo_f[f]) { lo_f[f] = q; changed = true; }
                        mpz_fdiv_q(q.get_mpz_t(), nlo.get_mpz_t(), c.get_mpz_t());
                        if (q < hi_f[f]) { hi_f[f] = q; changed = true; }
                    }
                }
            }
            if (!changed) break;
        }
        for (size_t f = 0; f < free_cols.size(); ++f)
            if (lo_f[f] > hi_f[f]) throw InfeasibleError("solve_multiplicities: empty box after propagation");

        unsigned long budget = enum_budget;
        std::vector<mpz_class> xfree(free_cols.size());
        // recurse over outer free vars; the innermost is driven by congruences
        auto enumerate = [&](auto&& self, size_t level) -> void {
            if (out.witnesses.size() >= witness_cap) return;
            if (level + 1 == free_cols.size()) {
                detail::Progression prog;  // x ≡ 0 (mod 1)
                for (const auto& rel : rels) {
                    mpz_class r = rel.C;
                    for (size_t f = 0; f + 1 < free_cols.size(); ++f) r -= rel.fcoef[f] * xfree[f];
                    prog = detail::intersect(prog, rel.fcoef[level], r, rel.D);
                    if (prog.empty) return;
                }
                // first progression member >= lo
                mpz_class steps, d = lo_f[level] - prog.r;
                mpz_cdiv_q(steps.get_mpz_t(), d.get_mpz_t(), prog.m.get_mpz_t());
                mpz_class start = prog.r + steps * prog.m;
                for (mpz_class xv = start; xv <= hi_f[level]; xv += prog.m) {
                    if (budget-- == 0)
                        throw std::runtime_error("solve_multiplicities: enumeration budget exceeded");
                    xfree[level] = xv;
                    std::vector<mpz_class> x(u, 0);
                    for (size_t f = 0; f < free_cols.size(); ++f) x[free_cols[f]] = xfree[f];
                    bool ok = true;
                    for (const auto& rel : rels) {
                        mpz_class num = rel.C;
                        for (size_t f = 0; f < free_cols.size(); ++f) num -= rel.fcoef[f] * xfree[f];
                        if (num % rel.D != 0) { ok = false; break; }
                        mpz_class v = num / rel.D;
                        if (v < lb(rel.pcol) || v > hi) { ok = false; break; }
                        x[rel.pcol] = v;
                    }
                    if (ok) {
                        // free vars must respect their own bounds too
                        for (size_t f = 0; f < free_cols.size() && ok; ++f)
                            if (xfree[f] < lb(free_cols[f]) || xfree[f] > hi) ok = false;
                        if (ok) record(x);
                        if (out.witnesses.size() >= witness_cap) return;
                    }
                }
                return;
            }
            for (mpz_class xv = lo_f[level]; xv <= hi_f[level]; ++xv) {
                if (budget-- == 0)
                    throw std::runtime_error("solve_multiplicities: enumeration budget exceeded");
                xfree[level] = xv;
                self(self, level + 1);
                if (out.witnesses.size() >= witness_cap) return;
            }
        };
        enumerate(enumerate, 0);
    }

    if (out.witnesses.empty())
        throw InfeasibleError("solve_multiplicities: no integer solution in the box");
    if (out.witnesses.size() == 1) {
        out.unique = true;
        out.values = out.witnesses[0];
    }
    return out;
}

} // namespace qwalk
