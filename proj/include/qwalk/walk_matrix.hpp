#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qwalk/graph.hpp"

namespace qwalk {

struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// T = d*U on arc space of a d-regular graph; entries are 2 (move) and
// 2-d (return). Row (w,x) has its nonzeros on the arcs (u,w) into w,
// so each row and each column carries exactly d entries. T*T^t = d^2*I.
struct ScaledTransitionMatrix {
    int dim = 0;
    int degree = 0;
    std::vector<std::vector<int>> cols;      // per row, ascending column ids
    std::vector<std::vector<int64_t>> vals;  // matching values
};

// 0/1 positive support S+(U^k), rows of strictly ascending column ids.
struct SupportMatrix {
    int dim = 0;
    int power = 0;
    std::vector<std::vector<int>> rows;

    size_t nnz() const {
        size_t s = 0;
        for (const auto& r : rows) s += r.size();
        return s;
    }
    bool get(int i, int j) const {
        const auto& r = rows[i];
        return std::binary_search(r.begin(), r.end(), j);
    }
};

inline ScaledTransitionMatrix build_transition(const Graph& g, const ArcIndex& ai) {
    const int d = g.regular_degree();
    if (d < 1) throw NotRegularError("build_transition: graph is not regular");
    ScaledTransitionMatrix T;
    T.dim = static_cast<int>(ai.size());
    T.degree = d;
    T.cols.resize(T.dim);
    T.vals.resize(T.dim);
    for (int r = 0; r < T.dim; ++r) {
        auto [w, x] = ai.arcs[r];
        // arcs (u,w) into w; u ascending gives ascending column ids
        for (int u : g.adjacency[w]) {
            T.cols[r].push_back(ai.arc_id(u, w));
            T.vals[r].push_back(u == x ? 2 - d : 2);
        }
    }
    return T;
}

// S+(U^k) = S+(T^k) for k in {1,2,3}: d > 0 preserves signs. Computed row
// by row; each row of T is pushed through k-1 sparse row-times-matrix
// products over a dense int64 scratch, then thresholded at > 0.
inline SupportMatrix positive_support_power(const ScaledTransitionMatrix& T, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("positive_support_power: k must be 1, 2 or 3");
    const int n = T.dim;
    // accumulator contract: entries stay below dim * max|entry|^k
    const int64_t maxe = std::max<int64_t>(2, std::llabs(2 - int64_t(T.degree)));
    __int128 bound = n;
    for (int i = 0; i < k; ++i) bound *= maxe;
    if (bound > std::numeric_limits<int64_t>::max())
        throw OverflowError("positive_support_power: accumulator bound exceeds int64");

    SupportMatrix S;
    S.dim = n;
    S.power = k;
    S.rows.resize(n);

    std::vector<int64_t> acc(n, 0), acc2(n, 0);
    std::vector<int> touched, touched2;
    touched.reserve(n);
    touched2.reserve(n);
    for (int r = 0; r < n; ++r) {
        touched.clear();
        for (size_t i = 0; i < T.cols[r].size(); ++i) {
            acc[T.cols[r][i]] = T.vals[r][i];
            touched.push_back(T.cols[r][i]);
        }
        for (int step = 1; step < k; ++step) {
            touched2.clear();
            for (int j : touched) {
                const int64_t a = acc[j];
                if (a == 0) continue;
                const auto& jc = T.cols[j];
                const auto& jv = T.vals[j];
                for (size_t t = 0; t < jc.size(); ++t) {
                    if (acc2[jc[t]] == 0) touched2.push_back(jc[t]);
                    acc2[jc[t]] += a * jv[t];
                }
            }
            for (int j : touched) acc[j] = 0;
            std::swap(acc, acc2);
            std::swap(touched, touched2);
        }
        auto& row = S.rows[r];
        for (int j : touched) {
            if (acc[j] > 0) row.push_back(j);
            acc[j] = 0;
        }
        std::sort(row.begin(), row.end());
    }
    return S;
}

namespace detail {

// sparse 0/1 product A*A with int64 values, row-streamed
struct SparseCount {
    std::vector<std::vector<int>> cols;
    std::vector<std::vector<int64_t>> vals;
};

inline SparseCount square_support(const SupportMatrix& S) {
    const int n = S.dim;
    SparseCount R;
    R.cols.resize(n);
    R.vals.resize(n);
    std::vector<int64_t> acc(n, 0);
    std::vector<int> touched;
    for (int i = 0; i < n; ++i) {
        touched.clear();
        for (int j : S.rows[i])
            for (int t : S.rows[j]) {
                if (acc[t] == 0) touched.push_back(t);
                ++acc[t];
            }
        std::sort(touched.begin(), touched.end());
        for (int t : touched) {
            R.cols[i].push_back(t);
            R.vals[i].push_back(acc[t]);
            acc[t] = 0;
        }
    }
    return R;
}

inline int64_t count_at(const SparseCount& M, int i, int j) {
    const auto& c = M.cols[i];
    auto it = std::lower_bound(c.begin(), c.end(), j);
    if (it == c.end() || *it != j) return 0;
    return M.vals[i][it - c.begin()];
}

} // namespace detail

// Exact tr(S^e), e in 1..4. e=3,4 go through S^2 without materializing
// S^3 or S^4; per-row partial sums fit __int128 (dim < 2^31, 0/1 entries),
// the total is returned as an exact integer.
inline mpz_class trace_support_power(const SupportMatrix& S, int e) {
    if (e < 1 || e > 4) throw std::invalid_argument("trace_support_power: e must be in 1..4");
    const int n = S.dim;
    if (e == 1) {
        int64_t t = 0;
        for (int i = 0; i < n; ++i)
            if (S.get(i, i)) ++t;
        return mpz_class(static_cast<long>(t));
    }
    if (e == 2) {
        // sum_{i,j} S[i,j] * S[j,i]
        int64_t t = 0;
        for (int i = 0; i < n; ++i)
            for (int j : S.rows[i])
                if (S.get(j, i)) ++t;
        return mpz_class(static_cast<long>(t));
    }
    auto S2 = detail::square_support(S);
    mpz_class total = 0;
    for (int i = 0; i < n; ++i) {
        __int128 part = 0;
        const auto& c = S2.cols[i];
        const auto& v = S2.vals[i];
        if (e == 3) {
            for (size_t t = 0; t < c.size(); ++t)
                if (S.get(c[t], i)) part += v[t];
        } else {
            for (size_t t = 0; t < c.size(); ++t)
                part += static_cast<__int128>(v[t]) * detail::count_at(S2, c[t], i);
        }
        mpz_class hi(static_cast<long>(part >> 62));
        mpz_class lo(static_cast<long>(part & ((int64_t(1) << 62) - 1)));
        total += (hi << 62) + lo;
    }
    return total;
}

// black box for the field solvers: S*v mod p
inline std::vector<uint64_t> blackbox_apply(const SupportMatrix& S, const std::vector<uint64_t>& v,
                                            uint64_t p) {
    if (v.size() != static_cast<size_t>(S.dim))
        throw std::invalid_argument("blackbox_apply: dimension mismatch");
    std::vector<uint64_t> out(S.dim);
    for (int i = 0; i < S.dim; ++i) {
        uint64_t acc = 0;  // at most dim terms < 2^31 each: no overflow for dim < 2^33
        for (int j : S.rows[i]) acc += v[j];
        out[i] = acc % p;
    }
    return out;
}

inline bool is_strongly_connected(const SupportMatrix& S) {
    return strongly_connected_rows(S.rows);
}

// "spm <dim> <nnz> <k>" header, then one line of ascending column ids per row
inline std::string emit_support_matrix(const SupportMatrix& S) {
    std::ostringstream out;
    out << "spm " << S.dim << " " << S.nnz() << " " << S.power << "\n";
    for (const auto& r : S.rows) {
        for (size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
        out << "\n";
    }
    return out.str();
}

inline SupportMatrix parse_support_matrix(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    SupportMatrix S;
    size_t nnz = 0;
    if (!(in >> magic) || magic != "spm" || !(in >> S.dim >> nnz >> S.power))
        throw std::runtime_error("support matrix: bad header");
    std::string rest;
    std::getline(in, rest);
    S.rows.resize(S.dim);
    for (int i = 0; i < S.dim; ++i) {
        std::string ln;
        if (!std::getline(in, ln)) throw std::runtime_error("support matrix: truncated");
        std::istringstream ls(ln);
        int j;
        while (ls >> j) {
            if (j < 0 || j >= S.dim) throw std::runtime_error("support matrix: column out of range");
            S.rows[i].push_back(j);
        }
        if (!std::is_sorted(S.rows[i].begin(), S.rows[i].end()))
            throw std::runtime_error("support matrix: row not sorted");
    }
    if (S.nnz() != nnz) throw std::runtime_error("support matrix: nnz mismatch");
    return S;
}

} // namespace qwalk
