#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/smallfield.hpp"

namespace qwalk {

// Point-line incidence structure in canonical form: points within a line
// sorted ascending, lines sorted lexicographically, no duplicates.
struct IncidenceStructure {
    int num_points = 0;
    std::vector<std::vector<int>> lines;

    void canonicalize() {
        for (auto& L : lines) std::sort(L.begin(), L.end());
        std::sort(lines.begin(), lines.end());
    }

    friend bool operator==(const IncidenceStructure& a, const IncidenceStructure& b) {
        return a.num_points == b.num_points && a.lines == b.lines;
    }
};

// Convention: every line contains s+1 points, every point lies on t+1 lines.
struct GqOrder {
    int s = 0, t = 0;
    friend bool operator==(GqOrder a, GqOrder b) { return a.s == b.s && a.t == b.t; }
};

struct IncidenceParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonUniformLinesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonUniformPointsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GqAxiomViolated : std::runtime_error {
    int point, line, count;
    GqAxiomViolated(int p, int l, int c)
        : std::runtime_error("GQ axiom violated: point " + std::to_string(p) + ", line " +
                             std::to_string(l) + ": " + std::to_string(c) +
                             " collinear points (expected 1)"),
          point(p), line(l), count(c) {}
};
struct NotPartialLinearError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text format: "p <num_points>" then one line of space-separated point
// indices per geometric line.
inline IncidenceStructure parse_incidence(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    IncidenceStructure inc;
    if (!(in >> tok) || tok != "p" || !(in >> inc.num_points) || inc.num_points < 0)
        throw IncidenceParseError("incidence: expected header \"p <num_points>\"");
    std::string rest;
    std::getline(in, rest);
    std::string ln;
    while (std::getline(in, ln)) {
        std::istringstream ls(ln);
        std::vector<int> pts;
        int v;
        while (ls >> v) {
            if (v < 0 || v >= inc.num_points)
                throw IncidenceParseError("incidence: point index " + std::to_string(v) + " out of range");
            pts.push_back(v);
        }
        if (!ls.eof())
            throw IncidenceParseError("incidence: non-integer token in line");
        if (pts.empty()) continue;
        std::sort(pts.begin(), pts.end());
        if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
            throw IncidenceParseError("incidence: duplicate point in line");
        inc.lines.push_back(std::move(pts));
    }
    inc.canonicalize();
    if (std::adjacent_find(inc.lines.begin(), inc.lines.end()) != inc.lines.end())
        throw IncidenceParseError("incidence: duplicate line");
    return inc;
}

inline std::string emit_incidence(const IncidenceStructure& inc) {
    std::ostringstream out;
    out << "p " << inc.num_points << "\n";
    for (const auto& L : inc.lines) {
        for (size_t i = 0; i < L.size(); ++i) out << (i ? " " : "") << L[i];
        out << "\n";
    }
    return out.str();
}

// Verifies the generalized-quadrangle axioms and returns the order:
// uniform line size s+1, uniform point degree t+1, partial linear space,
// and for every non-incident (P, L) exactly one point of L collinear with P.
inline GqOrder check_gq(const IncidenceStructure& inc) {
    const int np = inc.num_points;
    if (inc.lines.empty() || np == 0)
        throw NonUniformLinesError("check_gq: empty structure");

    const size_t lsize = inc.lines[0].size();
    for (size_t li = 0; li < inc.lines.size(); ++li)
        if (inc.lines[li].size() != lsize)
            throw NonUniformLinesError("line " + std::to_string(li) + " has " +
                                       std::to_string(inc.lines[li].size()) + " points, expected " +
                                       std::to_string(lsize));
    std::vector<int> degree(np, 0);
    for (const auto& L : inc.lines)
        for (int p : L) ++degree[p];
    for (int p = 0; p < np; ++p)
        if (degree[p] != degree[0])
            throw NonUniformPointsError("point " + std::to_string(p) + " lies on " +
                                        std::to_string(degree[p]) + " lines, expected " +
                                        std::to_string(degree[0]));

    // partial linear space + collinearity sets
    std::vector<std::set<int>> collinear(np);
    std::set<std::pair<int, int>> seen_pairs;
    for (const auto& L : inc.lines) {
        for (size_t i = 0; i < L.size(); ++i)
            for (size_t j = i + 1; j < L.size(); ++j) {
                auto pr = std::make_pair(L[i], L[j]);
                if (!seen_pairs.insert(pr).second)
                    throw NotPartialLinearError("points " + std::to_string(L[i]) + "," +
                                                std::to_string(L[j]) + " lie on two common lines");
            }
        for (int a : L)
            for (int b : L)
                if (a != b) collinear[a].insert(b);
    }

    for (int P = 0; P < np; ++P) {
        for (size_t li = 0; li < inc.lines.size(); ++li) {
            const auto& L = inc.lines[li];
            if (std::binary_search(L.begin(), L.end(), P)) continue;
            int cnt = 0;
            for (int x : L)
                if (collinear[x].count(P)) ++cnt;
            if (cnt != 1) throw GqAxiomViolated(P, static_cast<int>(li), cnt);
        }
    }
    return GqOrder{static_cast<int>(lsize) - 1, degree[0] - 1};
}

// --------------------------------------------------------------------------
// Projective geometry over SmallField: canonical points of PG(3,q) have
// first nonzero coordinate 1, enumerated in lexicographic order.

namespace detail {

using ProjPoint = std::array<int, 4>;

inline ProjPoint proj_canon(const SmallField& F, ProjPoint v) {
    int i = 0;
    while (i < 4 && v[i] == 0) ++i;
    if (i == 4) throw std::logic_error("proj_canon: zero vector");
    int s = F.inv(v[i]);
    for (auto& c : v) c = F.mul(s, c);
    return v;
}

inline std::vector<ProjPoint> proj_points(const SmallField& F) {
    const int q = F.order();
    std::vector<ProjPoint> pts;
    ProjPoint v{};
    for (v[0] = 0; v[0] < q; ++v[0])
        for (v[1] = 0; v[1] < q; ++v[1])
            for (v[2] = 0; v[2] < q; ++v[2])
                for (v[3] = 0; v[3] < q; ++v[3]) {
                    if (v == ProjPoint{0, 0, 0, 0}) continue;
                    int i = 0;
                    while (v[i] == 0) ++i;
                    if (v[i] == 1) pts.push_back(v);
                }
    return pts;
}

// all q+1 canonical points of the projective line through u, v
inline std::vector<ProjPoint> proj_line(const SmallField& F, const ProjPoint& u, const ProjPoint& v) {
    std::vector<ProjPoint> pts;
    for (int lam = 0; lam < F.order(); ++lam) {
        ProjPoint w;
        for (int i = 0; i < 4; ++i) w[i] = F.add(u[i], F.mul(lam, v[i]));
        pts.push_back(proj_canon(F, w));
    }
    pts.push_back(proj_canon(F, v));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace detail

// Symplectic quadrangle W(q): all points of PG(3,q), lines the totally
// isotropic lines of the alternating form x0*y1 - x1*y0 + x2*y3 - x3*y2.
// (q+1)(q^2+1) points and as many lines; order (q,q).
inline IncidenceStructure generate_w(int q, const SmallField& F) {
    if (q != 2 && q != 3 && q != 4 && q != 5)
        throw std::invalid_argument("generate_w: unsupported q=" + std::to_string(q));
    if (F.order() != q) throw std::invalid_argument("generate_w: field order mismatch");

    auto pts = detail::proj_points(F);
    std::map<detail::ProjPoint, int> index;
    for (size_t i = 0; i < pts.size(); ++i) index[pts[i]] = static_cast<int>(i);

    auto form = [&F](const detail::ProjPoint& x, const detail::ProjPoint& y) {
        int t1 = F.sub(F.mul(x[0], y[1]), F.mul(x[1], y[0]));
        int t2 = F.sub(F.mul(x[2], y[3]), F.mul(x[3], y[2]));
        return F.add(t1, t2);
    };

    std::set<std::vector<int>> lines;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            if (form(pts[i], pts[j]) != 0) continue;
            // the form vanishes on the whole span, so the line is totally isotropic
            std::vector<int> L;
            for (const auto& p : detail::proj_line(F, pts[i], pts[j])) L.push_back(index.at(p));
            std::sort(L.begin(), L.end());
            lines.insert(std::move(L));
        }
    }
    IncidenceStructure inc;
    inc.num_points = static_cast<int>(pts.size());
    inc.lines.assign(lines.begin(), lines.end());
    inc.canonicalize();
    return inc;
}

inline IncidenceStructure generate_w(int q) { return generate_w(q, SmallField::make(q)); }

// Hermitian quadrangle H(3,q^2): points of the Hermitian surface
// x0^(q+1) + x1^(q+1) + x2^(q+1) + x3^(q+1) = 0 in PG(3,q^2), lines the
// projective lines fully contained in it. Order (q^2, q).
inline IncidenceStructure generate_h3(int q, const SmallField& F) {
    if (q != 2 && q != 3)
        throw std::invalid_argument("generate_h3: unsupported q=" + std::to_string(q));
    if (F.order() != q * q) throw std::invalid_argument("generate_h3: field order mismatch (need GF(q^2))");

    auto all_pts = detail::proj_points(F);
    auto on_variety = [&](const detail::ProjPoint& x) {
        int s = 0;
        for (int c : x) s = F.add(s, F.mul(c, F.frobenius(c)));  // c^(q+1) = c * c^q
        return s == 0;
    };
    std::vector<detail::ProjPoint> pts;
    for (const auto& p : all_pts)
        if (on_variety(p)) pts.push_back(p);

    std::map<detail::ProjPoint, int> index;
    for (size_t i = 0; i < pts.size(); ++i) index[pts[i]] = static_cast<int>(i);

    // brute force: extend point pairs, keep lines lying on the variety
    std::set<std::vector<int>> lines;
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            auto lp = detail::proj_line(F, pts[i], pts[j]);
            std::vector<int> L;
            bool inside = true;
            for (const auto& p : lp) {
                auto it = index.find(p);
                if (it == index.end()) { inside = false; break; }
                L.push_back(it->second);
            }
            if (!inside) continue;
            std::sort(L.begin(), L.end());
            lines.insert(std::move(L));
        }
    }
    IncidenceStructure inc;
    inc.num_points = static_cast<int>(pts.size());
    inc.lines.assign(lines.begin(), lines.end());
    inc.canonicalize();
    return inc;
}

inline IncidenceStructure generate_h3(int q) { return generate_h3(q, SmallField::make(q * q)); }

// Lines become vertices; two lines adjacent iff they share a point.
inline Graph line_intersection_graph(const IncidenceStructure& inc) {
    const int n = static_cast<int>(inc.lines.size());
    std::vector<std::vector<int>> on_line(inc.num_points);
    for (int li = 0; li < n; ++li)
        for (int p : inc.lines[li]) on_line[p].push_back(li);
    std::set<std::pair<int, int>> edges;
    for (const auto& ls : on_line)
        for (size_t i = 0; i < ls.size(); ++i)
            for (size_t j = i + 1; j < ls.size(); ++j)
                edges.emplace(ls[i], ls[j]);
    return Graph::from_edges(n, {edges.begin(), edges.end()});
}

// Dual geometry: points become lines and vice versa.
inline IncidenceStructure dual_structure(const IncidenceStructure& inc) {
    IncidenceStructure d;
    d.num_points = static_cast<int>(inc.lines.size());
    d.lines.assign(inc.num_points, {});
    for (int li = 0; li < d.num_points; ++li)
        for (int p : inc.lines[li]) d.lines[p].push_back(li);
    d.canonicalize();
    return d;
}

} // namespace qwalk
