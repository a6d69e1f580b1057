#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

// Simple undirected graph in canonical form: 0-indexed vertices,
// neighbor lists sorted strictly ascending, symmetric, no loops.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adjacency;

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
        if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
        Graph g;
        g.n = n;
        g.adjacency.assign(n, {});
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::out_of_range("Graph: edge endpoint out of range");
            if (u == v)
                throw std::invalid_argument("Graph: self-loop");
            g.adjacency[u].push_back(v);
            g.adjacency[v].push_back(u);
        }
        for (auto& nb : g.adjacency) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        return g;
    }

    bool has_edge(int u, int v) const {
        const auto& nb = adjacency[u];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    size_t edge_count() const {
        size_t s = 0;
        for (const auto& nb : adjacency) s += nb.size();
        return s / 2;
    }

    // regular degree, or -1 if not regular
    int regular_degree() const {
        if (n == 0) return -1;
        size_t d = adjacency[0].size();
        for (const auto& nb : adjacency)
            if (nb.size() != d) return -1;
        return static_cast<int>(d);
    }

    bool connected() const {
        if (n == 0) return true;
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int cnt = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adjacency[u])
                if (!seen[v]) { seen[v] = 1; ++cnt; stack.push_back(v); }
        }
        return cnt == n;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n == b.n && a.adjacency == b.adjacency;
    }
};

struct SrgParams {
    int n = 0, k = 0, a = 0, c = 0;
    friend bool operator==(const SrgParams& x, const SrgParams& y) {
        return x.n == y.n && x.k == y.k && x.a == y.a && x.c == y.c;
    }
};

struct NotRegularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CompleteOrEmptyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotStronglyRegularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --------------------------------------------------------------------------
// graph6 (McKay's format): N(n) then the upper triangle in column order,
// 6 bits per byte, each byte offset by 63.

struct Graph6Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Graph parse_graph6(const std::string& text) {
    std::string s = text;
    // strip trailing newline/whitespace and optional header
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
        s.pop_back();
    const std::string header = ">>graph6<<";
    if (s.rfind(header, 0) == 0) s = s.substr(header.size());
    if (s.empty()) throw Graph6Error("graph6: empty input");
    for (unsigned char ch : s)
        if (ch < 63 || ch > 126)
            throw Graph6Error("graph6: non-printable character " + std::to_string(int(ch)));

    size_t pos = 0;
    long long n;
    if (s[pos] != '~') {
        n = s[pos] - 63;
        pos = 1;
    } else {
        if (s.size() >= 2 && s[1] == '~')
            throw Graph6Error("graph6: 8-byte size form not supported (n >= 258048)");
        if (s.size() < 4) throw Graph6Error("graph6: malformed length field");
        n = 0;
        for (size_t i = 1; i <= 3; ++i) n = (n << 6) | (s[i] - 63);
        if (n < 63) throw Graph6Error("graph6: malformed length field (non-canonical size)");
        pos = 4;
    }

    const size_t nbits = static_cast<size_t>(n) * (n - 1) / 2;
    const size_t nbytes = (nbits + 5) / 6;
    if (s.size() - pos != nbytes)
        throw Graph6Error("graph6: body length mismatch (expected " + std::to_string(nbytes) +
                          " bytes, got " + std::to_string(s.size() - pos) + ")");

    std::vector<std::pair<int, int>> edges;
    size_t bit = 0;
    for (int v = 1; v < n; ++v) {
        for (int u = 0; u < v; ++u, ++bit) {
            int byte = s[pos + bit / 6] - 63;
            if ((byte >> (5 - bit % 6)) & 1) edges.emplace_back(u, v);
        }
    }
    // padding bits must be zero
    for (size_t b = nbits; b < nbytes * 6; ++b) {
        int byte = s[pos + b / 6] - 63;
        if ((byte >> (5 - b % 6)) & 1)
            throw Graph6Error("graph6: nonzero trailing bits");
    }
    return Graph::from_edges(static_cast<int>(n), edges);
}

inline std::string emit_graph6(const Graph& g) {
    if (g.n < 1) throw std::invalid_argument("emit_graph6: need n >= 1");
    if (g.n >= 258048) throw std::invalid_argument("emit_graph6: n too large");
    std::string out;
    if (g.n < 63) {
        out.push_back(static_cast<char>(g.n + 63));
    } else {
        out.push_back('~');
        out.push_back(static_cast<char>(((g.n >> 12) & 63) + 63));
        out.push_back(static_cast<char>(((g.n >> 6) & 63) + 63));
        out.push_back(static_cast<char>((g.n & 63) + 63));
    }
    const size_t nbits = static_cast<size_t>(g.n) * (g.n - 1) / 2;
    const size_t nbytes = (nbits + 5) / 6;
    std::vector<int> bytes(nbytes, 0);
    size_t bit = 0;
    for (int v = 1; v < g.n; ++v)
        for (int u = 0; u < v; ++u, ++bit)
            if (g.has_edge(u, v)) bytes[bit / 6] |= 1 << (5 - bit % 6);
    for (int b : bytes) out.push_back(static_cast<char>(b + 63));
    return out;
}

// --------------------------------------------------------------------------

// Strongly-regular check by exhaustive common-neighbor counts.
// First violating pair (lexicographic scan) is reported in the error.
inline SrgParams validate_srg(const Graph& g) {
    const int n = g.n;
    int k = g.regular_degree();
    if (k < 0) {
        // name the witnessing pair: two vertices of different degree
        int u = 0;
        for (int v = 1; v < n; ++v)
            if (g.adjacency[v].size() != g.adjacency[0].size()) { u = v; break; }
        throw NotRegularError("not regular: deg(0)=" + std::to_string(g.adjacency[0].size()) +
                              " deg(" + std::to_string(u) + ")=" + std::to_string(g.adjacency[u].size()));
    }
    if (n == 0 || k == 0 || k == n - 1)
        throw CompleteOrEmptyError("strongly regular graphs are neither complete nor empty");

    auto common = [&](int u, int v) {
        const auto &a = g.adjacency[u], &b = g.adjacency[v];
        size_t i = 0, j = 0;
        int c = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) { ++c; ++i; ++j; }
            else if (a[i] < b[j]) ++i;
            else ++j;
        }
        return c;
    };

    int a = -1, c = -1;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            int cnt = common(u, v);
            if (g.has_edge(u, v)) {
                if (a == -1) a = cnt;
                else if (cnt != a)
                    throw NotStronglyRegularError("adjacent pair (" + std::to_string(u) + "," +
                                                  std::to_string(v) + ") has " + std::to_string(cnt) +
                                                  " common neighbours, expected " + std::to_string(a));
            } else {
                if (c == -1) c = cnt;
                else if (cnt != c)
                    throw NotStronglyRegularError("non-adjacent pair (" + std::to_string(u) + "," +
                                                  std::to_string(v) + ") has " + std::to_string(cnt) +
                                                  " common neighbours, expected " + std::to_string(c));
            }
        }
    }
    // connected SRGs always have a non-adjacent pair unless complete (excluded above);
    // disconnected ones (c == 0) are still well-defined here
    return SrgParams{n, k, a < 0 ? 0 : a, c < 0 ? 0 : c};
}

// --------------------------------------------------------------------------
// Arc indexing: arcs are ordered pairs (u,v), u ~ v, sorted lexicographically.

struct ArcIndex {
    std::vector<std::pair<int, int>> arcs;
    std::vector<int> reversal;       // arc id of (v,u)
    std::vector<int> first_arc;      // first_arc[u]: id of first arc leaving u

    int arc_id(int u, int v) const {
        const auto& a = arcs;
        int lo = first_arc[u], hi = first_arc[u + 1];
        auto it = std::lower_bound(a.begin() + lo, a.begin() + hi, std::make_pair(u, v));
        if (it == a.begin() + hi || *it != std::make_pair(u, v))
            throw std::out_of_range("arc_id: (" + std::to_string(u) + "," + std::to_string(v) + ") is not an arc");
        return static_cast<int>(it - a.begin());
    }
    size_t size() const { return arcs.size(); }
};

inline ArcIndex build_arc_index(const Graph& g) {
    if (g.edge_count() == 0)
        throw std::invalid_argument("build_arc_index: graph has no edges");
    ArcIndex ai;
    ai.first_arc.assign(g.n + 1, 0);
    for (int u = 0; u < g.n; ++u) {
        ai.first_arc[u + 1] = ai.first_arc[u] + static_cast<int>(g.adjacency[u].size());
        for (int v : g.adjacency[u]) ai.arcs.emplace_back(u, v);
    }
    ai.reversal.resize(ai.arcs.size());
    for (size_t i = 0; i < ai.arcs.size(); ++i)
        ai.reversal[i] = ai.arc_id(ai.arcs[i].second, ai.arcs[i].first);
    return ai;
}

// --------------------------------------------------------------------------
// Strong connectivity of a sparse digraph given as rows of ascending column
// ids: forward and reverse traversal from node 0.

inline bool strongly_connected_rows(const std::vector<std::vector<int>>& rows) {
    const size_t n = rows.size();
    if (n == 0) return true;
    std::vector<std::vector<int>> rev(n);
    for (size_t i = 0; i < n; ++i)
        for (int j : rows[i]) rev[j].push_back(static_cast<int>(i));

    auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        size_t cnt = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) { seen[v] = 1; ++cnt; stack.push_back(v); }
        }
        return cnt == n;
    };
    return reaches_all(rows) && reaches_all(rev);
}

} // namespace qwalk
