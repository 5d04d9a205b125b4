#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lacex {

// Edge {s, t} with s < t on an integer interval.
struct Edge {
    int s = 0;
    int t = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A graph on the interval [a, b]: any set of edges.
struct IntervalGraph {
    int a = 0;
    int b = 0;
    std::vector<Edge> edges;  // kept sorted, duplicate-free

    void add(int s, int t) {
        if (s > t) std::swap(s, t);
        if (s == t) throw std::invalid_argument("self-edge");
        if (s < a || t > b) throw std::invalid_argument("edge outside interval");
        Edge e{s, t};
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || !(*it == e)) edges.insert(it, e);
    }
};

// Connected in the interval sense: the closed intervals [s,t] of the edges
// cover [a,b].
inline bool is_connected(const IntervalGraph& g) {
    if (g.a == g.b) return true;
    int cover = g.a;
    bool started = false;
    for (const Edge& e : g.edges) {  // sorted by s
        if (e.s > cover) return false;
        if (e.s == g.a) started = true;
        cover = std::max(cover, e.t);
        if (cover >= g.b) return started;
    }
    return false;
}

// A lace: minimally connected graph, edges in prescription order.
struct Lace {
    int a = 0;
    int b = 0;
    std::vector<Edge> edges;  // s_1 t_1, ..., s_N t_N in extraction order
    int size() const { return static_cast<int>(edges.size()); }
    friend bool operator==(const Lace&, const Lace&) = default;
};

// The unique lace associated to a connected graph:
//   s_1 = a, t_1 = max{t : at in G},
//   t_i = max{t : exists st in G with s <= t_{i-1}}, s_i = min{s : s t_i in G},
// stopping once t_N = b.
inline Lace lace_of(const IntervalGraph& g) {
    if (!is_connected(g)) throw std::invalid_argument("lace_of: disconnected graph");
    Lace l;
    l.a = g.a;
    l.b = g.b;
    if (g.a == g.b) return l;
    int t1 = g.a;
    for (const Edge& e : g.edges)
        if (e.s == g.a) t1 = std::max(t1, e.t);
    l.edges.push_back({g.a, t1});
    while (l.edges.back().t < g.b) {
        int tprev = l.edges.back().t;
        int tn = tprev;
        for (const Edge& e : g.edges)
            if (e.s <= tprev) tn = std::max(tn, e.t);
        int sn = tn;
        for (const Edge& e : g.edges)
            if (e.t == tn) sn = std::min(sn, e.s);
        l.edges.push_back({sn, tn});
    }
    return l;
}

inline IntervalGraph to_graph(const Lace& l) {
    IntervalGraph g{l.a, l.b, {}};
    for (const Edge& e : l.edges) g.add(e.s, e.t);
    return g;
}

// Edges st not in L whose addition leaves the extracted lace unchanged.
inline std::vector<Edge> compatible_edges(const Lace& l) {
    std::vector<Edge> out;
    IntervalGraph base = to_graph(l);
    for (int s = l.a; s < l.b; ++s) {
        for (int t = s + 1; t <= l.b; ++t) {
            Edge e{s, t};
            if (std::binary_search(base.edges.begin(), base.edges.end(), e)) continue;
            IntervalGraph g = base;
            g.add(s, t);
            if (lace_of(g) == l) out.push_back(e);
        }
    }
    return out;
}

// Exhaustive list of laces on [a,b] with exactly N edges.  A lace is a
// sequence a = s_1 < ... < s_N, t_1 < ... < t_N = b with s_{i+1} <= t_i
// (coverage) and t_i < s_{i+2} (minimality), plus s_1 < t_1.
inline std::vector<Lace> enumerate_laces(int a, int b, int N) {
    std::vector<Lace> out;
    if (N < 1 || b <= a) return out;
    if (N == 1) {
        out.push_back(Lace{a, b, {{a, b}}});
        return out;
    }
    std::vector<Edge> cur(static_cast<std::size_t>(N));
    cur[0].s = a;
    cur[static_cast<std::size_t>(N) - 1].t = b;
    // choose t_1 .. t_{N-1} and s_2 .. s_N subject to the constraints
    auto rec = [&](auto&& self, int i) -> void {
        // i indexes the edge whose (t_i, s_{i+1}) pair we choose next, 1-based
        if (i == N) {
            out.push_back(Lace{a, b, cur});
            return;
        }
        int tlow = (i == 1) ? a + 1 : cur[static_cast<std::size_t>(i) - 2].t + 1;
        tlow = std::max(tlow, cur[static_cast<std::size_t>(i) - 1].s + 1);
        int thigh = b - (N - i);  // leave room for strictly increasing t's
        for (int t = tlow; t <= thigh; ++t) {
            cur[static_cast<std::size_t>(i) - 1].t = t;
            int slow = std::max(cur[static_cast<std::size_t>(i) - 1].s + 1,
                                (i >= 2) ? cur[static_cast<std::size_t>(i) - 2].t + 1 : a);
            for (int s = slow; s <= t; ++s) {
                cur[static_cast<std::size_t>(i)].s = s;
                self(self, i + 1);
            }
        }
    };
    rec(rec, 1);
    return out;
}

// Pair-interaction values U_{st} in [-1, 0] on an interval.  T is Rat for
// exact work or double for numeric work.
template <typename T>
class UMatrix {
  public:
    UMatrix(int a, int b) : a_(a), b_(b), m_(b - a + 1) {
        if (b < a) throw std::invalid_argument("UMatrix: bad interval");
        vals_.assign(static_cast<std::size_t>(m_) * m_, T(0));
    }

    int a() const { return a_; }
    int b() const { return b_; }

    T& operator()(int s, int t) {
        check(s, t);
        return vals_[static_cast<std::size_t>(s - a_) * m_ + (t - a_)];
    }
    const T& operator()(int s, int t) const {
        check(s, t);
        return vals_[static_cast<std::size_t>(s - a_) * m_ + (t - a_)];
    }

  private:
    void check(int s, int t) const {
        if (!(a_ <= s && s < t && t <= b_)) throw std::out_of_range("UMatrix index");
    }
    int a_, b_, m_;
    std::vector<T> vals_;
};

// K[a,b] = prod_{a <= s < t <= b} (1 + U_st).
template <typename T>
T evaluate_K(const UMatrix<T>& u, int a, int b) {
    if (a < u.a() || b > u.b() || a > b) throw std::invalid_argument("evaluate_K: bad subinterval");
    T prod(1);
    for (int s = a; s < b; ++s)
        for (int t = s + 1; t <= b; ++t) prod *= T(1) + u(s, t);
    return prod;
}

// J[a,b] = sum over laces L of prod_{st in L} U_st *
//          prod_{s't' compatible with L} (1 + U_{s't'}).
// N = 0 sums over all lace sizes; otherwise only laces with exactly N edges.
template <typename T>
T evaluate_J(const UMatrix<T>& u, int a, int b, int N = 0) {
    if (a >= b) throw std::invalid_argument("evaluate_J: need a < b");
    T total(0);
    int nlo = N ? N : 1;
    int nhi = N ? N : (b - a);  // a lace on [a,b] has at most b-a edges
    for (int n = nlo; n <= nhi; ++n) {
        for (const Lace& l : enumerate_laces(a, b, n)) {
            T term(1);
            for (const Edge& e : l.edges) term *= u(e.s, e.t);
            if (term == T(0)) continue;
            for (const Edge& e : compatible_edges(l)) term *= T(1) + u(e.s, e.t);
            total += term;
        }
    }
    return total;
}

template <typename T>
struct JKReport {
    bool ok = false;
    T lhs{};
    T rhs{};
};

// The resummation identity K[0,b] = K[1,b] + J[0,b] + sum_a J[0,a] K[a+1,b].
template <typename T>
JKReport<T> verify_JK(const UMatrix<T>& u, int b, double tol = 1e-12) {
    if (u.a() != 0 || b < 1 || b > u.b()) throw std::invalid_argument("verify_JK: bad interval");
    JKReport<T> rep;
    rep.lhs = evaluate_K(u, 0, b);
    rep.rhs = evaluate_K(u, 1, b) + evaluate_J(u, 0, b);
    for (int a = 1; a <= b - 1; ++a) rep.rhs += evaluate_J(u, 0, a) * evaluate_K(u, a + 1, b);
    if constexpr (std::is_same_v<T, double>) {
        rep.ok = std::abs(rep.lhs - rep.rhs) <= tol;
    } else {
        rep.ok = (rep.lhs == rep.rhs);
    }
    return rep;
}

// Brute-force graph expansion of K over all 2^pairs subgraphs; oracle for
// intervals of length <= 5.
template <typename T>
T brute_force_K(const UMatrix<T>& u, int a, int b, bool connected_only = false) {
    std::vector<Edge> pairs;
    for (int s = a; s < b; ++s)
        for (int t = s + 1; t <= b; ++t) pairs.push_back({s, t});
    if (pairs.size() > 20) throw std::invalid_argument("brute_force_K: interval too long");
    T total(0);
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
        if (connected_only) {
            IntervalGraph g{a, b, {}};
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (mask >> i & 1u) g.add(pairs[i].s, pairs[i].t);
            if (!is_connected(g)) continue;
        }
        T term(1);
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (mask >> i & 1u) term *= u(pairs[i].s, pairs[i].t);
        total += term;
    }
    return total;
}

// Precomputed lace data for one interval length, as bitmasks over the pair
// index (s,t) -> s*(2*len+1-s)/2 + (t-s-1).  Used by the series enumerators,
// where J^(N) must be evaluated for hundreds of thousands of walks.
struct LaceTable {
    int len = 0;       // interval [0, len]
    int npairs = 0;    // len*(len+1)/2
    struct Entry {
        int n_edges = 0;
        std::uint64_t edge_mask = 0;
        std::uint64_t compat_mask = 0;
        bool no_abuttal = true;  // s_{i+1} < t_i strictly for all i
    };
    std::vector<Entry> laces;

    static int pair_index(int s, int t, int len) {
        // pairs (s,t), 0 <= s < t <= len, ordered lexicographically
        return s * (2 * len + 1 - s) / 2 + (t - s - 1);
    }

    static const LaceTable& get(int len) {
        static std::map<int, LaceTable> cache;
        static std::mutex m;
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(len);
        if (it != cache.end()) return it->second;
        LaceTable tab;
        tab.len = len;
        tab.npairs = len * (len + 1) / 2;
        if (tab.npairs > 63) throw std::invalid_argument("LaceTable: interval too long");
        for (int n = 1; n <= len; ++n) {
            for (const Lace& l : enumerate_laces(0, len, n)) {
                Entry e;
                e.n_edges = n;
                for (const Edge& ed : l.edges)
                    e.edge_mask |= 1ull << pair_index(ed.s, ed.t, len);
                for (const Edge& ed : compatible_edges(l))
                    e.compat_mask |= 1ull << pair_index(ed.s, ed.t, len);
                for (std::size_t i = 0; i + 1 < l.edges.size(); ++i)
                    if (l.edges[i + 1].s == l.edges[i].t) e.no_abuttal = false;
                tab.laces.push_back(e);
            }
        }
        return cache.emplace(len, std::move(tab)).first->second;
    }
};

}  // namespace lacex
