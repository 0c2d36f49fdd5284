// graph.hpp — compact metric graphs with standard/Dirichlet vertex conditions.
//
// A MetricGraph is a connected multigraph (parallel edges and self-loops
// allowed) whose edges carry positive lengths. Edge ends are addressed as
// half-edges (edge index, end 0|1); end 0 sits at x = 0 of the edge's fixed
// parametrization, end 1 at x = length. Dirichlet vertices must have degree 1.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BC { standard, dirichlet };

struct Vertex {
    std::string id;
    BC bc = BC::standard;
};

struct Edge {
    std::string id;
    int from = -1;      // vertex index at x = 0
    int to = -1;        // vertex index at x = length
    double length = 0;
};

struct HalfEdge {
    int edge = -1;
    int end = 0;        // 0: x = 0, 1: x = length
};

// A point of the graph: position x in [0, length] on a given edge.
struct PointOnGraph {
    int edge = -1;
    double position = 0;
};

class MetricGraph {
public:
    MetricGraph() = default;

    MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
        : vertices_(std::move(vertices)), edges_(std::move(edges)) {
        build_incidence();
        validate();
    }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Vertex& vertex(int v) const { return vertices_.at(v); }
    const Edge& edge(int e) const { return edges_.at(e); }

    const std::vector<HalfEdge>& incidence(int v) const { return incidence_.at(v); }
    int degree(int v) const { return static_cast<int>(incidence_.at(v).size()); }

    // A degree-2 standard vertex is invisible to the Laplacian and flagged
    // artificial; inputs may contain them.
    bool is_artificial(int v) const {
        return vertices_[v].bc == BC::standard && degree(v) == 2;
    }

    int vertex_index(const std::string& id) const {
        for (int v = 0; v < vertex_count(); ++v)
            if (vertices_[v].id == id) return v;
        throw GraphError("unknown vertex id: " + id);
    }
    int edge_index(const std::string& id) const {
        for (int e = 0; e < edge_count(); ++e)
            if (edges_[e].id == id) return e;
        throw GraphError("unknown edge id: " + id);
    }

    // Vertex index at a given end of an edge.
    int endpoint(int e, int end) const { return end == 0 ? edges_[e].from : edges_[e].to; }

    double total_length() const {
        double L = 0;
        for (const auto& e : edges_) L += e.length;
        return L;
    }

    bool has_dirichlet() const {
        for (const auto& v : vertices_)
            if (v.bc == BC::dirichlet) return true;
        return false;
    }
    std::vector<int> dirichlet_vertices() const {
        std::vector<int> out;
        for (int v = 0; v < vertex_count(); ++v)
            if (vertices_[v].bc == BC::dirichlet) out.push_back(v);
        return out;
    }

    // Point at a vertex (position 0 or length on some incident edge).
    PointOnGraph vertex_point(int v) const {
        const HalfEdge h = incidence_.at(v).front();
        return {h.edge, h.end == 0 ? 0.0 : edges_[h.edge].length};
    }

    // Vertex at a point if the point sits at an edge end (within tol), else -1.
    int vertex_at(const PointOnGraph& p, double tol = 0.0) const {
        const Edge& e = edges_.at(p.edge);
        if (p.position <= tol) return e.from;
        if (p.position >= e.length - tol) return e.to;
        return -1;
    }

    std::string unique_vertex_id(const std::string& base) const {
        return unique_id(base, [this](const std::string& s) {
            for (const auto& v : vertices_) if (v.id == s) return true;
            return false;
        });
    }
    std::string unique_edge_id(const std::string& base) const {
        return unique_id(base, [this](const std::string& s) {
            for (const auto& e : edges_) if (e.id == s) return true;
            return false;
        });
    }

private:
    template <class Taken>
    static std::string unique_id(const std::string& base, Taken taken) {
        if (!taken(base)) return base;
        for (int k = 2;; ++k) {
            std::string cand = base + "#" + std::to_string(k);
            if (!taken(cand)) return cand;
        }
    }

    void build_incidence() {
        incidence_.assign(vertices_.size(), {});
        for (int e = 0; e < edge_count(); ++e) {
            const Edge& ed = edges_[e];
            if (ed.from < 0 || ed.from >= vertex_count() || ed.to < 0 || ed.to >= vertex_count())
                throw GraphError("edge '" + ed.id + "' references a missing vertex");
            incidence_[ed.from].push_back({e, 0});
            incidence_[ed.to].push_back({e, 1});
        }
    }

    void validate() const {
        if (vertices_.empty()) throw GraphError("graph has no vertices");
        std::set<std::string> vids, eids;
        for (const auto& v : vertices_)
            if (!vids.insert(v.id).second) throw GraphError("duplicate vertex id: " + v.id);
        for (const auto& e : edges_) {
            if (!eids.insert(e.id).second) throw GraphError("duplicate edge id: " + e.id);
            if (!(e.length > 0) || !std::isfinite(e.length))
                throw GraphError("edge '" + e.id + "' must have positive finite length");
        }
        for (int v = 0; v < vertex_count(); ++v)
            if (vertices_[v].bc == BC::dirichlet && degree(v) != 1)
                throw GraphError("Dirichlet vertex '" + vertices_[v].id + "' must have degree 1, has " +
                                 std::to_string(degree(v)));
        // connectivity over half-edges
        std::vector<char> seen(vertices_.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const HalfEdge& h : incidence_[v]) {
                int w = endpoint(h.edge, 1 - h.end);
                if (!seen[w]) { seen[w] = 1; q.push(w); }
            }
        }
        for (int v = 0; v < vertex_count(); ++v)
            if (!seen[v]) throw GraphError("graph is disconnected (vertex '" + vertices_[v].id + "' unreachable)");
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<HalfEdge>> incidence_;
};

inline void check_point(const MetricGraph& g, const PointOnGraph& p) {
    if (p.edge < 0 || p.edge >= g.edge_count())
        throw GraphError("point references a missing edge");
    if (p.position < 0 || p.position > g.edge(p.edge).length)
        throw GraphError("point position outside its edge");
}

// ---------------------------------------------------------------------------
// surgery

// Split an edge at a strictly interior point; the new vertex is standard
// (degree 2, artificial). Total length is preserved; the first half keeps the
// original edge slot so other edge indices stay stable.
inline MetricGraph insert_artificial_vertex(const MetricGraph& g, const PointOnGraph& p) {
    check_point(g, p);
    const Edge& e = g.edge(p.edge);
    if (!(p.position > 0) || !(p.position < e.length))
        throw GraphError("split point must be strictly interior to the edge");
    std::vector<Vertex> vs = g.vertices();
    std::vector<Edge> es = g.edges();
    const int nv = static_cast<int>(vs.size());
    vs.push_back({g.unique_vertex_id(e.id + ".cut"), BC::standard});
    const double rest = e.length - p.position;
    es[p.edge] = {g.unique_edge_id(e.id + ".a"), e.from, nv, p.position};
    es.push_back({g.unique_edge_id(e.id + ".b"), nv, e.to, rest});
    return MetricGraph(std::move(vs), std::move(es));
}

// Chain map produced by suppress_artificial: for every surviving edge, the
// ordered original edges it covers (forward = traversed from->to).
struct SuppressMap {
    struct Piece {
        int orig_edge;
        bool forward;
    };
    std::vector<std::vector<Piece>> chains;  // per new edge
    std::vector<int> vertex_map;             // orig vertex -> new index, -1 if removed
};

// Merge every degree-2 standard vertex whose two half-edges belong to distinct
// edges. Idempotent. A lone circle vertex (self-loop of a degree-2 vertex)
// cannot be removed and is kept.
inline MetricGraph suppress_artificial(const MetricGraph& g, SuppressMap* map = nullptr) {
    const int V = g.vertex_count(), E = g.edge_count();
    std::vector<char> drop(V, 0);
    for (int v = 0; v < V; ++v) {
        if (!g.is_artificial(v)) continue;
        const auto& inc = g.incidence(v);
        if (inc[0].edge == inc[1].edge) continue;  // circle component
        drop[v] = 1;
    }
    if (std::all_of(drop.begin(), drop.end(), [](char c) { return c != 0; }))
        drop[0] = 0;  // pure circle: one vertex must remain
    std::vector<Vertex> vs;
    std::vector<int> vmap(V, -1);
    for (int v = 0; v < V; ++v)
        if (!drop[v]) {
            vmap[v] = static_cast<int>(vs.size());
            vs.push_back(g.vertex(v));
        }

    std::vector<Edge> es;
    std::vector<std::vector<SuppressMap::Piece>> chains;
    std::vector<char> used(E, 0);
    // Walk chains starting from surviving-vertex half-edges.
    for (int v = 0; v < V; ++v) {
        if (drop[v]) continue;
        for (const HalfEdge& h0 : g.incidence(v)) {
            if (used[h0.edge]) continue;
            std::vector<SuppressMap::Piece> chain;
            double len = 0;
            HalfEdge h = h0;
            int tail;
            for (;;) {
                used[h.edge] = 1;
                chain.push_back({h.edge, h.end == 0});
                len += g.edge(h.edge).length;
                tail = g.endpoint(h.edge, 1 - h.end);
                if (!drop[tail]) break;
                const auto& inc = g.incidence(tail);
                HalfEdge next = (inc[0].edge == h.edge && inc[0].end == 1 - h.end) ? inc[1] : inc[0];
                h = next;
            }
            const Edge& first = g.edge(chain.front().orig_edge);
            es.push_back({first.id, vmap[v], vmap[tail], len});
            chains.push_back(std::move(chain));
        }
    }
    // Chains entirely inside dropped vertices cannot exist in a connected
    // graph with at least one surviving vertex, except pure circles which
    // were excluded from dropping above.
    // Deduplicate ids that collide after merging (first edge of each chain
    // keeps its id; distinct chains start at distinct edges, so ids stay
    // unique).
    MetricGraph out(std::move(vs), std::move(es));
    if (map) {
        map->chains = std::move(chains);
        map->vertex_map = std::move(vmap);
    }
    return out;
}

// ---------------------------------------------------------------------------
// metric quantities

// All-pairs vertex distances (shortest path over edge lengths).
inline std::vector<std::vector<double>> vertex_distances(const MetricGraph& g) {
    const int V = g.vertex_count();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(V, std::vector<double>(V, inf));
    for (int v = 0; v < V; ++v) d[v][v] = 0;
    for (const Edge& e : g.edges())
        if (e.from != e.to)
            d[e.from][e.to] = d[e.to][e.from] = std::min(d[e.from][e.to], e.length);
    for (int k = 0; k < V; ++k)
        for (int i = 0; i < V; ++i) {
            if (d[i][k] == inf) continue;
            for (int j = 0; j < V; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
        }
    return d;
}

namespace detail {

inline double point_pair_distance(const MetricGraph& g, const std::vector<std::vector<double>>& D,
                                  const PointOnGraph& p, const PointOnGraph& q) {
    const Edge& ep = g.edge(p.edge);
    const Edge& eq = g.edge(q.edge);
    const double s = p.position, t = q.position;
    if (p.edge == q.edge) {
        const double wrap = std::min(s, t) + D[ep.from][ep.to] + ep.length - std::max(s, t);
        return std::min(std::abs(t - s), wrap);
    }
    const double a = D[ep.from][eq.from] + s + t;
    const double b = D[ep.from][eq.to] + s + (eq.length - t);
    const double c = D[ep.to][eq.from] + (ep.length - s) + t;
    const double d = D[ep.to][eq.to] + (ep.length - s) + (eq.length - t);
    return std::min(std::min(a, b), std::min(c, d));
}

// Exact max over (s,t) in [0,le]x[0,lf] of the two-point distance between
// distinct edges e, f. The distance is the min of four affine functions of
// (s,t), hence concave piecewise-linear; the max sits at a vertex of the
// associated feasible polytope, all of which are enumerated below.
inline double max_distance_pair(const MetricGraph& g, const std::vector<std::vector<double>>& D,
                                int e, int f) {
    const Edge& ee = g.edge(e);
    const Edge& ef = g.edge(f);
    const double le = ee.length, lf = ef.length;
    // coefficients of the four candidates: c + as + bt
    const double C[4] = {D[ee.from][ef.from], D[ee.from][ef.to] + lf,
                         D[ee.to][ef.from] + le, D[ee.to][ef.to] + le + lf};
    const double A[4] = {1, 1, -1, -1};
    const double B[4] = {1, -1, 1, -1};
    auto value = [&](double s, double t) {
        s = std::clamp(s, 0.0, le);
        t = std::clamp(t, 0.0, lf);
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4; ++i) m = std::min(m, C[i] + A[i] * s + B[i] * t);
        return m;
    };
    double best = 0;
    auto consider = [&](double s, double t) { best = std::max(best, value(s, t)); };
    const double scorners[2] = {0, le}, tcorners[2] = {0, lf};
    for (double s : scorners)
        for (double t : tcorners) consider(s, t);
    // pairwise intersections restricted to each box side
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double da = A[i] - A[j], db = B[i] - B[j], dc = C[j] - C[i];
            for (double s : scorners)
                if (db != 0) consider(s, (dc - da * s) / db);
            for (double t : tcorners)
                if (da != 0) consider((dc - db * t) / da, t);
        }
    // triple intersections (interior vertices)
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k) {
                const double a1 = A[i] - A[j], b1 = B[i] - B[j], c1 = C[j] - C[i];
                const double a2 = A[j] - A[k], b2 = B[j] - B[k], c2 = C[k] - C[j];
                const double det = a1 * b2 - a2 * b1;
                if (det == 0) continue;
                consider((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det);
            }
    return best;
}

}  // namespace detail

inline double distance(const MetricGraph& g, const PointOnGraph& p, const PointOnGraph& q) {
    check_point(g, p);
    check_point(g, q);
    return detail::point_pair_distance(g, vertex_distances(g), p, q);
}

inline double dist_to_dirichlet(const MetricGraph& g, const PointOnGraph& p,
                                const std::vector<std::vector<double>>* vdist = nullptr) {
    check_point(g, p);
    if (!g.has_dirichlet()) throw GraphError("graph has no Dirichlet vertex");
    std::vector<std::vector<double>> local;
    if (!vdist) {
        local = vertex_distances(g);
        vdist = &local;
    }
    const Edge& e = g.edge(p.edge);
    double best = std::numeric_limits<double>::infinity();
    for (int v : g.dirichlet_vertices())
        best = std::min(best, std::min(p.position + (*vdist)[e.from][v],
                                       (e.length - p.position) + (*vdist)[e.to][v]));
    return best;
}

struct GraphMetrics {
    double L = 0;
    double ell0 = 0;
    double ellmax = 0;
    int E = 0, V = 0, V_N = 0, V_0 = 0;
    int beta = 0;
    double diameter = 0;
    double girth = 0;   // +infinity when the Dirichlet-identified graph is acyclic
    bool contains_cycle = false;

    bool girth_finite() const { return std::isfinite(girth); }
};

namespace detail {

// Shortest cycle length of the multigraph obtained from g by identifying all
// Dirichlet vertices; +inf if acyclic.
inline double identified_girth(const MetricGraph& g) {
    const int V = g.vertex_count();
    std::vector<int> id(V);
    int n = 0;
    int dir_node = -1;
    for (int v = 0; v < V; ++v) {
        if (g.vertex(v).bc == BC::dirichlet) {
            if (dir_node < 0) dir_node = n++;
            id[v] = dir_node;
        } else {
            id[v] = n++;
        }
    }
    struct IEdge { int u, v; double len; };
    std::vector<IEdge> edges;
    for (const Edge& e : g.edges()) edges.push_back({id[e.from], id[e.to], e.length});
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (edge idx, other endpoint)
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        adj[edges[i].u].push_back({i, edges[i].v});
        adj[edges[i].v].push_back({i, edges[i].u});
    }
    const double inf = std::numeric_limits<double>::infinity();
    double best = inf;
    for (int skip = 0; skip < static_cast<int>(edges.size()); ++skip) {
        const IEdge& e = edges[skip];
        if (e.u == e.v) {
            best = std::min(best, e.len);
            continue;
        }
        // Dijkstra from e.u to e.v avoiding edge `skip`
        std::vector<double> dist(n, inf);
        std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>> pq;
        dist[e.u] = 0;
        pq.push({0, e.u});
        while (!pq.empty()) {
            auto [d0, u] = pq.top();
            pq.pop();
            if (d0 > dist[u]) continue;
            for (auto [ei, w] : adj[u]) {
                if (ei == skip) continue;
                const double nd = d0 + edges[ei].len;
                if (nd < dist[w]) { dist[w] = nd; pq.push({nd, w}); }
            }
        }
        if (dist[e.v] < inf) best = std::min(best, e.len + dist[e.v]);
    }
    return best;
}

}  // namespace detail

inline GraphMetrics metrics(const MetricGraph& g) {
    GraphMetrics m;
    m.E = g.edge_count();
    m.V = g.vertex_count();
    for (const auto& v : g.vertices())
        (v.bc == BC::dirichlet ? m.V_0 : m.V_N)++;
    m.ell0 = std::numeric_limits<double>::infinity();
    for (const Edge& e : g.edges()) {
        m.L += e.length;
        m.ell0 = std::min(m.ell0, e.length);
        m.ellmax = std::max(m.ellmax, e.length);
    }
    m.beta = m.E - m.V + 1;
    m.contains_cycle = m.beta >= 1;
    const auto D = vertex_distances(g);
    double diam = 0;
    for (int e = 0; e < m.E; ++e) {
        // same-edge maximum: all (s,t) pairs on edge e
        const Edge& ee = g.edge(e);
        const double W = D[ee.from][ee.to];
        diam = std::max(diam, W <= ee.length ? (W + ee.length) / 2 : ee.length);
        for (int f = e + 1; f < m.E; ++f)
            diam = std::max(diam, detail::max_distance_pair(g, D, e, f));
    }
    m.diameter = diam;
    m.girth = detail::identified_girth(g);
    return m;
}

}  // namespace qgraph
