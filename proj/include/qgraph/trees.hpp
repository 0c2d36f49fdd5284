// trees.hpp — constructive machinery for metric trees: leaf-pair
// decomposition and its replay, the three-function affine cover, current
// functions (edge-wise |h'| flows), saguaro graphs, and ornamented trees.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/bounds.hpp"
#include "qgraph/eigensolve.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

// ---------------------------------------------------------------------------
// leaf-pair decomposition

// One original edge inside a trimmed leaf chain, ordered from the trim
// vertex toward the leaf. `forward` records the edge's stored orientation
// relative to that walk.
struct ChainPieceRec {
    std::string edge_id;
    double length;
    std::string far_vertex_id;
    BC far_bc;
    bool forward;
};

struct TrimRecord {
    std::string vertex_id;                            // trim vertex (kept)
    std::array<std::vector<ChainPieceRec>, 2> chain;  // metric leaf edges, id order
};

struct LeafPairDecomposition {
    MetricGraph suppressed;          // input after removing artificial vertices
    std::vector<TrimRecord> trims;   // applied in order to `suppressed`
    MetricGraph base;                // what remains: a metric segment
};

// Repeatedly trim a pair of metric leaf edges from the vertex carrying the
// most of them (ties by vertex id, leaves by edge id) until a segment
// remains. Leaf edges are detected on a degree-2-suppressed view: trimming
// can leave degree-2 vertices behind, and those would otherwise hide leaf
// pairs from the vertex-local rule. Trim vertices themselves always survive,
// so the replay never needs to attach inside an edge.
inline LeafPairDecomposition leaf_pair_decomposition(const MetricGraph& tree) {
    if (tree.edge_count() - tree.vertex_count() + 1 != 0)
        throw GraphError("leaf-pair decomposition needs a tree");
    LeafPairDecomposition out;
    out.suppressed = suppress_artificial(tree);
    MetricGraph W = out.suppressed;
    for (;;) {
        SuppressMap map;
        const MetricGraph S = suppress_artificial(W, &map);
        bool is_path = true;
        for (int v = 0; v < S.vertex_count(); ++v)
            if (S.degree(v) > 2) is_path = false;
        if (is_path) break;
        int best = -1, best_count = 0;
        auto leaf_edges_at = [&](int v) {
            std::vector<int> out_edges;
            for (const HalfEdge& h : S.incidence(v))
                if (S.degree(S.endpoint(h.edge, 1 - h.end)) == 1) out_edges.push_back(h.edge);
            std::sort(out_edges.begin(), out_edges.end(),
                      [&](int a, int b) { return S.edge(a).id < S.edge(b).id; });
            return out_edges;
        };
        for (int v = 0; v < S.vertex_count(); ++v) {
            if (S.degree(v) < 3) continue;
            const int leaves = static_cast<int>(leaf_edges_at(v).size());
            if (leaves > best_count ||
                (leaves == best_count && best >= 0 && S.vertex(v).id < S.vertex(best).id)) {
                best = v;
                best_count = leaves;
            }
        }
        if (best < 0 || best_count < 2)
            throw GraphError("no leaf pair available; malformed tree");
        const auto leaves = leaf_edges_at(best);
        TrimRecord rec;
        rec.vertex_id = S.vertex(best).id;
        std::vector<char> drop_vertex(W.vertex_count(), 0), drop_edge(W.edge_count(), 0);
        for (int i = 0; i < 2; ++i) {
            const int sedge = leaves[i];
            auto pieces = map.chains[sedge];
            // orient the chain from the trim vertex toward the leaf
            const bool from_trim = S.edge(sedge).from == best;
            if (!from_trim) {
                std::reverse(pieces.begin(), pieces.end());
                for (auto& p : pieces) p.forward = !p.forward;
            }
            for (const auto& p : pieces) {
                const Edge& ed = W.edge(p.orig_edge);
                const int far = p.forward ? ed.to : ed.from;
                rec.chain[i].push_back(
                    {ed.id, ed.length, W.vertex(far).id, W.vertex(far).bc, p.forward});
                drop_edge[p.orig_edge] = 1;
                drop_vertex[far] = 1;
            }
        }
        out.trims.push_back(rec);
        // remove the chains; the trim vertex and everything else stays
        std::vector<Vertex> vs;
        std::vector<int> vmap(W.vertex_count(), -1);
        for (int v = 0; v < W.vertex_count(); ++v)
            if (!drop_vertex[v]) {
                vmap[v] = static_cast<int>(vs.size());
                vs.push_back(W.vertex(v));
            }
        std::vector<Edge> es;
        for (int e = 0; e < W.edge_count(); ++e)
            if (!drop_edge[e]) {
                Edge ed = W.edge(e);
                ed.from = vmap[ed.from];
                ed.to = vmap[ed.to];
                es.push_back(ed);
            }
        W = MetricGraph(std::move(vs), std::move(es));
    }
    out.base = W;
    return out;
}

// Rebuild the suppressed input from the base segment by replaying the trims
// in reverse.
inline MetricGraph replay_decomposition(const LeafPairDecomposition& d) {
    std::vector<Vertex> vs = d.base.vertices();
    std::vector<Edge> es = d.base.edges();
    auto vindex = [&](const std::string& id) {
        for (int v = 0; v < static_cast<int>(vs.size()); ++v)
            if (vs[v].id == id) return v;
        return -1;
    };
    for (auto it = d.trims.rbegin(); it != d.trims.rend(); ++it) {
        const int v = vindex(it->vertex_id);
        if (v < 0) throw GraphError("replay: unknown attachment vertex " + it->vertex_id);
        for (const auto& chain : it->chain) {
            int near = v;
            for (const auto& p : chain) {
                vs.push_back({p.far_vertex_id, p.far_bc});
                const int far = static_cast<int>(vs.size()) - 1;
                es.push_back({p.edge_id, p.forward ? near : far, p.forward ? far : near,
                              p.length});
                near = far;
            }
        }
    }
    return MetricGraph(std::move(vs), std::move(es));
}

// ---------------------------------------------------------------------------
// affine triple

// Three edge-wise affine functions with integer slopes in {-1,0,1}, standard
// vertex conditions, and |g1'| + |g2'| + |g3'| = 2 on every edge.
struct AffineTriple {
    std::vector<std::array<int, 3>> slopes;      // per edge, in edge orientation
    std::vector<std::array<double, 3>> offsets;  // value at the from-vertex

    PiecewiseAffine component(int alpha) const {
        PiecewiseAffine f;
        f.edges.reserve(slopes.size());
        for (size_t e = 0; e < slopes.size(); ++e)
            f.edges.push_back({static_cast<double>(slopes[e][alpha]), offsets[e][alpha]});
        return f;
    }
};

struct TripleValidation {
    bool ok = true;
    double continuity_residual = 0;  // max over vertices, exact 0 expected
    int kirchhoff_violations = 0;    // integer sums
    int cover_violations = 0;        // sum of |slope| != 2 or slope outside {-1,0,1}
};

inline TripleValidation validate_affine_triple(const MetricGraph& g, const AffineTriple& t) {
    TripleValidation out;
    for (int e = 0; e < g.edge_count(); ++e) {
        int cover = 0;
        for (int a = 0; a < 3; ++a) {
            const int s = t.slopes[e][a];
            if (s < -1 || s > 1) ++out.cover_violations;
            cover += std::abs(s);
        }
        if (cover != 2) ++out.cover_violations;
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        for (int a = 0; a < 3; ++a) {
            if (g.vertex(v).bc == BC::standard) {
                int sum = 0;
                for (const HalfEdge& h : g.incidence(v))
                    sum += (h.end == 0 ? 1 : -1) * t.slopes[h.edge][a];
                if (sum != 0) ++out.kirchhoff_violations;
            }
            // continuity: all incident half-edge values agree exactly
            double ref = 0;
            bool first = true;
            for (const HalfEdge& h : g.incidence(v)) {
                const double val =
                    h.end == 0 ? t.offsets[h.edge][a]
                               : t.offsets[h.edge][a] +
                                     t.slopes[h.edge][a] * g.edge(h.edge).length;
                if (first) {
                    ref = val;
                    first = false;
                } else {
                    out.continuity_residual =
                        std::max(out.continuity_residual, std::abs(val - ref));
                }
            }
        }
    }
    out.ok = out.continuity_residual == 0.0 && out.kirchhoff_violations == 0 &&
             out.cover_violations == 0;
    return out;
}

// Construct the affine triple for a metric tree by replaying its leaf-pair
// decomposition: the base segment carries (x, -x, 0); a pair attached at an
// internal vertex alternates +-1 for the first two components; a pair
// attached at an external vertex zeroes one of the two live components on
// each new leaf and alternates the third.
inline AffineTriple affine_triple(const MetricGraph& tree) {
    const LeafPairDecomposition d = leaf_pair_decomposition(tree);
    // integer slopes on the suppressed tree, edge id -> slopes (from->to)
    std::map<std::string, std::array<int, 3>> slope;

    // base path: orient from the smaller-id endpoint
    {
        const MetricGraph& b = d.base;
        if (b.edge_count() == 0) throw GraphError("degenerate base segment");
        int start = -1;
        for (int v = 0; v < b.vertex_count(); ++v)
            if (b.degree(v) == 1 && (start < 0 || b.vertex(v).id < b.vertex(start).id)) start = v;
        std::vector<char> used(b.edge_count(), 0);
        int v = start;
        for (;;) {
            const auto& inc = b.incidence(v);
            int next = -1;
            for (const HalfEdge& h : inc)
                if (!used[h.edge]) { next = h.edge; break; }
            if (next < 0) break;
            used[next] = 1;
            const bool forward = b.edge(next).from == v;
            slope[b.edge(next).id] = {forward ? 1 : -1, forward ? -1 : 1, 0};
            v = b.endpoint(next, forward ? 1 : 0);
        }
    }

    // replay trims in reverse; track the current graph to know vertex degrees
    std::vector<Vertex> vs = d.base.vertices();
    std::vector<Edge> es = d.base.edges();
    auto vindex = [&](const std::string& id) {
        for (int i = 0; i < static_cast<int>(vs.size()); ++i)
            if (vs[i].id == id) return i;
        return -1;
    };
    for (auto it = d.trims.rbegin(); it != d.trims.rend(); ++it) {
        const int v = vindex(it->vertex_id);
        if (v < 0) throw GraphError("replay: unknown attachment vertex");
        // current degree and per-component outgoing slope on existing edges
        int degree = 0;
        int out_single[3] = {0, 0, 0};
        for (const Edge& ed : es) {
            const bool at_from = ed.from == v, at_to = ed.to == v;
            if (!at_from && !at_to) continue;
            ++degree;
            const auto s = slope.at(ed.id);
            for (int a = 0; a < 3; ++a) out_single[a] = at_from ? s[a] : -s[a];
        }
        std::array<int, 3> sa{}, sb{};  // slopes away from v on the two new leaves
        if (degree >= 2) {
            sa = {1, -1, 0};
            sb = {-1, 1, 0};
        } else {
            // exactly one existing edge: two components arrive with slope +-1,
            // one is flat; leaves ordered by edge id fix the assignment
            int live[2], flat = -1, nlive = 0;
            for (int a = 0; a < 3; ++a) {
                if (out_single[a] == 0) flat = a;
                else live[nlive++] = a;
            }
            if (nlive != 2 || flat < 0)
                throw GraphError("affine replay: external vertex is not covered twice");
            sa[live[0]] = 0;
            sb[live[0]] = -out_single[live[0]];
            sa[live[1]] = -out_single[live[1]];
            sb[live[1]] = 0;
            sa[flat] = 1;
            sb[flat] = -1;
        }
        // the whole metric leaf edge carries one constant slope per component
        for (int i = 0; i < 2; ++i) {
            const auto& toward = i == 0 ? sa : sb;
            int near = v;
            for (const auto& p : it->chain[i]) {
                vs.push_back({p.far_vertex_id, p.far_bc});
                const int far = static_cast<int>(vs.size()) - 1;
                es.push_back({p.edge_id, p.forward ? near : far, p.forward ? far : near,
                              p.length});
                std::array<int, 3> s{};
                for (int a = 0; a < 3; ++a) s[a] = p.forward ? toward[a] : -toward[a];
                slope[p.edge_id] = s;
                near = far;
            }
        }
    }

    // pull integer slopes back to the original edges through the suppression
    // chains
    SuppressMap smap;
    const MetricGraph sup = suppress_artificial(tree, &smap);
    std::vector<std::array<int, 3>> eslope(tree.edge_count());
    for (int j = 0; j < sup.edge_count(); ++j) {
        const auto s = slope.at(sup.edge(j).id);
        for (const auto& piece : smap.chains[j]) {
            for (int a = 0; a < 3; ++a)
                eslope[piece.orig_edge][a] = piece.forward ? s[a] : -s[a];
        }
    }

    // one exact value pass over the original tree fixes the offsets; slopes
    // are integers, so each assignment is a single rounded add
    AffineTriple out;
    out.slopes = eslope;
    out.offsets.assign(tree.edge_count(), {0.0, 0.0, 0.0});
    std::array<std::vector<double>, 3> val;
    for (int a = 0; a < 3; ++a) val[a].assign(tree.vertex_count(), 0.0);
    std::vector<char> seen(tree.vertex_count(), 0);
    std::vector<char> eseen(tree.edge_count(), 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        for (const HalfEdge& h : tree.incidence(v)) {
            if (eseen[h.edge]) continue;
            eseen[h.edge] = 1;
            const int w = tree.endpoint(h.edge, 1 - h.end);
            const double l = tree.edge(h.edge).length;
            for (int a = 0; a < 3; ++a) {
                const int s = eslope[h.edge][a];
                if (h.end == 0) {
                    val[a][w] = val[a][v] + s * l;
                } else {
                    // assign the from-end value so that value(from) + s*l
                    // reproduces value(to) bitwise
                    double o = val[a][v] - s * l;
                    for (int tries = 0; tries < 8 && o + s * l != val[a][v]; ++tries)
                        o = std::nextafter(o, o + s * l < val[a][v]
                                                  ? std::numeric_limits<double>::infinity()
                                                  : -std::numeric_limits<double>::infinity());
                    val[a][w] = o;
                }
            }
            if (!seen[w]) {
                seen[w] = 1;
                bfs.push(w);
            }
        }
    }
    for (int e = 0; e < tree.edge_count(); ++e)
        for (int a = 0; a < 3; ++a) out.offsets[e][a] = val[a][tree.edge(e).from];
    return out;
}

// ---------------------------------------------------------------------------
// current functions

struct CurrentFunction {
    std::vector<double> eta;         // per-edge magnitude >= 0
    std::vector<int> orientation;    // +1: flow along from->to

    double signed_flow(int e) const { return orientation[e] * eta[e]; }
};

inline CurrentFunction current_from_affine(const MetricGraph& g, const PiecewiseAffine& h) {
    CurrentFunction c;
    c.eta.resize(g.edge_count());
    c.orientation.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const double s = h.edges[e].slope;
        c.eta[e] = std::abs(s);
        c.orientation[e] = s >= 0 ? 1 : -1;
    }
    return c;
}

struct CurrentValidation {
    bool conservation_ok = false;   // Kirchhoff current law at standard vertices
    bool potential_ok = false;      // eta = |h'| for an affine h (cycle sums vanish)
    double max_violation = 0;

    bool ok() const { return conservation_ok && potential_ok; }
};

// A valid current must satisfy the current law at every standard vertex and
// integrate to a single-valued affine potential (checked along a spanning
// tree, then on every remaining edge).
inline CurrentValidation validate_current(const MetricGraph& g, const CurrentFunction& cur,
                                          double tol = 1e-9) {
    CurrentValidation out;
    double scale = 1e-12;
    for (double e : cur.eta) scale = std::max(scale, std::abs(e));
    double worst = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.vertex(v).bc != BC::standard) continue;
        double net = 0;
        for (const HalfEdge& h : g.incidence(v))
            net += (h.end == 1 ? 1.0 : -1.0) * cur.signed_flow(h.edge);
        worst = std::max(worst, std::abs(net));
    }
    out.conservation_ok = worst <= tol * scale;
    out.max_violation = worst;
    // potential along a spanning tree
    std::vector<double> pot(g.vertex_count(), 0);
    std::vector<char> seen(g.vertex_count(), 0), eused(g.edge_count(), 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        for (const HalfEdge& h : g.incidence(v)) {
            const int w = g.endpoint(h.edge, 1 - h.end);
            if (seen[w]) continue;
            seen[w] = 1;
            eused[h.edge] = 1;
            const double rise = cur.signed_flow(h.edge) * g.edge(h.edge).length;
            pot[w] = pot[v] + (h.end == 0 ? rise : -rise);
            bfs.push(w);
        }
    }
    double cyc = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (eused[e]) continue;
        const Edge& ed = g.edge(e);
        cyc = std::max(cyc,
                       std::abs(pot[ed.to] - pot[ed.from] - cur.signed_flow(e) * ed.length));
    }
    double lscale = 0;
    for (const Edge& ed : g.edges()) lscale = std::max(lscale, ed.length);
    out.potential_ok = cyc <= tol * std::max(scale * lscale, 1e-12);
    out.max_violation = std::max(out.max_violation, cyc);
    return out;
}

// Harmonic affine potential of the resistor network: prescribed values at
// Dirichlet vertices, Kirchhoff balance at standard vertices.
inline PiecewiseAffine harmonic_potential(const MetricGraph& g,
                                          const std::vector<double>& dirichlet_values) {
    const auto dv = g.dirichlet_vertices();
    if (dv.size() != dirichlet_values.size())
        throw GraphError("need one boundary value per Dirichlet vertex");
    const int V = g.vertex_count();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(V, V);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(V);
    for (size_t i = 0; i < dv.size(); ++i) {
        A(dv[i], dv[i]) = 1;
        rhs(dv[i]) = dirichlet_values[i];
    }
    for (int v = 0; v < V; ++v) {
        if (g.vertex(v).bc != BC::standard) continue;
        for (const HalfEdge& h : g.incidence(v)) {
            const int w = g.endpoint(h.edge, 1 - h.end);
            if (w == v) continue;  // self-loops carry no harmonic flow
            const double c = 1.0 / g.edge(h.edge).length;
            A(v, v) += c;
            A(v, w) -= c;
        }
        if (A(v, v) == 0) A(v, v) = 1;  // isolated from the boundary: pin to 0
    }
    const Eigen::VectorXd h = A.fullPivLu().solve(rhs);
    PiecewiseAffine out;
    out.edges.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        const double s = ed.from == ed.to ? 0.0 : (h(ed.to) - h(ed.from)) / ed.length;
        out.edges[e] = {s, h(ed.from)};
    }
    return out;
}

// RHS of the current gap estimate: 4 ||eta phi1'||^2 / ||eta phi1||^2.
inline double current_gap_bound(const MetricGraph& g, const CurrentFunction& cur,
                                const EdgeWaveFunction& phi1) {
    const double pi2 = std::numbers::pi / 2;
    double num = 0, den = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const double w2 = cur.eta[e] * cur.eta[e];
        if (w2 == 0) continue;
        const EdgeWave& w = phi1.edges[e];
        const double l = g.edge(e).length;
        den += w2 * w.amplitude * w.amplitude *
               int_sinsin(phi1.sigma, w.phase, phi1.sigma, w.phase, 0, l);
        const double da = w.amplitude * phi1.sigma;
        num += w2 * da * da * int_sinsin(phi1.sigma, w.phase + pi2, phi1.sigma, w.phase + pi2, 0, l);
    }
    if (!(den > 0)) throw GraphError("current gap bound: ||eta phi1|| = 0");
    return 4 * num / den;
}

inline BoundCheck current_gap_check(const MetricGraph& g, const CurrentFunction& cur,
                                    const EdgeWaveFunction& phi1, double gap) {
    return detail::make_check("gap.current_upper", gap, Relation::le,
                              current_gap_bound(g, cur, phi1), Certainty::certified);
}

// ---------------------------------------------------------------------------
// saguaro graphs

struct Saguaro {
    MetricGraph base;                     // underlying tree
    std::vector<int> k;                   // per base edge
    MetricGraph graph;                    // expanded graph
    std::vector<std::vector<int>> copies; // base edge -> expanded edge indices
};

// Replace each internal edge by a pumpkin of k parallel edges and each
// external edge by a star of k edges with fresh external vertices.
inline Saguaro build_saguaro(const MetricGraph& tree, const std::vector<int>& k_per_edge) {
    if (tree.edge_count() - tree.vertex_count() + 1 != 0)
        throw GraphError("saguaro construction needs a tree");
    if (static_cast<int>(k_per_edge.size()) != tree.edge_count())
        throw GraphError("need one multiplicity per edge");
    for (int k : k_per_edge)
        if (k < 1) throw GraphError("multiplicities must be >= 1");
    Saguaro out;
    out.base = tree;
    out.k = k_per_edge;
    std::vector<Vertex> vs = tree.vertices();
    std::vector<Edge> es;
    out.copies.assign(tree.edge_count(), {});
    for (int e = 0; e < tree.edge_count(); ++e) {
        const Edge& ed = tree.edge(e);
        const int k = k_per_edge[e];
        const bool from_leaf = tree.degree(ed.from) == 1;
        const bool to_leaf = tree.degree(ed.to) == 1;
        for (int c = 0; c < k; ++c) {
            Edge copy = ed;
            if (c > 0) {
                copy.id = ed.id + ".c" + std::to_string(c + 1);
                // external edges split their leaf endpoint into fresh leaves
                if (to_leaf && !from_leaf) {
                    vs.push_back({tree.vertex(ed.to).id + ".c" + std::to_string(c + 1),
                                  tree.vertex(ed.to).bc});
                    copy.to = static_cast<int>(vs.size()) - 1;
                } else if (from_leaf && !to_leaf) {
                    vs.push_back({tree.vertex(ed.from).id + ".c" + std::to_string(c + 1),
                                  tree.vertex(ed.from).bc});
                    copy.from = static_cast<int>(vs.size()) - 1;
                }
                // a single-edge tree (both ends leaves) replicates in parallel
            }
            out.copies[e].push_back(static_cast<int>(es.size()));
            es.push_back(copy);
        }
    }
    out.graph = MetricGraph(std::move(vs), std::move(es));
    return out;
}

// Lift the base triple to a uniform-k saguaro by replicating values on the
// parallel copies.
inline AffineTriple lift_triple(const Saguaro& s, const AffineTriple& base) {
    for (size_t e = 1; e < s.k.size(); ++e)
        if (s.k[e] != s.k[0]) throw GraphError("triple lift needs uniform multiplicity");
    AffineTriple out;
    out.slopes.resize(s.graph.edge_count());
    out.offsets.resize(s.graph.edge_count());
    for (int e = 0; e < s.base.edge_count(); ++e)
        for (int idx : s.copies[e]) {
            out.slopes[idx] = base.slopes[e];
            out.offsets[idx] = base.offsets[e];
        }
    return out;
}

// Currents eta_alpha = |g_alpha'|/k on each copy group.
inline std::array<CurrentFunction, 3> saguaro_currents(const Saguaro& s,
                                                       const AffineTriple& base) {
    std::array<CurrentFunction, 3> out;
    for (int a = 0; a < 3; ++a) {
        out[a].eta.assign(s.graph.edge_count(), 0.0);
        out[a].orientation.assign(s.graph.edge_count(), 1);
    }
    for (int e = 0; e < s.base.edge_count(); ++e) {
        const int k = s.k[e];
        for (int idx : s.copies[e])
            for (int a = 0; a < 3; ++a) {
                const int sl = base.slopes[e][a];
                out[a].eta[idx] = std::abs(sl) / static_cast<double>(k);
                out[a].orientation[idx] = sl >= 0 ? 1 : -1;
            }
    }
    return out;
}

inline BoundCheck saguaro_ratio_check(const Saguaro& s, const Spectrum& spec) {
    int kmin = s.k[0], kmax = s.k[0];
    for (int k : s.k) {
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    const double rhs = 1.0 + 4.0 * kmax * kmax / static_cast<double>(kmin * kmin);
    return detail::make_check("saguaro.ratio", spec.lambda(2) / spec.lambda(1), Relation::le, rhs,
                              Certainty::certified);
}

// ---------------------------------------------------------------------------
// ornamented trees

struct Pendant {
    MetricGraph graph;       // pendant with the attachment vertex included
    std::string attach_id;   // id of the attachment vertex inside the pendant
};

struct OrnamentedTree {
    MetricGraph tree;
    std::vector<Pendant> pendants;
    std::vector<std::string> attach_tree_id;  // attachment vertex in the tree
    MetricGraph assembled;
};

inline OrnamentedTree make_ornamented(const MetricGraph& tree,
                                      const std::vector<Pendant>& pendants,
                                      const std::vector<std::string>& attach_tree_ids) {
    if (pendants.size() != attach_tree_ids.size())
        throw GraphError("need one attachment vertex per pendant");
    OrnamentedTree out;
    out.tree = tree;
    out.pendants = pendants;
    out.attach_tree_id = attach_tree_ids;
    std::vector<Vertex> vs = tree.vertices();
    std::vector<Edge> es = tree.edges();
    for (size_t j = 0; j < pendants.size(); ++j) {
        const MetricGraph& p = pendants[j].graph;
        bool has_dirichlet = false;
        for (const auto& v : p.vertices())
            if (v.bc == BC::dirichlet) has_dirichlet = true;
        if (!has_dirichlet)
            throw GraphError("pendant " + std::to_string(j) + " has no Dirichlet vertex");
        const int attach_tree = tree.vertex_index(attach_tree_ids[j]);
        if (tree.degree(attach_tree) < 2)
            throw GraphError("pendants attach to internal tree vertices");
        const int attach_p = p.vertex_index(pendants[j].attach_id);
        if (p.vertex(attach_p).bc != BC::standard)
            throw GraphError("pendant attachment vertex must be standard");
        const std::string prefix = "p" + std::to_string(j + 1) + ".";
        std::vector<int> vmap(p.vertex_count(), -1);
        for (int v = 0; v < p.vertex_count(); ++v) {
            if (v == attach_p) {
                vmap[v] = attach_tree;
            } else {
                vmap[v] = static_cast<int>(vs.size());
                vs.push_back({prefix + p.vertex(v).id, p.vertex(v).bc});
            }
        }
        for (const Edge& ed : p.edges())
            es.push_back({prefix + ed.id, vmap[ed.from], vmap[ed.to], ed.length});
    }
    out.assembled = MetricGraph(std::move(vs), std::move(es));
    return out;
}

// Hypothesis, sufficient condition, and conclusion of the pendant ratio
// estimate. The conclusion is certified only when the eigenvalue hypothesis
// holds; otherwise it is reported as informational.
inline std::vector<BoundCheck> ornamented_check(const OrnamentedTree& ot, double tol = 1e-9) {
    std::vector<BoundCheck> out;
    const Spectrum spec = eigenvalues(ot.assembled, 2, tol);
    double min_pendant = std::numeric_limits<double>::infinity();
    const double ellmax = metrics(ot.tree).ellmax;
    for (size_t j = 0; j < ot.pendants.size(); ++j) {
        const Spectrum ps = eigenvalues(ot.pendants[j].graph, 1, tol);
        min_pendant = std::min(min_pendant, ps.lambda(1));
        const double plen = ot.pendants[j].graph.total_length();
        out.push_back(detail::make_check("orn.pendant_size[" + std::to_string(j + 1) + "]", plen,
                                         Relation::le, 0.5 * ellmax, Certainty::certified));
    }
    out.push_back(detail::make_check("orn.hypothesis", spec.lambda(1), Relation::le, min_pendant,
                                     Certainty::certified));
    const bool hyp = out.back().satisfied;
    out.push_back(detail::make_check(
        "orn.ratio5", spec.lambda(2) / spec.lambda(1), Relation::le, 5.0, Certainty::certified,
        hyp ? Applicability::applicable : Applicability::informational,
        hyp ? "" : "eigenvalue hypothesis fails; conclusion not guaranteed"));
    return out;
}

}  // namespace qgraph
