// corpus.hpp — generators for the example graphs with closed-form spectra,
// plus seeded random families used by the verification suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/trees.hpp"

namespace qgraph {

// Deterministic across platforms: raw engine bits only, no std distributions.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
};

struct OracleValue {
    int index;      // 1-based position in the spectrum
    double lambda;
};

struct CorpusEntry {
    std::string name;
    MetricGraph graph;
    std::vector<OracleValue> oracle;
    bool dirichlet_tree = false;  // metric tree with Dirichlet conditions on all leaves
};

enum class IntervalBC { dd, dn, nn };

inline CorpusEntry make_interval(double L, IntervalBC bc = IntervalBC::dd) {
    if (!(L > 0)) throw GraphError("interval length must be positive");
    const double pi = std::numbers::pi;
    BC b0 = bc == IntervalBC::nn ? BC::standard : BC::dirichlet;
    BC b1 = bc == IntervalBC::dd ? BC::dirichlet : BC::standard;
    CorpusEntry ce{"interval", MetricGraph({{"v0", b0}, {"v1", b1}}, {{"e", 0, 1, L}}), {}, false};
    for (int k = 1; k <= 6; ++k) {
        double lam;
        switch (bc) {
            case IntervalBC::dd: lam = k * k * pi * pi / (L * L); break;
            case IntervalBC::dn: lam = (2 * k - 1) * (2 * k - 1) * pi * pi / (4 * L * L); break;
            default: lam = (k - 1) * (k - 1) * pi * pi / (L * L); break;
        }
        ce.oracle.push_back({k, lam});
    }
    ce.dirichlet_tree = (bc == IntervalBC::dd);
    return ce;
}

// 4-star with two unit edges and two edges of length a < 1, all ends Dirichlet.
inline CorpusEntry make_star4(double a) {
    if (!(a > 0 && a < 1)) throw GraphError("star4 parameter must lie in (0,1)");
    const double pi = std::numbers::pi;
    std::vector<Vertex> vs{{"c", BC::standard}, {"d1", BC::dirichlet}, {"d2", BC::dirichlet},
                           {"d3", BC::dirichlet}, {"d4", BC::dirichlet}};
    std::vector<Edge> es{{"long1", 0, 1, 1.0}, {"long2", 0, 2, 1.0}, {"short1", 0, 3, a},
                         {"short2", 0, 4, a}};
    CorpusEntry ce{"star4(a=" + std::to_string(a) + ")", MetricGraph(vs, es), {}, true};
    ce.oracle.push_back({1, pi * pi / ((1 + a) * (1 + a))});
    ce.oracle.push_back({2, pi * pi});
    return ce;
}

// Star with one edge of length 2 and k unit edges, all ends Dirichlet.
inline CorpusEntry make_star15(int k) {
    if (k < 1) throw GraphError("star15 needs k >= 1");
    const double pi = std::numbers::pi;
    std::vector<Vertex> vs{{"c", BC::standard}, {"d0", BC::dirichlet}};
    std::vector<Edge> es{{"long", 0, 1, 2.0}};
    for (int i = 1; i <= k; ++i) {
        vs.push_back({"d" + std::to_string(i), BC::dirichlet});
        es.push_back({"s" + std::to_string(i), 0, static_cast<int>(vs.size()) - 1, 1.0});
    }
    CorpusEntry ce{"star15(k=" + std::to_string(k) + ")", MetricGraph(vs, es), {}, true};
    const double s = std::atan(std::sqrt(2.0 * k + 1.0));
    ce.oracle.push_back({1, s * s});
    ce.oracle.push_back({2, (pi - s) * (pi - s)});
    return ce;
}

// Equilateral pumpkin with k unit edges plus a pendant unit edge whose free
// end is Dirichlet.
inline CorpusEntry make_balloon(int k) {
    if (k < 2) throw GraphError("balloon needs k >= 2");
    const double pi = std::numbers::pi;
    std::vector<Vertex> vs{{"w", BC::dirichlet}, {"v1", BC::standard}, {"v2", BC::standard}};
    std::vector<Edge> es{{"stem", 0, 1, 1.0}};
    for (int i = 1; i <= k; ++i) es.push_back({"p" + std::to_string(i), 1, 2, 1.0});
    CorpusEntry ce{"balloon(k=" + std::to_string(k) + ")", MetricGraph(vs, es), {}, false};
    const double s = std::atan(1.0 / std::sqrt(static_cast<double>(k)));
    ce.oracle.push_back({1, s * s});
    ce.oracle.push_back({2, (pi - s) * (pi - s)});
    return ce;
}

// k edges of length a joined at the center, all outer ends Dirichlet.
inline CorpusEntry make_equilateral_star(int k, double a) {
    if (k < 1 || !(a > 0)) throw GraphError("equilateral star needs k >= 1 and a > 0");
    const double pi = std::numbers::pi;
    std::vector<Vertex> vs{{"c", BC::standard}};
    std::vector<Edge> es;
    for (int i = 1; i <= k; ++i) {
        vs.push_back({"d" + std::to_string(i), BC::dirichlet});
        es.push_back({"a" + std::to_string(i), 0, i, a});
    }
    CorpusEntry ce{"eqstar(k=" + std::to_string(k) + ",a=" + std::to_string(a) + ")",
                   MetricGraph(vs, es), {}, true};
    ce.oracle.push_back({1, pi * pi / (4 * a * a)});
    if (k >= 2) ce.oracle.push_back({2, pi * pi / (a * a)});
    return ce;
}

inline CorpusEntry make_tadpole(double loop_len, double stem_len) {
    std::vector<Vertex> vs{{"v", BC::standard}, {"d", BC::dirichlet}};
    std::vector<Edge> es{{"loop", 0, 0, loop_len}, {"stem", 0, 1, stem_len}};
    return {"tadpole", MetricGraph(vs, es), {}, false};
}

// Sequential leaf attachment; every final degree-1 vertex becomes Dirichlet.
inline CorpusEntry make_random_tree(int E, std::uint64_t seed, double ellmin = 0.1) {
    if (E < 1) throw GraphError("tree needs at least one edge");
    Rng rng(seed);
    std::vector<Edge> es;
    int nv = 2;
    es.push_back({"e1", 0, 1, rng.uniform(ellmin, 1.0)});
    for (int i = 2; i <= E; ++i) {
        const int u = rng.below(nv);
        es.push_back({"e" + std::to_string(i), u, nv, rng.uniform(ellmin, 1.0)});
        ++nv;
    }
    std::vector<int> deg(nv, 0);
    for (const auto& e : es) {
        deg[e.from]++;
        deg[e.to]++;
    }
    std::vector<Vertex> vs;
    for (int v = 0; v < nv; ++v)
        vs.push_back({"v" + std::to_string(v), deg[v] == 1 ? BC::dirichlet : BC::standard});
    return {"tree(E=" + std::to_string(E) + ",seed=" + std::to_string(seed) + ")",
            MetricGraph(vs, es), {}, true};
}

// Random connected graph with Betti number beta and at least one Dirichlet
// leaf: a random tree plus beta extra edges kept away from one protected leaf.
inline CorpusEntry make_random_graph(int E, int beta, std::uint64_t seed, double ellmin = 0.1) {
    if (beta < 0 || E - beta < 1) throw GraphError("need E - beta >= 1");
    Rng rng(seed);
    const int tree_edges = E - beta;
    std::vector<Edge> es;
    int nv = 2;
    es.push_back({"e1", 0, 1, rng.uniform(ellmin, 1.0)});
    for (int i = 2; i <= tree_edges; ++i) {
        const int u = rng.below(nv);
        es.push_back({"e" + std::to_string(i), u, nv, rng.uniform(ellmin, 1.0)});
        ++nv;
    }
    std::vector<int> deg(nv, 0);
    for (const auto& e : es) {
        deg[e.from]++;
        deg[e.to]++;
    }
    int protected_leaf = 0;
    for (int v = 0; v < nv; ++v)
        if (deg[v] == 1) {
            protected_leaf = v;
            break;
        }
    for (int j = 0; j < beta; ++j) {
        int u = -1, w = -1;
        for (int tries = 0; tries < 64; ++tries) {
            u = rng.below(nv);
            w = rng.below(nv);
            if (u != w && u != protected_leaf && w != protected_leaf) break;
            u = -1;
        }
        if (u < 0) {
            // too few vertices for a non-loop chord: fall back to a self-loop
            // away from the protected leaf (self-loops are legal edges)
            u = w = protected_leaf == 0 ? 1 : 0;
        }
        es.push_back({"c" + std::to_string(j + 1), u, w, rng.uniform(ellmin, 1.0)});
    }
    std::vector<int> deg2(nv, 0);
    for (const auto& e : es) {
        deg2[e.from]++;
        deg2[e.to]++;
    }
    std::vector<Vertex> vs;
    for (int v = 0; v < nv; ++v)
        vs.push_back({"v" + std::to_string(v), deg2[v] == 1 ? BC::dirichlet : BC::standard});
    return {"graph(E=" + std::to_string(E) + ",beta=" + std::to_string(beta) +
                ",seed=" + std::to_string(seed) + ")",
            MetricGraph(vs, es), {}, false};
}

// Saguaro over a random-tree base with uniform or per-edge multiplicities.
inline Saguaro make_saguaro(int base_edges, std::uint64_t seed, const std::vector<int>& ks) {
    const CorpusEntry base = make_random_tree(base_edges, seed);
    std::vector<int> k = ks;
    if (static_cast<int>(k.size()) == 1) k.assign(base_edges, ks[0]);
    return build_saguaro(base.graph, k);
}

// Ornamented tree: random base plus 1-2 single-edge Dirichlet pendants whose
// lengths satisfy |P_j| <= ellmax/2.
inline OrnamentedTree make_random_ornamented(std::uint64_t seed, int base_edges = 5) {
    Rng rng(seed);
    const CorpusEntry base = make_random_tree(base_edges, seed * 7919 + 1);
    const MetricGraph& t = base.graph;
    double ellmax = 0;
    for (const auto& e : t.edges()) ellmax = std::max(ellmax, e.length);
    std::vector<int> internals;
    for (int v = 0; v < t.vertex_count(); ++v)
        if (t.degree(v) >= 2) internals.push_back(v);
    if (internals.empty()) throw GraphError("base tree has no internal vertex");
    const int npend = 1 + rng.below(2);
    std::vector<Pendant> pendants;
    std::vector<std::string> attach;
    for (int j = 0; j < npend; ++j) {
        const double len = 0.5 * ellmax * rng.uniform(0.3, 0.99);
        Pendant p;
        p.graph = MetricGraph({{"q", BC::standard}, {"d", BC::dirichlet}}, {{"e", 0, 1, len}});
        p.attach_id = "q";
        pendants.push_back(std::move(p));
        attach.push_back(t.vertex(internals[rng.below(static_cast<int>(internals.size()))]).id);
    }
    return make_ornamented(t, pendants, attach);
}

// The fixed corpus exercised by the verification suites. Oracle-bearing
// entries come first.
inline std::vector<CorpusEntry> standard_corpus() {
    std::vector<CorpusEntry> out;
    out.push_back(make_interval(1.0, IntervalBC::dd));
    out.push_back(make_interval(1.0, IntervalBC::dn));
    out.push_back(make_interval(1.0, IntervalBC::nn));
    out.push_back(make_interval(2.5, IntervalBC::dd));
    out.push_back(make_star4(0.5));
    out.push_back(make_star4(0.9));
    out.push_back(make_star15(5));
    out.push_back(make_balloon(3));
    out.push_back(make_balloon(6));
    out.push_back(make_equilateral_star(3, 1.0));
    out.push_back(make_equilateral_star(5, 0.7));
    out.push_back(make_tadpole(1.5, 1.0));
    out.push_back(make_random_tree(5, 11));
    out.push_back(make_random_tree(8, 12));
    out.push_back(make_random_graph(6, 1, 13));
    out.push_back(make_random_graph(7, 2, 14));
    return out;
}

}  // namespace qgraph
