// cheeger.hpp — weighted and unweighted Cheeger cuts, the ground-state
// trimming construction Gamma_1, and the Harnack / envelope estimates built
// on it.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <queue>
#include <vector>

#include "qgraph/eigensolve.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

// f(x) = sin^2(sigma x) / int_0^x sin^2(sigma t) dt, decreasing on (0, pi/sigma).
inline double f_of(double x, double sigma) {
    if (!(sigma > 0)) throw GraphError("f_of needs sigma > 0");
    if (!(x > 0) || !(x < std::numbers::pi / sigma))
        throw GraphError("f_of argument outside (0, pi/sigma)");
    const double s = std::sin(sigma * x);
    const double u = 2 * sigma * x;
    double denom;  // x - sin(2 sigma x)/(2 sigma) = (u - sin u)/(2 sigma)
    if (u < 0.25) {
        // series for (u - sin u)/u^3 avoids the cancellation at small x
        const double u2 = u * u;
        const double series =
            1.0 / 6 - u2 / 120 + u2 * u2 / 5040 - u2 * u2 * u2 / 362880;
        denom = u * u * u * series / (2 * sigma);
    } else {
        denom = x - std::sin(u) / (2 * sigma);
    }
    return 2 * s * s / denom;
}

// Unit-capped sine profile of the distance to the Dirichlet set.
inline double upsilon(const MetricGraph& g, const PointOnGraph& p, double ell0,
                      const std::vector<std::vector<double>>* vdist = nullptr) {
    const double d = dist_to_dirichlet(g, p, vdist);
    if (d >= ell0 / 2) return 1.0;
    return std::sin(std::numbers::pi * d / ell0);
}

// ---------------------------------------------------------------------------
// Cheeger cuts

struct CutSegment {
    int edge;
    double x0, x1;
    int component;  // 0 or 1
};

struct CheegerCut {
    std::vector<PointOnGraph> points;
    std::vector<CutSegment> segments;
};

struct CheegerEstimate {
    double value = 0;
    CheegerCut cut;
    bool weighted = false;
    std::vector<double> history;  // best value after each refinement sweep
};

namespace detail {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct CutEvaluation {
    int components = 0;
    double ratio = 0;
    double numerator = 0;
    double mass[2] = {0, 0};
    std::vector<CutSegment> segments;
};

// Split the graph at the cut points and measure both sides. `weight` NULL
// means the unweighted constant (counts and lengths).
inline CutEvaluation evaluate_cut_impl(const MetricGraph& g, const EdgeWaveFunction* weight,
                                       const std::vector<PointOnGraph>& points,
                                       bool need_segments) {
    const int E = g.edge_count();
    std::vector<std::vector<double>> cuts(E);
    std::vector<char> vertex_cut(g.vertex_count(), 0);
    for (const PointOnGraph& p : points) {
        check_point(g, p);
        const int v = g.vertex_at(p, 1e-12 * g.edge(p.edge).length);
        if (v >= 0) {
            if (g.vertex(v).bc == BC::dirichlet)
                throw GraphError("cut point at a Dirichlet vertex");
            vertex_cut[v] = 1;
        } else {
            cuts[p.edge].push_back(p.position);
        }
    }
    // segments per edge
    std::vector<std::vector<std::pair<double, double>>> segs(E);
    std::vector<int> first_seg(E), last_seg(E);
    int nseg = 0;
    for (int e = 0; e < E; ++e) {
        auto& c = cuts[e];
        std::sort(c.begin(), c.end());
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] - c[i - 1] < 1e-12) throw GraphError("coincident cut points");
        double prev = 0;
        first_seg[e] = nseg;
        for (double x : c) {
            segs[e].push_back({prev, x});
            prev = x;
            ++nseg;
        }
        segs[e].push_back({prev, g.edge(e).length});
        ++nseg;
        last_seg[e] = nseg - 1;
    }
    // consecutive segments of an edge stay separated (a cut point sits
    // between them); connectivity only flows through uncut vertices
    DisjointSet ds(nseg);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (vertex_cut[v]) continue;
        int anchor = -1;
        for (const HalfEdge& h : g.incidence(v)) {
            const int s = h.end == 0 ? first_seg[h.edge] : last_seg[h.edge];
            if (anchor < 0) anchor = s;
            else ds.unite(anchor, s);
        }
    }
    // component labels
    std::vector<int> label(nseg, -1);
    int ncomp = 0;
    for (int s = 0; s < nseg; ++s) {
        const int r = ds.find(s);
        if (label[r] < 0) label[r] = ncomp++;
        label[s] = label[r];
    }
    CutEvaluation out;
    out.components = ncomp;
    if (ncomp != 2) return out;
    for (const PointOnGraph& p : points) {
        if (weight) {
            const double val = weight->value(p);
            out.numerator += val * val;
        } else {
            out.numerator += 1;
        }
    }
    int sidx = 0;
    for (int e = 0; e < E; ++e)
        for (const auto& [x0, x1] : segs[e]) {
            const int comp = label[ds.find(sidx)];
            const double m = weight ? wave_mass(g, *weight, e, x0, x1) : (x1 - x0);
            out.mass[comp] += m;
            if (need_segments) out.segments.push_back({e, x0, x1, comp});
            ++sidx;
        }
    out.ratio = out.numerator / std::min(out.mass[0], out.mass[1]);
    return out;
}

}  // namespace detail

// Ratio of a concrete cut; throws unless the cut splits the graph into
// exactly two components.
inline double evaluate_cut(const MetricGraph& g, const EdgeWaveFunction* weight,
                           const std::vector<PointOnGraph>& points, CheegerCut* cut_out = nullptr) {
    auto ev = detail::evaluate_cut_impl(g, weight, points, cut_out != nullptr);
    if (ev.components != 2)
        throw GraphError("cut produces " + std::to_string(ev.components) +
                         " components, expected exactly 2");
    if (cut_out) {
        cut_out->points = points;
        cut_out->segments = std::move(ev.segments);
    }
    return ev.ratio;
}

namespace detail {

struct CutConfig {
    std::vector<int> edges;  // edges carrying one interior cut point each
    bool double_cut = false; // instead: edges[0] carries two cut points
};

inline std::vector<PointOnGraph> config_points(const MetricGraph& g, const CutConfig& cfg,
                                               const std::vector<double>& pos) {
    std::vector<PointOnGraph> pts;
    if (cfg.double_cut) {
        pts.push_back({cfg.edges[0], pos[0]});
        pts.push_back({cfg.edges[0], pos[1]});
    } else {
        for (size_t i = 0; i < cfg.edges.size(); ++i) pts.push_back({cfg.edges[i], pos[i]});
    }
    (void)g;
    return pts;
}

// Component count depends only on which edges are cut (and whether one edge
// is cut twice), never on the interior positions.
inline bool config_valid(const MetricGraph& g, const CutConfig& cfg) {
    std::vector<double> mid;
    if (cfg.double_cut) {
        const double l = g.edge(cfg.edges[0]).length;
        mid = {l / 3, 2 * l / 3};
    } else {
        for (int e : cfg.edges) mid.push_back(g.edge(e).length / 2);
    }
    auto ev = evaluate_cut_impl(g, nullptr, config_points(g, cfg, mid), false);
    return ev.components == 2;
}

inline std::vector<CutConfig> enumerate_configs(const MetricGraph& g) {
    const int E = g.edge_count();
    if (E > 20) throw GraphError("cut enumeration capped at 20 edges");
    std::vector<CutConfig> out;
    for (unsigned mask = 1; mask < (1u << E); ++mask) {
        CutConfig cfg;
        for (int e = 0; e < E; ++e)
            if (mask & (1u << e)) cfg.edges.push_back(e);
        if (config_valid(g, cfg)) out.push_back(std::move(cfg));
    }
    for (int e = 0; e < E; ++e) {
        CutConfig cfg{{e}, true};
        if (config_valid(g, cfg)) out.push_back(std::move(cfg));
    }
    return out;
}

}  // namespace detail

namespace detail {

// Per-configuration objective with the component layout precomputed: masses
// move between the two fixed sides as the cut positions slide, so each
// evaluation costs O(#cuts) closed-form integrals.
struct ConfigObjective {
    const MetricGraph* g = nullptr;
    const EdgeWaveFunction* weight = nullptr;
    CutConfig cfg;
    int nc = 0;
    std::vector<double> len;
    // single-cut data
    double base[2] = {0, 0};
    std::vector<int> lo_side, hi_side;
    std::vector<double> edge_total;
    // double-cut data
    double rest = 0;

    void init(const MetricGraph& graph, const EdgeWaveFunction* w, const CutConfig& c) {
        g = &graph;
        weight = w;
        cfg = c;
        nc = c.double_cut ? 2 : static_cast<int>(c.edges.size());
        len.resize(nc);
        for (int i = 0; i < nc; ++i) len[i] = graph.edge(c.edges[c.double_cut ? 0 : i]).length;
        if (c.double_cut) {
            rest = 0;
            for (int e = 0; e < graph.edge_count(); ++e)
                if (e != c.edges[0]) rest += total_mass(e);
        } else {
            std::vector<double> mid;
            for (int e : c.edges) mid.push_back(graph.edge(e).length / 2);
            auto ev = evaluate_cut_impl(graph, nullptr, config_points(graph, c, mid), true);
            lo_side.assign(nc, 0);
            hi_side.assign(nc, 0);
            base[0] = base[1] = 0;
            for (const auto& seg : ev.segments) {
                auto it = std::find(c.edges.begin(), c.edges.end(), seg.edge);
                if (it == c.edges.end()) {
                    base[seg.component] += total_mass(seg.edge);
                } else {
                    const int i = static_cast<int>(it - c.edges.begin());
                    if (seg.x0 == 0) lo_side[i] = seg.component;
                    else hi_side[i] = seg.component;
                }
            }
            edge_total.resize(nc);
            for (int i = 0; i < nc; ++i) edge_total[i] = total_mass(c.edges[i]);
        }
    }
    double prefix_mass(int e, double x) const {
        if (!weight) return x;
        return wave_mass(*g, *weight, e, 0, x);
    }
    // computed directly as an integral: the difference total - prefix cancels
    // catastrophically when the cut approaches the far vertex
    double suffix_mass(int e, double x) const {
        if (!weight) return g->edge(e).length - x;
        return wave_mass(*g, *weight, e, x, g->edge(e).length);
    }
    double total_mass(int e) const { return prefix_mass(e, g->edge(e).length); }
    double point_weight(int e, double x) const {
        if (!weight) return 1.0;
        const double v = weight->value(e, x);
        return v * v;
    }
    double operator()(const std::vector<double>& pos) const {
        if (cfg.double_cut) {
            const int e = cfg.edges[0];
            const double middle = weight ? wave_mass(*g, *weight, e, pos[0], pos[1])
                                         : pos[1] - pos[0];
            const double outer = rest + prefix_mass(e, pos[0]) + suffix_mass(e, pos[1]);
            const double lo = std::min(middle, outer);
            if (!(lo > 0)) return std::numeric_limits<double>::infinity();
            return (point_weight(e, pos[0]) + point_weight(e, pos[1])) / lo;
        }
        double mass[2] = {base[0], base[1]};
        double num = 0;
        for (int i = 0; i < nc; ++i) {
            const int e = cfg.edges[i];
            mass[lo_side[i]] += prefix_mass(e, pos[i]);
            mass[hi_side[i]] += suffix_mass(e, pos[i]);
            num += point_weight(e, pos[i]);
        }
        const double lo = std::min(mass[0], mass[1]);
        if (!(lo > 0)) return std::numeric_limits<double>::infinity();
        return num / lo;
    }
};

}  // namespace detail

// Best (lowest) two-component cut with at most two cut points per edge.
// Positions are seeded on a joint grid (16 points per cut coordinate when
// affordable) and polished by coordinate descent; because the objective has
// kinks along the mass-balance surface where single-coordinate moves stall,
// stalled sweeps fall back to pairwise joint moves. The result is an upper
// estimate of the infimum.
inline CheegerEstimate cheeger_search(const MetricGraph& g, const EdgeWaveFunction* weight) {
    const auto configs = detail::enumerate_configs(g);
    if (configs.empty()) throw GraphError("no two-component cut exists");
    constexpr double kEdgeMargin = 1e-9;   // cut points stay strictly interior
    constexpr double kPosTol = 1e-8;
    CheegerEstimate best;
    best.value = std::numeric_limits<double>::infinity();
    best.weighted = weight != nullptr;
    std::vector<PointOnGraph> best_points;

    for (const auto& cfg : configs) {
        detail::ConfigObjective objective;
        objective.init(g, weight, cfg);
        const int nc = objective.nc;
        const auto& len = objective.len;
        std::vector<double> pos(nc);
        auto bounds = [&](int i, const std::vector<double>& p, double& lo, double& hi) {
            lo = kEdgeMargin * len[i];
            hi = len[i] * (1 - kEdgeMargin);
            if (cfg.double_cut) {
                if (i == 0) hi = std::min(hi, p[1] - 1e-10 * len[i]);
                else lo = std::max(lo, p[0] + 1e-10 * len[i]);
            }
        };
        // joint grid seed
        {
            const int per_axis = nc <= 3 ? 16 : nc == 4 ? 11 : nc == 5 ? 7 : nc == 6 ? 5 : 3;
            std::vector<int> idx(nc, 1);
            double best_seed = std::numeric_limits<double>::infinity();
            std::vector<double> cand(nc), seed;
            for (;;) {
                bool ordered = true;
                for (int i = 0; i < nc; ++i)
                    cand[i] = len[i] * (kEdgeMargin +
                                        (1 - 2 * kEdgeMargin) * (idx[i] - 1) / (per_axis - 1.0));
                if (cfg.double_cut && cand[0] >= cand[1]) ordered = false;
                if (ordered) {
                    const double v = objective(cand);
                    if (v < best_seed) {
                        best_seed = v;
                        seed = cand;
                    }
                }
                int i = 0;
                while (i < nc && ++idx[i] > per_axis) idx[i++] = 1;
                if (i == nc) break;
            }
            pos = seed;
        }
        double value = objective(pos);
        std::vector<double> history{value};

        auto polish_coordinate = [&](int i) {
            double lo, hi;
            bounds(i, pos, lo, hi);
            if (lo >= hi) return;
            double bx = pos[i], bv = value;
            for (int j = 0; j < 16; ++j) {
                const double x = lo + (hi - lo) * j / 15.0;
                pos[i] = x;
                const double v = objective(pos);
                if (v < bv) {
                    bv = v;
                    bx = x;
                }
            }
            const double span = (hi - lo) / 15.0;
            long evals = 0;
            const double xstar = detail::golden_min(
                [&](double x) {
                    pos[i] = x;
                    return objective(pos);
                },
                std::max(lo, bx - span), std::min(hi, bx + span), kPosTol, evals);
            pos[i] = xstar;
            if (objective(pos) > bv) pos[i] = bx;
            value = objective(pos);
        };
        bool pairs_exhausted = false;
        for (int sweep = 0; sweep < 40; ++sweep) {
            const double before = value;
            for (int i = 0; i < nc; ++i) polish_coordinate(i);
            if (nc >= 2 && !pairs_exhausted && before - value < 1e-10 * std::max(1.0, value)) {
                const double pre_pair = value;
                // pairwise joint moves walk along balance kinks
                for (int i = 0; i < nc; ++i)
                    for (int j = i + 1; j < nc; ++j) {
                        const double save_i = pos[i], save_j = pos[j];
                        double bi = save_i, bj = save_j, bv = value;
                        for (int a = 0; a < 14; ++a)
                            for (int b = 0; b < 14; ++b) {
                                pos[i] = len[i] * (kEdgeMargin +
                                                   (1 - 2 * kEdgeMargin) * a / 13.0);
                                pos[j] = len[j] * (kEdgeMargin +
                                                   (1 - 2 * kEdgeMargin) * b / 13.0);
                                if (cfg.double_cut && pos[0] >= pos[1]) continue;
                                const double v = objective(pos);
                                if (v < bv) {
                                    bv = v;
                                    bi = pos[i];
                                    bj = pos[j];
                                }
                            }
                        pos[i] = bi;
                        pos[j] = bj;
                        value = objective(pos);
                        polish_coordinate(i);
                        polish_coordinate(j);
                    }
                if (pre_pair - value < 1e-9 * std::max(1.0, value)) pairs_exhausted = true;
            }
            history.push_back(std::min(value, history.back()));
            if (before - value < 1e-13 * std::max(1.0, value)) break;
        }
        if (value < best.value) {
            best.value = value;
            best.history = history;
            best_points = detail::config_points(g, cfg, pos);
        }
    }
    best.value = evaluate_cut(g, weight, best_points, &best.cut);
    if (!best.history.empty()) best.history.back() = std::min(best.history.back(), best.value);
    return best;
}

// Exhaustive discretized cut problem over the same cut class as the search:
// cut points on the n-grid of each edge, at most two per edge, exactly two
// components. The grid includes the edge endpoints as position limits of each
// configuration (the value the continuous search approaches when an optimal
// cut slides into a vertex), so boundary optima are represented exactly.
// Masses are exact closed-form integrals between grid nodes. Ground truth for
// cheeger_search on small graphs.
inline double cheeger_oracle(const MetricGraph& g, const EdgeWaveFunction* weight, int n) {
    if (n < 8) throw GraphError("oracle needs n >= 8 segments per edge");
    if (g.edge_count() > 8) throw GraphError("graph too large for exhaustive oracle (cap E <= 8)");
    const int E = g.edge_count();
    // prefix masses and node weights on each edge
    std::vector<std::vector<double>> prefix(E), wval(E);
    for (int e = 0; e < E; ++e) {
        const double l = g.edge(e).length;
        prefix[e].resize(n + 1);
        wval[e].resize(n + 1, 1.0);
        prefix[e][0] = 0;
        for (int j = 1; j <= n; ++j) {
            const double x0 = l * (j - 1) / n, x1 = l * j / n;
            prefix[e][j] =
                prefix[e][j - 1] + (weight ? wave_mass(g, *weight, e, x0, x1) : (x1 - x0));
        }
        if (weight)
            for (int j = 0; j <= n; ++j) {
                const double v = weight->value(e, l * j / n);
                wval[e][j] = v * v;
            }
    }
    const auto configs = detail::enumerate_configs(g);
    // enumeration budget (documented cap)
    double work = 0;
    for (const auto& cfg : configs) {
        if (cfg.double_cut) work += 0.5 * (n + 1) * (n + 1);
        else work += std::pow(n + 1, static_cast<double>(cfg.edges.size()));
    }
    if (work > 6e8) throw GraphError("graph too large for exhaustive oracle (position budget)");

    double best = std::numeric_limits<double>::infinity();
    for (const auto& cfg : configs) {
        if (cfg.double_cut) {
            // the cut-off middle segment against the rest of the graph
            const int e = cfg.edges[0];
            double rest = 0;
            for (int f = 0; f < E; ++f)
                if (f != e) rest += prefix[f][n];
            for (int j1 = 0; j1 < n; ++j1)
                for (int j2 = j1 + 1; j2 <= n; ++j2) {
                    const double middle = prefix[e][j2] - prefix[e][j1];
                    const double outer = rest + prefix[e][n] - middle;
                    const double lo = std::min(middle, outer);
                    if (!(lo > 0)) continue;
                    const double num = wval[e][j1] + wval[e][j2];
                    best = std::min(best, num / lo);
                }
            continue;
        }
        // component sides are position-independent, so the product
        // enumeration over grid positions is separable per edge
        const int c = static_cast<int>(cfg.edges.size());
        std::vector<double> mid;
        for (int e : cfg.edges) mid.push_back(g.edge(e).length / 2);
        auto ev = detail::evaluate_cut_impl(g, nullptr, detail::config_points(g, cfg, mid), true);
        double base[2] = {0, 0};
        std::vector<int> lo_side(c), hi_side(c);
        for (const auto& seg : ev.segments) {
            auto it = std::find(cfg.edges.begin(), cfg.edges.end(), seg.edge);
            if (it == cfg.edges.end()) {
                base[seg.component] += prefix[seg.edge][n];
            } else {
                const int i = static_cast<int>(it - cfg.edges.begin());
                if (seg.x0 == 0) lo_side[i] = seg.component;
                else hi_side[i] = seg.component;
            }
        }
        std::vector<int> idx(c, 0);
        for (;;) {
            double mass[2] = {base[0], base[1]};
            double num = 0;
            for (int i = 0; i < c; ++i) {
                const int e = cfg.edges[i];
                mass[lo_side[i]] += prefix[e][idx[i]];
                mass[hi_side[i]] += prefix[e][n] - prefix[e][idx[i]];
                num += wval[e][idx[i]];
            }
            const double lo = std::min(mass[0], mass[1]);
            if (lo > 0) best = std::min(best, num / lo);
            int i = 0;
            while (i < c && ++idx[i] > n) idx[i++] = 0;
            if (i == c) break;
        }
    }
    return best;
}

// Oracle value converged in n: doubles the grid until two consecutive levels
// agree to 0.5%, starting at 64 and capped at 512.
inline double cheeger_oracle_converged(const MetricGraph& g, const EdgeWaveFunction* weight) {
    double prev = cheeger_oracle(g, weight, 64);
    for (int n = 128; n <= 512; n *= 2) {
        const double cur = cheeger_oracle(g, weight, n);
        if (std::abs(prev - cur) <= 5e-3 * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

// The graph is metrically a segment (path) after suppressing artificial
// vertices; the upper Cheeger bound 1/ell0 does not apply to those.
inline bool is_path_graph(const MetricGraph& g) {
    const MetricGraph s = suppress_artificial(g);
    if (s.edge_count() - s.vertex_count() + 1 != 0) return false;
    for (int v = 0; v < s.vertex_count(); ++v)
        if (s.degree(v) > 2) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Gamma_1: trim, from each Dirichlet vertex, the interval where the ground
// state still rises.

struct TrimInterval {
    int dirichlet_vertex;
    int edge;
    double trim_len;
    bool whole_edge;
};

struct Gamma1Node {
    int orig_vertex;  // -1 for a trim point
    PointOnGraph point;
};

struct ChainPiece {
    int edge;
    double x0, x1;  // traversed x0 -> x1 in edge coordinates (reversed allowed)
};

struct Gamma1Chain {
    std::vector<ChainPiece> pieces;
    double length = 0;
    int node_a = -1, node_b = -1;
    double phase_a = 0, phase_b = 0;  // arc phase entering the chain from each end
    double amplitude = 0;
};

struct Gamma1 {
    bool single_point = false;
    PointOnGraph point{};  // the single point, when degenerate
    std::vector<TrimInterval> trims;
    std::vector<Gamma1Node> nodes;
    std::vector<Gamma1Chain> chains;
    double length = 0;
};

namespace detail {

// Phase of the positive arc at position x of edge e, measured in the walking
// direction (dir=+1: increasing x). Normalized into [0, pi].
inline double arc_phase(const EdgeWaveFunction& f, int e, double x, int dir) {
    const double raw = f.sigma * x + f.edges[e].phase;
    double p = dir > 0 ? raw : std::numbers::pi - raw;
    p = std::fmod(p, 2 * std::numbers::pi);
    if (p < 0) p += 2 * std::numbers::pi;
    // positive arcs live in [0, pi]; fold numerical overshoot back
    if (p > std::numbers::pi) p = 2 * std::numbers::pi - p;
    return p;
}

}  // namespace detail

inline Gamma1 gamma1(const MetricGraph& g, const EdgeWaveFunction& phi1) {
    if (!g.has_dirichlet()) throw GraphError("gamma1 requires at least one Dirichlet vertex");
    if (!(phi1.sigma > 0)) throw GraphError("gamma1 requires the ground state (sigma > 0)");
    const double pi = std::numbers::pi;
    const double sigma = phi1.sigma;
    const int E = g.edge_count();
    Gamma1 out;
    std::vector<double> lo(E, 0), hi(E);
    for (int e = 0; e < E; ++e) hi[e] = g.edge(e).length;

    for (int d : g.dirichlet_vertices()) {
        const HalfEdge h = g.incidence(d)[0];
        const double l = g.edge(h.edge).length;
        // phase at the Dirichlet end, walking into the edge; snap to 0 mod pi
        const double ph = detail::arc_phase(phi1, h.edge, h.end == 0 ? 0.0 : l, h.end == 0 ? +1 : -1);
        const double theta = std::remainder(ph, pi);
        double t = (pi / 2 - theta) / sigma;
        const bool whole = t >= l * (1 - 1e-12);
        if (whole) t = l;
        out.trims.push_back({d, h.edge, t, whole});
        if (h.end == 0) lo[h.edge] = std::max(lo[h.edge], t);
        else hi[h.edge] = std::min(hi[h.edge], l - t);
    }

    double remaining = 0;
    for (int e = 0; e < E; ++e) remaining += std::max(0.0, hi[e] - lo[e]);
    out.length = remaining;

    const double eps_len = 1e-10 * g.total_length();
    if (remaining <= eps_len) {
        out.single_point = true;
        // the surviving point: a non-Dirichlet vertex if one exists, else the
        // meeting point of the two trims on a doubly-Dirichlet interval
        int vkeep = -1;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.vertex(v).bc != BC::dirichlet) vkeep = v;
        if (vkeep >= 0) out.point = g.vertex_point(vkeep);
        else out.point = {0, lo[0]};
        return out;
    }

    // Gamma1-degree of each vertex: incident edge sides still touching it
    auto side_alive = [&](const HalfEdge& h) {
        if (hi[h.edge] - lo[h.edge] <= 0) return false;
        return h.end == 0 ? lo[h.edge] == 0.0 : hi[h.edge] == g.edge(h.edge).length;
    };
    std::vector<int> g1deg(g.vertex_count(), 0);
    for (int v = 0; v < g.vertex_count(); ++v)
        for (const HalfEdge& h : g.incidence(v))
            if (side_alive(h)) g1deg[v]++;

    // nodes: surviving vertices that are not pass-through points of the arc.
    // The arc continues across original degree-2 standard vertices only.
    std::vector<int> node_of_vertex(g.vertex_count(), -1);
    auto passthrough = [&](int v) {
        return g.vertex(v).bc == BC::standard && g.degree(v) == 2 && g1deg[v] == 2;
    };
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.vertex(v).bc == BC::dirichlet) continue;
        if (g1deg[v] == 0 && remaining > eps_len) continue;  // fully trimmed neighborhoods
        if (passthrough(v)) continue;
        node_of_vertex[v] = static_cast<int>(out.nodes.size());
        out.nodes.push_back({v, g.vertex_point(v)});
    }

    // walk chains
    std::vector<char> used(E, 0);
    auto walk = [&](int start_node, HalfEdge h) {
        Gamma1Chain chain;
        chain.node_a = start_node;
        chain.amplitude = phi1.edges[h.edge].amplitude;
        {
            const double x_enter = h.end == 0 ? lo[h.edge] : hi[h.edge];
            chain.phase_a = detail::arc_phase(phi1, h.edge, x_enter, h.end == 0 ? +1 : -1);
        }
        for (;;) {
            used[h.edge] = 1;
            const double a = h.end == 0 ? lo[h.edge] : hi[h.edge];
            const double b = h.end == 0 ? hi[h.edge] : lo[h.edge];
            chain.pieces.push_back({h.edge, a, b});
            chain.length += std::abs(b - a);
            const bool reaches_vertex =
                h.end == 0 ? hi[h.edge] == g.edge(h.edge).length : lo[h.edge] == 0.0;
            if (!reaches_vertex) {
                // ends at a trim point
                chain.node_b = static_cast<int>(out.nodes.size());
                out.nodes.push_back({-1, {h.edge, b}});
                chain.phase_b = detail::arc_phase(phi1, h.edge, b, h.end == 0 ? -1 : +1);
                break;
            }
            const int w = g.endpoint(h.edge, 1 - h.end);
            if (node_of_vertex[w] >= 0) {
                chain.node_b = node_of_vertex[w];
                chain.phase_b = detail::arc_phase(phi1, h.edge, b, h.end == 0 ? -1 : +1);
                break;
            }
            // pass through w
            const auto& inc = g.incidence(w);
            HalfEdge next =
                (inc[0].edge == h.edge && inc[0].end == 1 - h.end) ? inc[1] : inc[0];
            h = next;
        }
        out.chains.push_back(std::move(chain));
    };
    for (size_t i = 0; i < out.nodes.size(); ++i) {  // walk() appends trim nodes
        const int ov = out.nodes[i].orig_vertex;
        if (ov < 0) continue;
        for (const HalfEdge& h : g.incidence(ov))
            if (side_alive(h) && !used[h.edge]) walk(node_of_vertex[ov], h);
    }
    // Safeguard for a surviving piece reachable from no node (cannot occur on
    // a connected graph with Dirichlet trims, but cheap to cover): walk it
    // from a fresh trim node.
    for (int e = 0; e < E; ++e) {
        if (used[e] || hi[e] - lo[e] <= 0 || lo[e] == 0.0) continue;
        const int node = static_cast<int>(out.nodes.size());
        out.nodes.push_back({-1, {e, lo[e]}});
        walk(node, {e, 0});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Harnack data

struct HarnackData {
    double m1 = 0, M1 = 0;
    Gamma1 gamma1;
    int q = 0;
    int d0 = 0;
    double sigma = 0;
    double ell_k = 0;
    double delta0 = 0;
    double b = 0;
    double per_graph_bound = 0;
    double universal_bound = 0;
    double universal_log = 0;  // log of the universal bound (underflow-safe)
};

namespace detail {

// sin(delta) lower bound from tan(delta) >= tan(u)/m, in the numerically
// stable form sin(u)/hypot(sin u, m cos u).
inline double phase_ratio(double u, double m) {
    const double s = std::sin(u), c = std::cos(u);
    return s / std::hypot(s, m * c);
}

}  // namespace detail

// Universal Harnack constant c(L, ell0): worst-case phase ratio to the
// worst-case path length. Returns its log; defined for L/ell0 >= 2.
inline double universal_harnack_log(double L, double ell0) {
    const int floor_ratio = static_cast<int>(std::floor(L / ell0 + 1e-9));
    const int qstar = std::max(floor_ratio, 1);
    const int mstar = std::max(floor_ratio - 1, 1);
    const double r = detail::phase_ratio(std::numbers::pi * ell0 / (2 * L), mstar);
    return qstar * std::log(r);
}

inline HarnackData harnack(const MetricGraph& g, const EdgeWaveFunction& phi1) {
    HarnackData out;
    out.gamma1 = gamma1(g, phi1);
    if (out.gamma1.single_point)
        throw GraphError("Gamma1 is a single point; use the closed-form exceptional cases");
    const Gamma1& g1 = out.gamma1;
    out.sigma = phi1.sigma;
    const double pi = std::numbers::pi;

    // m1 at nodes (arc minima sit at chain endpoints), M1 over whole chains
    int argmin_node = -1;
    double m1 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < g1.nodes.size(); ++i) {
        const double v = phi1.value(g1.nodes[i].point);
        if (v < m1) {
            m1 = v;
            argmin_node = static_cast<int>(i);
        }
    }
    double M1 = 0;
    int argmax_chain = -1, argmax_node = -1;
    for (size_t c = 0; c < g1.chains.size(); ++c) {
        const auto& ch = g1.chains[c];
        const double lo_phase = ch.phase_a;
        const double hi_phase = ch.phase_a + out.sigma * ch.length;
        double mx;
        bool interior = lo_phase < pi / 2 && hi_phase > pi / 2;
        if (interior) mx = ch.amplitude;
        else mx = std::max(ch.amplitude * std::sin(lo_phase), ch.amplitude * std::sin(hi_phase));
        if (mx > M1) {
            M1 = mx;
            if (interior) {
                argmax_chain = static_cast<int>(c);
                argmax_node = -1;
            } else {
                argmax_chain = -1;
                argmax_node =
                    ch.amplitude * std::sin(lo_phase) >= ch.amplitude * std::sin(hi_phase)
                        ? ch.node_a
                        : ch.node_b;
            }
        }
    }
    out.m1 = m1;
    out.M1 = M1;

    // q: edge count of a shortest path between the extremal locations
    const int N = static_cast<int>(g1.nodes.size());
    std::vector<std::vector<int>> adj(N);
    for (const auto& ch : g1.chains) {
        adj[ch.node_a].push_back(ch.node_b);
        adj[ch.node_b].push_back(ch.node_a);
    }
    std::vector<int> dist(N, -1);
    std::queue<int> bfs;
    bfs.push(argmin_node);
    dist[argmin_node] = 0;
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int w : adj[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                bfs.push(w);
            }
    }
    if (argmax_node >= 0) {
        out.q = dist[argmax_node] < 0 ? N : dist[argmax_node];
    } else {
        const auto& ch = g1.chains[argmax_chain];
        int da = dist[ch.node_a], db = dist[ch.node_b];
        if (da < 0) da = N;
        if (db < 0) db = N;
        out.q = std::min(da, db) + 1;
    }

    // minimal phase and its vertex
    double delta0 = pi / 2;
    int v0 = -1;
    for (const auto& ch : g1.chains) {
        if (ch.phase_a < delta0 && g1.nodes[ch.node_a].orig_vertex >= 0) {
            delta0 = ch.phase_a;
            v0 = g1.nodes[ch.node_a].orig_vertex;
        }
        if (ch.phase_b < delta0 && g1.nodes[ch.node_b].orig_vertex >= 0) {
            delta0 = ch.phase_b;
            v0 = g1.nodes[ch.node_b].orig_vertex;
        }
    }
    out.delta0 = delta0;

    if (v0 < 0) {
        // all minimal phases at trim points: everything is at the arc top
        out.d0 = 0;
        out.b = std::numeric_limits<double>::infinity();
        out.per_graph_bound = std::exp(out.q * std::log(std::sin(delta0)));
    } else {
        out.d0 = g.degree(v0);
        // continuation edge: maximal derivative pointing into v0
        double best_inflow = -std::numeric_limits<double>::infinity();
        int ek = -1;
        for (const HalfEdge& h : g.incidence(v0)) {
            const double l = g.edge(h.edge).length;
            const double inflow =
                h.end == 0 ? -phi1.derivative(h.edge, 0.0) : phi1.derivative(h.edge, l);
            if (inflow > best_inflow) {
                best_inflow = inflow;
                ek = h.edge;
            }
        }
        out.ell_k = g.edge(ek).length;
        double u = out.sigma * out.ell_k;
        if (u >= pi / 2) u = pi / 2;  // cannot occur for the max-inflow edge; guards rounding
        const int m = std::max(out.d0 - 1, 1);
        out.b = std::tan(u) / m;
        const double r = detail::phase_ratio(u, m);
        out.per_graph_bound = std::exp(out.q * std::log(r));
    }

    GraphMetrics mt = metrics(g);
    out.universal_log = universal_harnack_log(mt.L, mt.ell0);
    out.universal_bound = std::exp(out.universal_log);
    return out;
}

// ---------------------------------------------------------------------------
// envelope check: c1 * Upsilon <= phi1 <= sqrt(2/ell0) * Upsilon

struct EnvelopePoint {
    PointOnGraph point;
    double phi = 0, ups = 0;
    double lower_margin = 0, upper_margin = 0;
};

struct EnvelopeReport {
    double c1 = 0;
    double upper_coef = 0;
    bool pass = false;
    int points = 0;
    EnvelopePoint worst_lower, worst_upper;
};

inline EnvelopeReport envelope_check(const MetricGraph& g, const EdgeWaveFunction& phi1,
                                     int points_per_edge) {
    if (!g.has_dirichlet()) throw GraphError("envelope check requires Dirichlet vertices");
    const GraphMetrics mt = metrics(g);
    EnvelopeReport rep;
    rep.upper_coef = std::sqrt(2.0 / mt.ell0);
    const Gamma1 g1 = gamma1(g, phi1);
    if (g1.single_point) {
        rep.c1 = 0.5 * std::sqrt(2.0 / mt.L);
    } else {
        rep.c1 = std::exp(universal_harnack_log(mt.L, mt.ell0)) * std::sqrt(2.0 / mt.L) *
                 std::sin(std::numbers::pi * mt.ell0 / (4 * mt.L));
    }
    const auto vdist = vertex_distances(g);
    rep.worst_lower.lower_margin = std::numeric_limits<double>::infinity();
    rep.worst_upper.upper_margin = std::numeric_limits<double>::infinity();
    for (int e = 0; e < g.edge_count(); ++e) {
        const double l = g.edge(e).length;
        for (int i = 0; i < points_per_edge; ++i) {
            const PointOnGraph p{e, l * (i + 0.5) / points_per_edge};
            const double ups = upsilon(g, p, mt.ell0, &vdist);
            const double phi = phi1.value(p);
            const double lower = phi - rep.c1 * ups;
            const double upper = rep.upper_coef * ups - phi;
            ++rep.points;
            if (lower < rep.worst_lower.lower_margin)
                rep.worst_lower = {p, phi, ups, lower, upper};
            if (upper < rep.worst_upper.upper_margin)
                rep.worst_upper = {p, phi, ups, lower, upper};
        }
    }
    rep.pass = rep.worst_lower.lower_margin >= -1e-10 && rep.worst_upper.upper_margin >= -1e-10;
    return rep;
}

}  // namespace qgraph
