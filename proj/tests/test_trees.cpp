#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgraph/corpus.hpp"
#include "qgraph/trees.hpp"

using namespace qgraph;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

std::string canon(const MetricGraph& g) {
    std::vector<std::string> rows;
    for (const auto& e : g.edges()) {
        std::string a = g.vertex(e.from).id + (g.vertex(e.from).bc == BC::dirichlet ? "D" : "S");
        std::string b = g.vertex(e.to).id + (g.vertex(e.to).bc == BC::dirichlet ? "D" : "S");
        if (b < a) std::swap(a, b);
        char buf[64];
        snprintf(buf, sizeof buf, "%.13e", e.length);
        rows.push_back(a + "|" + b + "|" + buf);
    }
    std::sort(rows.begin(), rows.end());
    std::string out;
    for (auto& r : rows) out += r + ";";
    return out;
}

[[maybe_unused]] EdgeWaveFunction ground_state(const MetricGraph& g) {
    const Spectrum spec = eigenvalues(g, 1);
    return eigenfunction(g, std::sqrt(spec.lambda(1)));
}
}  // namespace

TEST_CASE("decomposition base cases") {
    CHECK(leaf_pair_decomposition(make_interval(1.0).graph).trims.empty());
    const auto d3 = leaf_pair_decomposition(make_equilateral_star(3, 1.0).graph);
    CHECK(d3.trims.size() == 1);  // one pair removed, a segment of two edges remains? no: one edge
    CHECK(d3.base.edge_count() == 1);
    const auto d15 = leaf_pair_decomposition(make_star15(5).graph);
    CHECK(d15.trims.size() == 2);
    CHECK_THROWS_AS(leaf_pair_decomposition(make_balloon(3).graph), GraphError);
}

TEST_CASE("replay reconstructs the suppressed input") {
    Rng rng(8);
    for (int seed = 0; seed < 30; ++seed) {
        const MetricGraph t = make_random_tree(3 + seed % 10, 900 + seed).graph;
        const auto d = leaf_pair_decomposition(t);
        CHECK(canon(replay_decomposition(d)) == canon(d.suppressed));
    }
    // stress: trimming creates chains that hide leaf pairs
    std::vector<Vertex> vs{{"c", BC::standard}};
    std::vector<Edge> es;
    int vi = 1;
    for (int i = 0; i < 3; ++i) {
        vs.push_back({"m" + std::to_string(i), BC::standard});
        es.push_back({"cm" + std::to_string(i), 0, vi, 0.5});
        const int mi = vi++;
        for (int j = 0; j < 3; ++j) {
            vs.push_back({"x" + std::to_string(i) + std::to_string(j), BC::dirichlet});
            es.push_back({"e" + std::to_string(i) + std::to_string(j), mi, vi++, 0.3 + 0.1 * j});
        }
    }
    const MetricGraph spider(vs, es);
    const auto d = leaf_pair_decomposition(spider);
    CHECK(canon(replay_decomposition(d)) == canon(d.suppressed));
    CHECK(validate_affine_triple(spider, affine_triple(spider)).ok);
}

TEST_CASE("affine triple on the segment") {
    const MetricGraph g = make_interval(1.0).graph;
    const AffineTriple t = affine_triple(g);
    std::array<int, 3> sl = t.slopes[0];
    std::sort(sl.begin(), sl.end());
    CHECK(sl == std::array<int, 3>{-1, 0, 1});
    CHECK(validate_affine_triple(g, t).ok);
}

TEST_CASE("affine triple invariants on random trees") {
    for (int seed = 0; seed < 60; ++seed) {
        const MetricGraph t = make_random_tree(2 + seed % 11, 4000 + seed).graph;
        const AffineTriple tri = affine_triple(t);
        const TripleValidation val = validate_affine_triple(t, tri);
        INFO("seed " << seed << " continuity " << val.continuity_residual << " kirchhoff "
                     << val.kirchhoff_violations << " cover " << val.cover_violations);
        CHECK(val.ok);
        CHECK(val.continuity_residual == 0.0);
    }
    // trees with artificial vertices pull the triple back through the chains
    MetricGraph t = make_random_tree(6, 77).graph;
    t = insert_artificial_vertex(t, {0, t.edge(0).length / 3});
    t = insert_artificial_vertex(t, {2, t.edge(2).length / 2});
    CHECK(validate_affine_triple(t, affine_triple(t)).ok);
}

TEST_CASE("current validation accepts harmonic flows and rejects circulations") {
    {
        const MetricGraph g = make_random_graph(6, 1, 13).graph;
        REQUIRE(g.dirichlet_vertices().size() >= 2);
        std::vector<double> bv;
        for (size_t i = 0; i < g.dirichlet_vertices().size(); ++i)
            bv.push_back(static_cast<double>(i + 1));
        const CurrentFunction cur = current_from_affine(g, harmonic_potential(g, bv));
        const CurrentValidation v = validate_current(g, cur);
        CHECK(v.conservation_ok);
        CHECK(v.potential_ok);
    }
    {
        // pure circulation on the balloon: conservation holds, no potential
        const MetricGraph g = make_balloon(3).graph;
        CurrentFunction circ;
        circ.eta.assign(4, 0.0);
        circ.orientation.assign(4, 1);
        circ.eta[g.edge_index("p1")] = 1.0;
        circ.eta[g.edge_index("p2")] = 1.0;
        circ.orientation[g.edge_index("p2")] = -1;
        const CurrentValidation v = validate_current(g, circ);
        CHECK(v.conservation_ok);
        CHECK_FALSE(v.potential_ok);
    }
    {
        // self-loop currents have no single-valued potential
        const MetricGraph g = make_tadpole(1.5, 1.0).graph;
        CurrentFunction loop;
        loop.eta = {1.0, 0.0};
        loop.orientation = {1, 1};
        if (g.edge(0).from != g.edge(0).to) std::swap(loop.eta[0], loop.eta[1]);
        const CurrentValidation v = validate_current(g, loop);
        CHECK_FALSE(v.potential_ok);
    }
}

TEST_CASE("current gap bound instances") {
    // interval with eta = 1: bound is exactly 4 lambda1, consistent with
    // lambda2 <= 5 lambda1
    const MetricGraph g = make_interval(1.0).graph;
    const Spectrum spec = eigenvalues(g, 2);
    const EdgeWaveFunction phi1 = eigenfunction(g, std::sqrt(spec.lambda(1)));
    CurrentFunction one{{1.0}, {1}};
    const double bound = current_gap_bound(g, one, phi1);
    CHECK(bound == Approx(4 * spec.lambda(1)).epsilon(1e-9));
    CHECK(spec.lambda(2) - spec.lambda(1) <= bound * (1 + 1e-12));
    const BoundCheck c = current_gap_check(g, one, phi1, spec.lambda(2) - spec.lambda(1));
    CHECK(c.satisfied);
    CurrentFunction zero{{0.0}, {1}};
    CHECK_THROWS_AS(current_gap_bound(g, zero, phi1), GraphError);
}

TEST_CASE("random admissible currents never beat the gap") {
    Rng rng(55);
    for (const CorpusEntry& ce : {make_random_tree(6, 70), make_random_graph(6, 1, 71),
                                  make_star4(0.5)}) {
        if (ce.graph.dirichlet_vertices().size() < 2) continue;
        const Spectrum spec = eigenvalues(ce.graph, 2);
        const EdgeWaveFunction phi1 = eigenfunction(ce.graph, std::sqrt(spec.lambda(1)));
        const double gap = spec.lambda(2) - spec.lambda(1);
        int tested = 0;
        for (int t = 0; t < 100 && tested < 100; ++t) {
            std::vector<double> bv;
            for (size_t i = 0; i < ce.graph.dirichlet_vertices().size(); ++i)
                bv.push_back(rng.uniform(-1, 1));
            const CurrentFunction cur =
                current_from_affine(ce.graph, harmonic_potential(ce.graph, bv));
            double mx = 0;
            for (double e : cur.eta) mx = std::max(mx, e);
            if (mx < 1e-9) continue;
            REQUIRE(validate_current(ce.graph, cur).ok());
            ++tested;
            INFO(ce.name << " trial " << t);
            CHECK(current_gap_bound(ce.graph, cur, phi1) >= gap * (1 - 1e-9));
        }
        CHECK(tested > 50);
    }
}

TEST_CASE("triple currents aggregate to the ratio-5 bound") {
    // sum over the triple: eta_a = |g_a'| gives
    // sum ||eta phi||^2 = 2||phi||^2 and sum ||eta phi'||^2 = 2 lambda1
    const MetricGraph t = make_random_tree(7, 90).graph;
    const AffineTriple tri = affine_triple(t);
    const Spectrum spec = eigenvalues(t, 2);
    const EdgeWaveFunction phi1 = eigenfunction(t, std::sqrt(spec.lambda(1)));
    double num = 0, den = 0;
    for (int a = 0; a < 3; ++a) {
        const CurrentFunction cur = current_from_affine(t, tri.component(a));
        REQUIRE(validate_current(t, cur).ok());
        for (int e = 0; e < t.edge_count(); ++e) {
            const double w2 = cur.eta[e] * cur.eta[e];
            den += w2 * wave_mass(t, phi1, e, 0, t.edge(e).length);
        }
        num += current_gap_bound(t, cur, phi1) / 4 *
               [&] {
                   double d = 0;
                   for (int e = 0; e < t.edge_count(); ++e)
                       d += cur.eta[e] * cur.eta[e] * wave_mass(t, phi1, e, 0, t.edge(e).length);
                   return d;
               }();
    }
    CHECK(den == Approx(2.0).epsilon(1e-9));              // 2 ||phi1||^2
    CHECK(4 * num / den == Approx(4 * spec.lambda(1)).epsilon(1e-9));
    CHECK(spec.lambda(2) / spec.lambda(1) <= 5 * (1 + 1e-9));
}

TEST_CASE("saguaro constructions") {
    const MetricGraph star = make_equilateral_star(3, 1.0).graph;
    const AffineTriple tri = affine_triple(star);
    // k = 1 is the identity
    const Saguaro s1 = build_saguaro(star, {1, 1, 1});
    CHECK(canon(s1.graph) == canon(star));
    // uniform k = 3: lifted triple keeps all invariants, tree bounds hold
    const Saguaro s3 = build_saguaro(star, {3, 3, 3});
    CHECK(s3.graph.edge_count() == 9);
    const AffineTriple lifted = lift_triple(s3, tri);
    CHECK(validate_affine_triple(s3.graph, lifted).ok);
    const Spectrum spec = eigenvalues(s3.graph, 2);
    CHECK(spec.lambda(2) / spec.lambda(1) <= 2 + std::sqrt(5.0) + 1e-9);
    for (const auto& cur : saguaro_currents(s3, tri)) {
        const CurrentValidation v = validate_current(s3.graph, cur);
        CHECK(v.conservation_ok);
        CHECK(v.potential_ok);
    }
    // mixed multiplicities: ratio <= 1 + 4 kmax^2/kmin^2
    MetricGraph path({{"d1", BC::dirichlet}, {"i1", BC::standard}, {"i2", BC::standard},
                      {"d2", BC::dirichlet}},
                     {{"a", 0, 1, 1.0}, {"b", 1, 2, 1.0}, {"c", 2, 3, 1.0}});
    const Saguaro mixed = build_saguaro(path, {2, 4, 2});
    const Spectrum mspec = eigenvalues(mixed.graph, 2);
    const BoundCheck ratio = saguaro_ratio_check(mixed, mspec);
    CHECK(ratio.rhs == Approx(17.0));
    CHECK(ratio.satisfied);
    CHECK_THROWS_AS(build_saguaro(path, {0, 1, 1}), GraphError);
    CHECK_THROWS_AS(lift_triple(mixed, affine_triple(path)), GraphError);
}

TEST_CASE("ornamented trees") {
    // single Dirichlet pendant edge: lambda1(P) = pi^2/(4 l^2)
    Pendant p;
    p.graph = MetricGraph({{"q", BC::standard}, {"d", BC::dirichlet}}, {{"e", 0, 1, 0.4}});
    p.attach_id = "q";
    const Spectrum ps = eigenvalues(p.graph, 1);
    CHECK(ps.lambda(1) == Approx(pi * pi / (4 * 0.16)).epsilon(1e-8));

    const MetricGraph base = make_star15(3).graph;  // ellmax = 2
    const OrnamentedTree ot = make_ornamented(base, {p}, {"c"});
    const auto checks = ornamented_check(ot);
    for (const auto& c : checks) {
        INFO(c.name);
        CHECK(c.satisfied);
    }
    // pendant without a Dirichlet vertex is rejected
    Pendant bad;
    bad.graph = MetricGraph({{"q", BC::standard}, {"n", BC::standard}}, {{"e", 0, 1, 0.4}});
    bad.attach_id = "q";
    CHECK_THROWS_AS(make_ornamented(base, {bad}, {"c"}), GraphError);
    // generated instances satisfy the size condition by construction
    for (int seed = 1; seed <= 5; ++seed) {
        const OrnamentedTree rot = make_random_ornamented(seed);
        const auto rchecks = ornamented_check(rot);
        for (const auto& c : rchecks) {
            INFO("seed " << seed << " " << c.name);
            CHECK(c.satisfied);
        }
    }
    // negative control: the balloon ratio exceeds 5
    const Spectrum bs = eigenvalues(make_balloon(3).graph, 2);
    CHECK(bs.lambda(2) / bs.lambda(1) > 5.0);
}
