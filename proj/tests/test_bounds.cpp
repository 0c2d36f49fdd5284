#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qgraph/bounds.hpp"
#include "qgraph/corpus.hpp"

using namespace qgraph;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("hp_root algebra") {
    CHECK(hp_root({1.0}, 1) == Approx(5.0).epsilon(1e-12));        // lambda/(s-lambda) = 1/4
    CHECK(hp_root({1.0, 1.0}, 2) == Approx(5.0).epsilon(1e-12));   // 2/(s-1) = 1/2
    // residual below 1e-10 and root inside the bracket
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> lam;
        double cur = rng.uniform(0.5, 2);
        const int n = 1 + rng.below(6);
        for (int j = 0; j < n; ++j) {
            lam.push_back(cur);
            cur += rng.uniform(0.0, 3.0);
        }
        const double s = hp_root(lam, n);
        double g = 0, sum = 0;
        for (int j = 0; j < n; ++j) {
            g += lam[j] / (s - lam[j]);
            sum += lam[j];
        }
        CHECK(std::abs(g - n / 4.0) <= 1e-10);
        CHECK(s > lam[n - 1]);
        CHECK(s <= lam[n - 1] + 4 * sum / n + 1);
    }
    CHECK_THROWS_AS(hp_root({-1.0}, 1), GraphError);
}

TEST_CASE("hs_check reduces to Hile-Protter at f = 1") {
    // equality at the root: n=1, lambda=1, z=5 gives 1 <= 4*(1/4)
    const BoundCheck c = hs_check({1.0}, 1, [](double) { return 1.0; }, "f=1", 5.0);
    CHECK(c.satisfied);
    CHECK(c.lhs == Approx(1.0));
    CHECK(c.rhs == Approx(1.0));
    // equality-side slack at the hp root on random spectra
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        std::vector<double> lam;
        double cur = rng.uniform(0.5, 2);
        const int n = 1 + rng.below(5);
        for (int j = 0; j < n; ++j) {
            lam.push_back(cur);
            cur += rng.uniform(0.1, 2.0);
        }
        const double z = hp_root(lam, n);
        const BoundCheck hc = hs_check(lam, n, [](double) { return 1.0; }, "f=1", z);
        CHECK(hc.rhs - hc.lhs >= -1e-9);
        CHECK(hc.rhs - hc.lhs <= 1e-8 * std::max(1.0, hc.lhs));
    }
    // inadmissible weight is reported, not silently skipped
    const BoundCheck bad =
        hs_check({1.0, 2.0}, 2, [](double l) { return 3.0 - l * l; }, "f=3-l^2", 2.5);
    CHECK(bad.applicability == Applicability::excluded);
    CHECK_FALSE(bad.reason.empty());
}

TEST_CASE("quadratic moment identities") {
    // D1 = 4 lambda1^2 and the n=1 bound lambda2 <= 5 lambda1
    const QuadraticGap qg = quadratic_gap({1.0}, 1);
    CHECK(qg.Dn == Approx(4.0));
    CHECK(qg.upper_on_next == Approx(5.0));
    CHECK(qg.lower_on_n == Approx(1.0));
    // the quadratic lambda3 bound is at least as strong as the Hile-Protter
    // reduction: sqrt(9a1^2-5a2) <= sqrt(9a1^2-5 l1 l2)
    Rng rng(23);
    for (int t = 0; t < 100; ++t) {
        const double l1 = rng.uniform(0.5, 3);
        const double l2 = l1 * rng.uniform(1.0, 4.9);  // inside the ratio-5 regime
        const double a1 = 0.5 * (l1 + l2), a2 = 0.5 * (l1 * l1 + l2 * l2);
        const double quad = 3 * a1 + std::sqrt(std::max(0.0, 9 * a1 * a1 - 5 * a2));
        const double hp = 3 * a1 + std::sqrt(9 * a1 * a1 - 5 * l1 * l2);
        CHECK(quad <= hp + 1e-12);
    }
}

TEST_CASE("Demirel-Harrell quadratic is division-free at z = lambda_n") {
    // multiplicities make z - lambda_j vanish; the polynomial form must cope
    const std::vector<double> lam{1.0, 1.0, 2.0};
    const BoundCheck c = dh_check(lam, 2, 1.0, "z=lo");
    CHECK(std::isfinite(c.lhs));
}

TEST_CASE("betti ratio check instances") {
    {
        const CorpusEntry ce = make_star4(0.5);
        const Spectrum spec = eigenvalues(ce.graph, 2);
        const BoundCheck c = betti_ratio_check(metrics(ce.graph), spec.lambdas, 1);
        // (2n+1+3E-2V_N-V_0)^2 = (3+12-2-4)^2 = 81 >= 9/4
        CHECK(c.rhs == Approx(81.0));
        CHECK(c.lhs == Approx(2.25).epsilon(1e-8));
        CHECK(c.satisfied);
        CHECK(c.applicability == Applicability::applicable);
    }
    {
        const CorpusEntry ce = make_balloon(3);
        const Spectrum spec = eigenvalues(ce.graph, 2);
        const BoundCheck c = betti_ratio_check(metrics(ce.graph), spec.lambdas, 1);
        // RHS = (3k+1)^2 = 100; ratio 25; flagged informational on a cycle graph
        CHECK(c.rhs == Approx(100.0));
        CHECK(c.lhs == Approx(25.0).epsilon(1e-8));
        CHECK(c.applicability == Applicability::informational);
        CHECK(c.satisfied);
    }
}

TEST_CASE("gap identity via the eigenfunction ratio") {
    // interval: f = 2 cos(pi x), ||f' phi1||^2 = 3 pi^2 by direct integration
    {
        const MetricGraph g = make_interval(1.0).graph;
        const Spectrum spec = eigenvalues(g, 2);
        const EdgeWaveFunction f1 = eigenfunction(g, pi), f2 = eigenfunction(g, 2 * pi);
        const double val = folklore_gap(g, f1, f2);
        CHECK(val == Approx(3 * pi * pi).epsilon(1e-6));
        CHECK(val == Approx(spec.lambda(2) - spec.lambda(1)).epsilon(1e-6));
    }
    {
        const MetricGraph g = make_star4(0.5).graph;
        const Spectrum spec = eigenvalues(g, 2);
        const EdgeWaveFunction f1 = eigenfunction(g, std::sqrt(spec.lambda(1)));
        const EdgeWaveFunction f2 = eigenfunction(g, std::sqrt(spec.lambda(2)));
        CHECK(folklore_gap(g, f1, f2) == Approx(5 * pi * pi / 9).epsilon(1e-6));
    }
    {
        const MetricGraph g = make_balloon(3).graph;
        const Spectrum spec = eigenvalues(g, 2);
        const EdgeWaveFunction f1 = eigenfunction(g, std::sqrt(spec.lambda(1)));
        const EdgeWaveFunction f2 = eigenfunction(g, std::sqrt(spec.lambda(2)));
        CHECK(folklore_gap(g, f1, f2) >= 0.0);
    }
}

TEST_CASE("piecewise-affine lemma trials") {
    // classical case: f = centered coordinate with a constant weight
    {
        const MetricGraph g = make_interval(1.0, IntervalBC::nn).graph;
        const EdgeWaveFunction flat = eigenfunction(g, 0.0);
        PiecewiseAffine coord;
        coord.edges = {{1.0, 0.0}};
        const double h = cheeger_oracle_converged(g, &flat);
        const BoundCheck c = fphi_lemma_test(g, flat, coord, h);
        CHECK(c.satisfied);
    }
    // random continuous piecewise-affine trials on small Dirichlet graphs
    Rng rng(6);
    for (const CorpusEntry& ce : {make_star4(0.5), make_random_tree(5, 21)}) {
        const Spectrum spec = eigenvalues(ce.graph, 1);
        const EdgeWaveFunction phi1 = eigenfunction(ce.graph, std::sqrt(spec.lambda(1)));
        const double h = cheeger_oracle_converged(ce.graph, &phi1);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> vals(ce.graph.vertex_count());
            for (auto& v : vals) v = rng.uniform(-1, 1);
            PiecewiseAffine f;
            for (const auto& ed : ce.graph.edges())
                f.edges.push_back({(vals[ed.to] - vals[ed.from]) / ed.length, vals[ed.from]});
            const BoundCheck c = fphi_lemma_test(ce.graph, phi1, f, h);
            INFO(ce.name << " trial " << t);
            CHECK(c.satisfied);
        }
    }
}

TEST_CASE("interval lower bound instance with slack 3 pi^2/4") {
    const MetricGraph g = make_interval(1.0).graph;
    const Spectrum spec = eigenvalues(g, 2);
    const auto checks = check_lower_bounds(g, metrics(g), spec, {});
    bool found = false;
    for (const auto& c : checks)
        if (c.name == "lower.length[1]") {
            found = true;
            CHECK(c.satisfied);
            CHECK(c.slack == Approx(3 * pi * pi / 4).epsilon(1e-8));
        }
    CHECK(found);
}

TEST_CASE("star15 second eigenvalue clears the k=2 length bound") {
    const MetricGraph g = make_star15(5).graph;  // L = 7
    const Spectrum spec = eigenvalues(g, 2);
    const double rhs = 4 * pi * pi / (4 * 49.0);
    CHECK(spec.lambda(2) >= rhs);
    const auto checks = check_lower_bounds(g, metrics(g), spec, {});
    for (const auto& c : checks)
        if (c.name == "lower.length[2]") CHECK(c.rhs == Approx(rhs));
}

TEST_CASE("standard interval attains the k=2 equality case") {
    // lambda_2^N = pi^2/L^2 equals k^2 pi^2/(4 L^2) at k = 2: the certified
    // comparison must tolerate the equality
    const MetricGraph g = make_interval(1.0, IntervalBC::nn).graph;
    const Spectrum spec = eigenvalues(g, 3);
    const auto checks = check_lower_bounds(g, metrics(g), spec, {});
    for (const auto& c : checks) {
        if (c.name == "lower.length[1]") CHECK(c.applicability == Applicability::excluded);
        if (c.name == "lower.length[2]") {
            CHECK(c.satisfied);
            CHECK(c.slack == Approx(0.0).margin(1e-7));
        }
    }
}

TEST_CASE("balloon girth bound and lmax bound") {
    const MetricGraph g = make_balloon(6).graph;
    const GraphMetrics m = metrics(g);
    const Spectrum spec = eigenvalues(g, 2);
    REQUIRE(m.girth == Approx(2.0));
    CHECK(spec.lambda(1) <= pi * pi / (m.girth * m.girth));
    CHECK(spec.lambda(1) <= pi * pi / (m.ellmax * m.ellmax));
    const auto checks = check_upper_bounds(g, m, spec);
    for (const auto& c : checks)
        if (c.name == "upper.girth" || c.name == "upper.lmax") CHECK(c.satisfied);
}

TEST_CASE("weighted gap checks on corpus instances") {
    // star4: gap = pi^2 (1 - 1/(1+a)^2) = 5 pi^2/9, certified constant far below
    {
        const MetricGraph g = make_star4(0.5).graph;
        const Spectrum spec = eigenvalues(g, 2);
        CHECK(spec.lambda(2) - spec.lambda(1) == Approx(5 * pi * pi / 9).epsilon(1e-8));
        const EdgeWaveFunction phi1 = eigenfunction(g, std::sqrt(spec.lambda(1)));
        const auto checks =
            check_weighted_cheeger_gap(g, metrics(g), spec, phi1,
                                       cheeger_oracle_converged(g, &phi1));
        for (const auto& c : checks) {
            INFO(c.name);
            if (c.applicability == Applicability::applicable) CHECK(c.satisfied);
        }
    }
    // equilateral star: gap = 3 pi^2/(4 a^2) >= C via the exceptional path
    {
        const MetricGraph g = make_equilateral_star(3, 1.0).graph;
        const Spectrum spec = eigenvalues(g, 2);
        CHECK(spec.lambda(2) - spec.lambda(1) == Approx(3 * pi * pi / 4).epsilon(1e-8));
        const EdgeWaveFunction phi1 = eigenfunction(g, std::sqrt(spec.lambda(1)));
        const auto checks = check_weighted_cheeger_gap(g, metrics(g), spec, phi1, {});
        for (const auto& c : checks)
            if (c.name == "gap.universal") {
                CHECK(c.satisfied);
                CHECK(c.rhs > 0);
            }
    }
    // interval: certified constant positive and below the true gap
    {
        const MetricGraph g = make_interval(1.0).graph;
        const Spectrum spec = eigenvalues(g, 2);
        const EdgeWaveFunction phi1 = eigenfunction(g, std::sqrt(spec.lambda(1)));
        const auto checks = check_weighted_cheeger_gap(g, metrics(g), spec, phi1, {});
        for (const auto& c : checks)
            if (c.name == "gap.universal") {
                CHECK(c.rhs > 0);
                CHECK(c.satisfied);
            }
        // the Dirichlet interval is the stated exception to lambda1 <= pi^2/(4 ell0^2)
        for (const auto& c : checks)
            if (c.name == "upper.lam1_ell0") CHECK(c.applicability == Applicability::excluded);
    }
    const MetricGraph nn = make_interval(1.0, IntervalBC::nn).graph;
    const Spectrum snn = eigenvalues(nn, 2);
    const EdgeWaveFunction flat = eigenfunction(nn, 0.0);
    CHECK_THROWS_AS(check_weighted_cheeger_gap(nn, metrics(nn), snn, flat, {}), GraphError);
}

TEST_CASE("full reports pass and reproduce bit-for-bit") {
    for (const CorpusEntry& ce : {make_star4(0.5), make_balloon(3), make_interval(1.0),
                                  make_random_tree(5, 11)}) {
        const BoundReport r1 = report(ce.graph, ce.name);
        const BoundReport r2 = report(ce.graph, ce.name);
        INFO(ce.name << "\n" << summary(r1));
        CHECK_FALSE(r1.certified_failure());
        CHECK(r1.failures() == 0);
        CHECK(to_csv(r1) == to_csv(r2));
        // every catalog family appears
        bool has_lower = false, has_upper = false, has_tree = false;
        for (const auto& c : r1.checks) {
            if (c.name.rfind("lower.", 0) == 0) has_lower = true;
            if (c.name.rfind("upper.", 0) == 0) has_upper = true;
            if (c.name.rfind("tree.", 0) == 0) has_tree = true;
        }
        CHECK(has_lower);
        CHECK(has_upper);
        CHECK(has_tree);
    }
}

TEST_CASE("tree suite holds on Dirichlet trees and is excluded elsewhere") {
    {
        const CorpusEntry ce = make_random_tree(6, 33);
        const Spectrum spec = eigenvalues(ce.graph, 7);
        REQUIRE(is_dirichlet_tree(ce.graph));
        const auto checks = check_tree_bounds(spec.lambdas, 6, true);
        for (const auto& c : checks) {
            INFO(c.name << " " << c.lhs << " vs " << c.rhs);
            CHECK(c.satisfied);
        }
    }
    {
        const CorpusEntry ce = make_balloon(3);
        CHECK_FALSE(is_dirichlet_tree(ce.graph));
        const Spectrum spec = eigenvalues(ce.graph, 3);
        const auto checks = check_tree_bounds(spec.lambdas, 2, false, "not a tree");
        for (const auto& c : checks) CHECK(c.applicability == Applicability::excluded);
        // and indeed the golden-ratio bound fails on the balloon
        CHECK(spec.lambda(2) / spec.lambda(1) > 2 + std::sqrt(5.0));
    }
}
