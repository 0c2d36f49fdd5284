// bounds.hpp — machine-checkable catalog of the eigenvalue inequalities:
// length/Cheeger/diameter lower bounds, geometric upper bounds, the weighted
// Cheeger gap estimates, and the tree suites (Hile-Protter root,
// Harrell-Stubbe trace inequality, quadratic eigenvalue moments).
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgraph/cheeger.hpp"
#include "qgraph/eigensolve.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/format.hpp"

namespace qgraph {

enum class Applicability { applicable, excluded, informational };
enum class Certainty { certified, tolerance_based };
enum class Relation { ge, le, eq };  // lhs >= rhs | lhs <= rhs | equal to 1e-6 rel

struct BoundCheck {
    std::string name;
    double lhs = 0, rhs = 0;
    Relation relation = Relation::ge;
    Applicability applicability = Applicability::applicable;
    std::string reason;
    bool satisfied = true;
    double slack = 0;
    Certainty certainty = Certainty::certified;
};

namespace detail {

inline BoundCheck make_check(std::string name, double lhs, Relation rel, double rhs,
                             Certainty cert,
                             Applicability app = Applicability::applicable,
                             std::string reason = {}) {
    BoundCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.relation = rel;
    c.applicability = app;
    c.reason = std::move(reason);
    c.certainty = cert;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    const double grace = 1e-7 * scale;  // absorbs root-finding tolerance at equality cases
    switch (rel) {
        case Relation::ge:
            c.satisfied = lhs >= rhs - grace;
            c.slack = lhs - rhs;
            break;
        case Relation::le:
            c.satisfied = lhs <= rhs + grace;
            c.slack = rhs - lhs;
            break;
        case Relation::eq:
            c.slack = -std::abs(lhs - rhs);
            c.satisfied = std::abs(lhs - rhs) <= 1e-6 * scale;
            break;
    }
    return c;
}

}  // namespace detail

// Metric tree with Dirichlet conditions exactly on the external vertices.
inline bool is_dirichlet_tree(const MetricGraph& g) {
    if (g.edge_count() - g.vertex_count() + 1 != 0) return false;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const bool leaf = g.degree(v) == 1;
        const bool dir = g.vertex(v).bc == BC::dirichlet;
        if (leaf != dir) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// lower bounds

inline std::vector<BoundCheck> check_lower_bounds(const MetricGraph& g, const GraphMetrics& m,
                                                  const Spectrum& spec,
                                                  std::optional<double> h_unweighted = {}) {
    const double pi = std::numbers::pi;
    const int depth = static_cast<int>(spec.lambdas.size());
    const bool dirichlet = m.V_0 > 0;
    std::vector<BoundCheck> out;
    for (int k = 1; k <= depth; ++k) {
        const double rhs = k * k * pi * pi / (4 * m.L * m.L);
        auto app = Applicability::applicable;
        std::string reason;
        if (!dirichlet && k == 1) {
            app = Applicability::excluded;
            reason = "lambda_1 = 0 under fully standard conditions";
        }
        out.push_back(detail::make_check("lower.length[" + std::to_string(k) + "]", spec.lambda(k),
                                         Relation::ge, rhs, Certainty::certified, app, reason));
    }
    // refined lower bound for k >= E - V_0 + 1, cycle caveat as a tri-state
    const int k0 = m.E - m.V_0 + 1;
    for (int k = std::max(k0, 1); k <= depth; ++k) {
        if (k < k0) continue;
        const double base = k - 0.5 * (m.E - m.V_0 + 1);
        const double rhs = base * base * pi * pi / (m.L * m.L);
        auto app = m.contains_cycle ? Applicability::informational : Applicability::applicable;
        std::string reason = m.contains_cycle ? "cycle-graph exclusion class is undefined" : "";
        if (!dirichlet && k == 1) {
            app = Applicability::excluded;
            reason = "lambda_1 = 0 under fully standard conditions";
        }
        out.push_back(detail::make_check("lower.refined[" + std::to_string(k) + "]",
                                         spec.lambda(k), Relation::ge, rhs, Certainty::certified,
                                         app, reason));
    }
    // Cheeger lower bound: lambda_1 (Dirichlet present) or lambda_2 (standard)
    {
        const int idx = dirichlet ? 1 : 2;
        if (h_unweighted && depth >= idx) {
            const double h = *h_unweighted;
            out.push_back(detail::make_check("lower.cheeger", spec.lambda(idx), Relation::ge,
                                             0.25 * h * h * (1 - 1e-2),
                                             Certainty::tolerance_based));
        } else {
            out.push_back(detail::make_check("lower.cheeger", depth >= idx ? spec.lambda(idx) : 0,
                                             Relation::ge, 0, Certainty::tolerance_based,
                                             Applicability::excluded,
                                             "no converged Cheeger estimate available"));
        }
    }
    // diameter bound, standard conditions with D <= L/2
    {
        auto app = Applicability::applicable;
        std::string reason;
        if (dirichlet) {
            app = Applicability::excluded;
            reason = "stated for fully standard conditions";
        } else if (m.diameter > m.L / 2) {
            app = Applicability::excluded;
            reason = "requires diameter <= L/2";
        }
        const double rhs = 1.0 / (2 * m.diameter * m.L);
        out.push_back(detail::make_check("lower.diameter", depth >= 2 ? spec.lambda(2) : 0,
                                         Relation::ge, rhs, Certainty::certified, app, reason));
    }
    return out;
}

// ---------------------------------------------------------------------------
// upper bounds

inline std::vector<BoundCheck> check_upper_bounds(const MetricGraph& g, const GraphMetrics& m,
                                                  const Spectrum& spec) {
    const double pi = std::numbers::pi;
    const int depth = static_cast<int>(spec.lambdas.size());
    std::vector<BoundCheck> out;
    out.push_back(detail::make_check("upper.lmax", spec.lambda(1), Relation::le,
                                     pi * pi / (m.ellmax * m.ellmax), Certainty::certified));
    {
        auto app = m.girth_finite() ? Applicability::applicable : Applicability::excluded;
        std::string reason =
            m.girth_finite() ? "" : "acyclic after identifying the Dirichlet vertices";
        const double rhs = m.girth_finite() ? pi * pi / (m.girth * m.girth) : 0;
        out.push_back(detail::make_check("upper.girth", spec.lambda(1), Relation::le, rhs,
                                         Certainty::certified, app, reason));
    }
    for (int k = 1; k <= depth; ++k) {
        const double base = k - 0.5 + 1.5 * m.E - m.V_N - 0.5 * m.V_0;
        const double rhs = base * base * pi * pi / (m.L * m.L);
        out.push_back(detail::make_check("upper.betti[" + std::to_string(k) + "]", spec.lambda(k),
                                         Relation::le, rhs, Certainty::certified));
    }
    {
        auto app = Applicability::applicable;
        std::string reason;
        if (m.V_0 > 0) {
            app = Applicability::excluded;
            reason = "stated for fully standard conditions";
        } else if (m.E < 2) {
            app = Applicability::excluded;
            reason = "requires E >= 2";
        }
        out.push_back(detail::make_check("upper.count", depth >= 2 ? spec.lambda(2) : 0,
                                         Relation::le, pi * pi * m.E * m.E / (m.L * m.L),
                                         Certainty::certified, app, reason));
    }
    (void)g;
    return out;
}

// ---------------------------------------------------------------------------
// the spectral-gap estimates

// log of the certified gap constant C(L, ell0), assembled from the universal
// Harnack constant.
inline double gap_constant_log(double L, double ell0) {
    return -2 * std::log(L) +
           4 * (universal_harnack_log(L, ell0) +
                std::log(std::sin(std::numbers::pi * ell0 / (4 * L))));
}

inline std::vector<BoundCheck> check_weighted_cheeger_gap(const MetricGraph& g,
                                                          const GraphMetrics& m,
                                                          const Spectrum& spec,
                                                          const EdgeWaveFunction& phi1,
                                                          std::optional<double> h_phi) {
    if (m.V_0 == 0)
        throw GraphError("weighted Cheeger gap checks need a Dirichlet vertex");
    std::vector<BoundCheck> out;
    const double gap = spec.lambda(2) - spec.lambda(1);
    if (h_phi) {
        out.push_back(detail::make_check("gap.weighted_cheeger", gap, Relation::ge,
                                         0.25 * (*h_phi) * (*h_phi) * (1 - 1e-2),
                                         Certainty::tolerance_based));
    } else {
        out.push_back(detail::make_check("gap.weighted_cheeger", gap, Relation::ge, 0,
                                         Certainty::tolerance_based, Applicability::excluded,
                                         "no converged weighted Cheeger estimate available"));
    }
    const Gamma1 g1 = gamma1(g, phi1);
    double C;
    if (g1.single_point) {
        // explicit exceptional families: gap is 2 pi^2/L^2 (half-Dirichlet
        // interval), 3 pi^2/L^2 (Dirichlet interval) or 3 pi^2/(4a^2); all
        // dominate pi^2/L^2
        C = std::numbers::pi * std::numbers::pi / (m.L * m.L);
    } else {
        C = std::exp(gap_constant_log(m.L, m.ell0));
    }
    out.push_back(detail::make_check("gap.universal", gap, Relation::ge, C, Certainty::certified));
    // lambda_1 <= pi^2/(4 ell0^2), Dirichlet interval excepted
    {
        const bool interval_exception =
            g1.single_point && m.V_0 == 2;  // both ends Dirichlet: lambda1 = pi^2/ell0^2
        auto app = interval_exception ? Applicability::excluded : Applicability::applicable;
        std::string reason = interval_exception ? "Dirichlet interval is the stated exception" : "";
        out.push_back(detail::make_check(
            "upper.lam1_ell0", spec.lambda(1), Relation::le,
            std::numbers::pi * std::numbers::pi / (4 * m.ell0 * m.ell0), Certainty::certified, app,
            reason));
    }
    return out;
}

// ---------------------------------------------------------------------------
// the variational gap identity

// || (phi2/phi1)' phi1 ||^2 by adaptive quadrature; equals lambda2 - lambda1.
// The integrand extends continuously to Dirichlet endpoints (both functions
// vanish linearly there); quadrature nodes are interior, so no limit handling
// is needed at evaluation time.
inline double folklore_gap(const MetricGraph& g, const EdgeWaveFunction& phi1,
                           const EdgeWaveFunction& phi2) {
    double out = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const double len = g.edge(e).length;
        auto integrand = [&](double x) {
            const double p1 = phi1.value(e, x);
            const double w = phi2.derivative(e, x) * p1 - phi2.value(e, x) * phi1.derivative(e, x);
            const double q = w / p1;
            return q * q;
        };
        out += adaptive_gauss(integrand, 0, len, 1e-10);
    }
    return out;
}

// Lemma check: for piecewise-affine f recentred so that int f phi^2 = 0,
// ||f' phi|| >= (1/2) h_phi ||f phi||.
inline BoundCheck fphi_lemma_test(const MetricGraph& g, const EdgeWaveFunction& phi,
                                  PiecewiseAffine f, double h_phi) {
    PiecewiseAffine one;
    one.edges.assign(g.edge_count(), {0.0, 1.0});
    const double mass = inner(g, one, one, phi);
    const double mean = inner(g, f, one, phi) / mass;
    for (auto& ea : f.edges) ea.offset -= mean;
    const double norm_fphi = std::sqrt(inner(g, f, f, phi));
    if (!(norm_fphi > 0)) throw GraphError("degenerate trial function: ||f phi|| = 0");
    const double lhs = std::sqrt(inner_deriv(g, f, f, phi));
    return detail::make_check("lemma.fphi", lhs, Relation::ge,
                              0.5 * h_phi * norm_fphi * (1 - 1e-2), Certainty::tolerance_based);
}

// ---------------------------------------------------------------------------
// tree suites

// Unique root of sum_j lambda_j/(sigma - lambda_j) = n/4 in (lambda_n, inf).
inline double hp_root(const std::vector<double>& lam, int n) {
    if (n < 1 || static_cast<int>(lam.size()) < n)
        throw GraphError("hp_root needs n >= 1 eigenvalues");
    for (int j = 0; j < n; ++j)
        if (!(lam[j] > 0) || (j > 0 && lam[j] < lam[j - 1]))
            throw GraphError("hp_root needs positive nondecreasing eigenvalues");
    double sum = 0;
    for (int j = 0; j < n; ++j) sum += lam[j];
    auto G = [&](double s) {
        double v = 0;
        for (int j = 0; j < n; ++j) v += lam[j] / (s - lam[j]);
        return v - n / 4.0;
    };
    double lo = lam[n - 1] * (1 + 1e-14) + 1e-300;
    double hi = lam[n - 1] + 4 * sum / n + 1.0;
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double gv = G(s);
        if (std::abs(gv) < 1e-12) break;
        if (gv > 0) lo = s;
        else hi = s;
        // Newton step, kept inside the bracket
        double gp = 0;
        for (int j = 0; j < n; ++j) gp -= lam[j] / ((s - lam[j]) * (s - lam[j]));
        double next = s - gv / gp;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

// Harrell-Stubbe trace inequality at z for a weight f on the lowest n
// eigenvalues: sum f(lambda_j) <= 4 sum f(lambda_j) lambda_j/(z - lambda_j).
// Admissibility (f > 0, f(lambda_j)/(z-lambda_j)^2 nondecreasing) is verified
// numerically and reported, never silently skipped.
inline BoundCheck hs_check(const std::vector<double>& lam, int n,
                           const std::function<double(double)>& f, const std::string& fname,
                           double z) {
    if (n < 1 || static_cast<int>(lam.size()) < n) throw GraphError("hs_check needs n eigenvalues");
    if (!(z > lam[n - 1])) throw GraphError("hs_check needs z > lambda_n");
    bool admissible = true;
    std::string why;
    double prev_ratio = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double fj = f(lam[j]);
        if (!(fj > 0)) {
            admissible = false;
            why = "f(lambda_" + std::to_string(j + 1) + ") <= 0";
            break;
        }
        const double r = fj / ((z - lam[j]) * (z - lam[j]));
        if (r < prev_ratio * (1 - 1e-12)) {
            admissible = false;
            why = "f(lambda)/(z-lambda)^2 not nondecreasing at j=" + std::to_string(j + 1);
            break;
        }
        prev_ratio = std::max(prev_ratio, r);
    }
    double lhs = 0, rhs = 0;
    if (admissible)
        for (int j = 0; j < n; ++j) {
            lhs += f(lam[j]);
            rhs += 4 * f(lam[j]) * lam[j] / (z - lam[j]);
        }
    return detail::make_check("tree.hs[" + fname + ",n=" + std::to_string(n) + "]", lhs,
                              Relation::le, rhs, Certainty::certified,
                              admissible ? Applicability::applicable : Applicability::excluded,
                              why);
}

// Demirel-Harrell quadratic instance in division-free form:
// sum (z - lambda_j)(z - 5 lambda_j) <= 0 for z in [lambda_n, lambda_{n+1}].
inline BoundCheck dh_check(const std::vector<double>& lam, int n, double z,
                           const std::string& tag) {
    double lhs = 0;
    for (int j = 0; j < n; ++j) lhs += (z - lam[j]) * (z - 5 * lam[j]);
    return detail::make_check("tree.dh[n=" + std::to_string(n) + "," + tag + "]", lhs,
                              Relation::le, 0.0, Certainty::certified);
}

struct QuadraticGap {
    double Dn = 0;
    double lower_on_n = 0;    // lambda_n >= this
    double upper_on_next = 0; // lambda_{n+1} <= this
    double gap_bound = 0;     // lambda_{n+1} - lambda_n <= this
};

inline QuadraticGap quadratic_gap(const std::vector<double>& lam, int n) {
    if (n < 1 || static_cast<int>(lam.size()) < n)
        throw GraphError("quadratic_gap needs n eigenvalues");
    double s1 = 0, s2 = 0;
    for (int j = 0; j < n; ++j) {
        s1 += lam[j];
        s2 += lam[j] * lam[j];
    }
    QuadraticGap out;
    const double a = 3.0 * s1 / n;
    out.Dn = a * a - 5.0 * s2 / n;
    const double root = out.Dn > 0 ? std::sqrt(out.Dn) : 0;
    out.lower_on_n = a - root;
    out.upper_on_next = a + root;
    out.gap_bound = 2 * root;
    return out;
}

// Full tree-inequality suite on the first n_max+1 eigenvalues.
inline std::vector<BoundCheck> check_tree_bounds(const std::vector<double>& lam, int n_max,
                                                 bool tree_applicable,
                                                 const std::string& why_not = {}) {
    const auto app = tree_applicable ? Applicability::applicable : Applicability::excluded;
    std::vector<BoundCheck> out;
    auto push = [&](BoundCheck c) {
        if (!tree_applicable) {
            c.applicability = app;
            c.reason = why_not;
        }
        out.push_back(std::move(c));
    };
    const double golden = 2 + std::sqrt(5.0);
    if (lam.size() >= 2 && lam[0] > 0)
        push(detail::make_check("tree.ratio_golden", lam[1] / lam[0], Relation::le, golden,
                                Certainty::certified));
    for (int n = 1; n <= n_max && n + 1 <= static_cast<int>(lam.size()); ++n) {
        const QuadraticGap qg = quadratic_gap(lam, n);
        double s1 = 0;
        for (int j = 0; j < n; ++j) s1 += lam[j];
        push(detail::make_check("tree.moment_nonneg[n=" + std::to_string(n) + "]", qg.Dn,
                                Relation::ge, 0.0, Certainty::certified));
        push(detail::make_check("tree.moment_upper[n=" + std::to_string(n) + "]", lam[n],
                                Relation::le, qg.upper_on_next, Certainty::certified));
        push(detail::make_check("tree.moment_lower[n=" + std::to_string(n) + "]", lam[n - 1],
                                Relation::ge, qg.lower_on_n, Certainty::certified));
        push(detail::make_check("tree.moment_gap[n=" + std::to_string(n) + "]",
                                lam[n] - lam[n - 1], Relation::le, qg.gap_bound,
                                Certainty::certified));
        push(detail::make_check("tree.ppw[n=" + std::to_string(n) + "]", lam[n] - lam[n - 1],
                                Relation::le, 4 * s1 / n, Certainty::certified));
        const double sigma = hp_root(lam, n);
        push(detail::make_check("tree.hp[n=" + std::to_string(n) + "]", lam[n], Relation::le,
                                sigma, Certainty::certified));
        if (tree_applicable) {
            push(hs_check(lam, n, [](double) { return 1.0; }, "f=1", sigma));
            const double zs[3] = {lam[n - 1], 0.5 * (lam[n - 1] + lam[n]), lam[n]};
            const char* tags[3] = {"z=lo", "z=mid", "z=hi"};
            for (int i = 0; i < 3; ++i) push(dh_check(lam, n, zs[i], tags[i]));
        }
    }
    if (lam.size() >= 2 && lam[0] > 0)
        push(detail::make_check("tree.ratio5", lam[1] / lam[0], Relation::le, 5.0,
                                Certainty::certified));
    return out;
}

inline BoundCheck betti_ratio_check(const GraphMetrics& m, const std::vector<double>& lam, int n) {
    if (n + 1 > static_cast<int>(lam.size()))
        throw GraphError("betti_ratio_check needs n+1 eigenvalues");
    const double base = 2 * n + 1 + 3 * m.E - 2 * m.V_N - m.V_0;
    auto app = Applicability::applicable;
    std::string reason;
    if (!(lam[n - 1] > 0)) {
        app = Applicability::excluded;
        reason = "lambda_n = 0";
    } else if (m.contains_cycle) {
        app = Applicability::informational;
        reason = "cycle-graph exclusion class is undefined";
    }
    const double ratio = lam[n - 1] > 0 ? lam[n] / lam[n - 1] : 0;
    return detail::make_check("ratio.betti[n=" + std::to_string(n) + "]", ratio, Relation::le,
                              base * base, Certainty::certified, app, reason);
}

// ---------------------------------------------------------------------------
// report assembly

struct BoundReport {
    std::string graph_id;
    GraphMetrics metrics;
    std::vector<double> lambdas;
    std::vector<BoundCheck> checks;

    bool certified_failure() const {
        for (const auto& c : checks)
            if (c.applicability == Applicability::applicable &&
                c.certainty == Certainty::certified && !c.satisfied)
                return true;
        return false;
    }
    int failures() const {
        int n = 0;
        for (const auto& c : checks)
            if (c.applicability == Applicability::applicable && !c.satisfied) ++n;
        return n;
    }
};

inline const char* to_string(Applicability a) {
    switch (a) {
        case Applicability::applicable: return "applicable";
        case Applicability::excluded: return "excluded";
        default: return "informational";
    }
}
inline const char* to_string(Certainty c) {
    return c == Certainty::certified ? "certified" : "tolerance";
}
inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::ge: return ">=";
        case Relation::le: return "<=";
        default: return "==";
    }
}

inline std::string to_csv(const BoundReport& rep) {
    std::ostringstream ss;
    ss << "name,lhs,relation,rhs,applicability,reason,satisfied,slack,certainty\n";
    for (const auto& c : rep.checks)
        ss << c.name << ',' << fmt(c.lhs) << ',' << to_string(c.relation) << ',' << fmt(c.rhs)
           << ',' << to_string(c.applicability) << ',' << '"' << c.reason << '"' << ','
           << (c.satisfied ? 1 : 0) << ',' << fmt(c.slack) << ',' << to_string(c.certainty)
           << '\n';
    return ss.str();
}

inline std::string summary(const BoundReport& rep) {
    std::ostringstream ss;
    ss << "graph " << rep.graph_id << ": L=" << fmt(rep.metrics.L)
       << " ell0=" << fmt(rep.metrics.ell0) << " E=" << rep.metrics.E << " V=" << rep.metrics.V
       << " beta=" << rep.metrics.beta << "\n";
    ss << "lambda:";
    for (double l : rep.lambdas) ss << ' ' << fmt(l);
    ss << "\n";
    for (const auto& c : rep.checks) {
        ss << (c.satisfied ? "  pass " : "  FAIL ") << c.name << ": " << fmt(c.lhs) << ' '
           << to_string(c.relation) << ' ' << fmt(c.rhs) << " [" << to_string(c.applicability)
           << (c.reason.empty() ? "" : ": " + c.reason) << ", " << to_string(c.certainty) << "]\n";
    }
    return ss.str();
}

// Evaluate every applicable check of the catalog. Deterministic given the
// graph and tolerances; Cheeger-based checks are skipped (excluded) beyond
// the exhaustive-oracle cap.
inline BoundReport report(const MetricGraph& g, const std::string& graph_id = "graph",
                          int depth = 7, double tol = 1e-9) {
    BoundReport rep;
    rep.graph_id = graph_id;
    rep.metrics = metrics(g);
    Spectrum spec = eigenvalues(g, depth, tol);
    rep.lambdas = spec.lambdas;

    std::optional<double> h_unw;
    if (g.edge_count() <= 8) {
        try {
            h_unw = cheeger_oracle_converged(g, nullptr);
        } catch (const GraphError&) {
        }
    }
    auto lower = check_lower_bounds(g, rep.metrics, spec, h_unw);
    rep.checks.insert(rep.checks.end(), lower.begin(), lower.end());
    auto upper = check_upper_bounds(g, rep.metrics, spec);
    rep.checks.insert(rep.checks.end(), upper.begin(), upper.end());

    if (rep.metrics.V_0 > 0) {
        const EdgeWaveFunction phi1 = eigenfunction(g, std::sqrt(spec.lambda(1)), 0);
        std::optional<double> h_phi;
        if (g.edge_count() <= 8) {
            try {
                h_phi = cheeger_oracle_converged(g, &phi1);
            } catch (const GraphError&) {
            }
        }
        auto gapchecks = check_weighted_cheeger_gap(g, rep.metrics, spec, phi1, h_phi);
        rep.checks.insert(rep.checks.end(), gapchecks.begin(), gapchecks.end());
        // gap identity against a second eigenfunction
        const double sigma2 = std::sqrt(spec.lambda(2));
        const EdgeWaveFunction phi2 = eigenfunction(g, sigma2, 0);
        const double fg = folklore_gap(g, phi1, phi2);
        rep.checks.push_back(detail::make_check("identity.folklore", fg, Relation::eq,
                                                spec.lambda(2) - spec.lambda(1),
                                                Certainty::tolerance_based));
    }
    rep.checks.push_back(betti_ratio_check(rep.metrics, spec.lambdas, 1));
    auto tree = check_tree_bounds(spec.lambdas, std::min(depth - 1, 6), is_dirichlet_tree(g),
                                  "not a metric tree with Dirichlet leaves");
    rep.checks.insert(rep.checks.end(), tree.begin(), tree.end());
    return rep;
}

}  // namespace qgraph
