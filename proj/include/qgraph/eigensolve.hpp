// eigensolve.hpp — exact spectral computation for metric-graph Laplacians.
//
// On each edge an eigenfunction with eigenvalue sigma^2 is
// a_e cos(sigma x) + b_e sin(sigma x). Vertex conditions assemble into the
// 2E x 2E real secular matrix M(sigma); eigenvalues are the sigma where
// M(sigma) is rank-deficient, located as minima of the smallest singular
// value and certified against the Weyl count.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"
#include "qgraph/integrals.hpp"

namespace qgraph {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// edge function types

// x -> amplitude * sin(sigma x + phase) on an edge, in the edge's own
// parametrization. sigma = 0 with phase pi/2 encodes the constant
// `amplitude`, and all formulas below remain valid.
struct EdgeWave {
    double amplitude = 0;
    double phase = 0;
};

struct EdgeWaveFunction {
    double sigma = 0;
    std::vector<EdgeWave> edges;

    double value(int e, double x) const {
        const EdgeWave& w = edges.at(e);
        return w.amplitude * std::sin(sigma * x + w.phase);
    }
    double derivative(int e, double x) const {
        const EdgeWave& w = edges.at(e);
        return w.amplitude * sigma * std::cos(sigma * x + w.phase);
    }
    double value(const PointOnGraph& p) const { return value(p.edge, p.position); }
};

// Edge-wise affine function: x -> offset + slope * x.
struct EdgeAffine {
    double slope = 0;
    double offset = 0;
};

struct PiecewiseAffine {
    std::vector<EdgeAffine> edges;

    double value(int e, double x) const { return edges.at(e).offset + edges.at(e).slope * x; }
    double value(const PointOnGraph& p) const { return value(p.edge, p.position); }
};

// ---------------------------------------------------------------------------
// secular matrix

// Rows: one value row per Dirichlet vertex; d-1 continuity rows plus one
// Kirchhoff row per standard vertex of degree d. Derivative rows carry the
// sigma factored out and every row is scaled to unit norm, so the smallest
// singular value is scale-invariant in sigma. Unknown layout: (a_e, b_e) at
// columns (2e, 2e+1).
inline Eigen::MatrixXd secular_matrix(const MetricGraph& g, double sigma) {
    if (!(sigma > 0)) throw SolverError("secular matrix requires sigma > 0");
    const int E = g.edge_count();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * E, 2 * E);
    int row = 0;
    auto value_coeffs = [&](const HalfEdge& h, double& ca, double& cb) {
        if (h.end == 0) {
            ca = 1;
            cb = 0;
        } else {
            const double l = g.edge(h.edge).length;
            ca = std::cos(sigma * l);
            cb = std::sin(sigma * l);
        }
    };
    auto deriv_coeffs = [&](const HalfEdge& h, double& ca, double& cb) {
        // outgoing derivative from the vertex into the edge, divided by sigma
        if (h.end == 0) {
            ca = 0;
            cb = 1;
        } else {
            const double l = g.edge(h.edge).length;
            ca = std::sin(sigma * l);
            cb = -std::cos(sigma * l);
        }
    };
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& inc = g.incidence(v);
        if (g.vertex(v).bc == BC::dirichlet) {
            double ca, cb;
            value_coeffs(inc[0], ca, cb);
            M(row, 2 * inc[0].edge) = ca;
            M(row, 2 * inc[0].edge + 1) = cb;
            ++row;
        } else {
            for (size_t i = 0; i + 1 < inc.size(); ++i) {
                double ca1, cb1, ca2, cb2;
                value_coeffs(inc[i], ca1, cb1);
                value_coeffs(inc[i + 1], ca2, cb2);
                M(row, 2 * inc[i].edge) += ca1;
                M(row, 2 * inc[i].edge + 1) += cb1;
                M(row, 2 * inc[i + 1].edge) -= ca2;
                M(row, 2 * inc[i + 1].edge + 1) -= cb2;
                ++row;
            }
            for (const HalfEdge& h : inc) {
                double ca, cb;
                deriv_coeffs(h, ca, cb);
                M(row, 2 * h.edge) += ca;
                M(row, 2 * h.edge + 1) += cb;
            }
            ++row;
        }
    }
    for (int r = 0; r < M.rows(); ++r) {
        const double n = M.row(r).norm();
        if (n > 0) M.row(r) /= n;
    }
    return M;
}

namespace detail {

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& M) {
    if (M.rows() >= 32) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
        return svd.singularValues();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues();
}

constexpr double kRankRatio = 1e-7;    // singular values below ratio*max count toward multiplicity
constexpr double kRootRatio = 1e-9;    // refined minimum must fall below ratio*max

}  // namespace detail

// Smallest singular value of the secular matrix.
inline double secular_smin(const MetricGraph& g, double sigma) {
    const Eigen::VectorXd sv = detail::singular_values(secular_matrix(g, sigma));
    return sv(sv.size() - 1);
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectralLine {
    double lambda = 0;
    double sigma = 0;
    int multiplicity = 1;
    double residual = 0;  // smin/scale at the refined sigma
};

struct Spectrum {
    std::vector<SpectralLine> lines;  // ascending, distinct
    std::vector<double> lambdas;      // flattened by multiplicity, first k
    double grid_step = 0;
    int halvings = 0;
    bool certified = false;
    double sigma_max = 0;
    long matrix_evals = 0;

    double lambda(int j) const { return lambdas.at(j - 1); }  // 1-based
    int count_up_to(double sigma) const {
        int n = 0;
        for (const auto& l : lines)
            if (l.sigma <= sigma) n += l.multiplicity;
        return n;
    }
};

namespace detail {

struct ScanResult {
    std::vector<SpectralLine> lines;
    double sigma_top = 0;
    long evals = 0;
};

inline double golden_min(const std::function<double(double)>& f, double a, double b, double width,
                         long& evals) {
    constexpr double invphi = 0.6180339887498949;
    constexpr double invphi2 = 0.3819660112501051;
    double h = b - a;
    double c = a + invphi2 * h, d = a + invphi * h;
    double fc = f(c), fd = f(d);
    evals += 2;
    while (h > width) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + invphi2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + invphi * h;
            fd = f(d);
        }
        ++evals;
        if (h <= 0 || !(width > 0)) break;
    }
    return fc < fd ? c : d;
}

// One scan pass at a fixed grid step: locate local minima of smin, refine
// each by golden-section, accept as eigenvalues those driven below the rank
// threshold, with multiplicities read off the singular value tail.
inline ScanResult scan_spectrum(const MetricGraph& g, int wanted, double tol, double step,
                                double sigma_cap) {
    ScanResult out;
    auto smin = [&](double s) {
        ++out.evals;
        return secular_smin(g, s);
    };
    int found = 0;
    double s_prev2 = -1, s_prev = -1;
    double f_prev2 = 0, f_prev = 0;
    double last_root_sigma = 0;
    for (int i = 1;; ++i) {
        const double s = i * step;
        if (s > sigma_cap)
            throw SolverError("eigenvalue scan exceeded its certified window");
        const double fs = smin(s);
        if (i >= 3 && f_prev <= f_prev2 && f_prev < fs && f_prev < 0.25) {
            const double width =
                std::max(std::min(tol / s_prev, 0.5 * tol * s_prev), 8e-16 * s_prev);
            double sstar = golden_min([&](double x) { return secular_smin(g, x); }, s_prev2, s,
                                      width, out.evals);
            const Eigen::VectorXd sv = singular_values(secular_matrix(g, sstar));
            ++out.evals;
            const double scale = sv(0);
            const double smin_ref = sv(sv.size() - 1);
            if (smin_ref < kRootRatio * scale) {
                int mult = 0;
                for (int k = 0; k < sv.size(); ++k)
                    if (sv(k) < kRankRatio * scale) ++mult;
                const bool dup = !out.lines.empty() &&
                                 std::abs(out.lines.back().sigma - sstar) < 0.25 * step;
                if (!dup) {
                    out.lines.push_back({sstar * sstar, sstar, mult, smin_ref / scale});
                    found += mult;
                    last_root_sigma = sstar;
                }
            }
        }
        s_prev2 = s_prev;
        f_prev2 = f_prev;
        s_prev = s;
        f_prev = fs;
        if (found >= wanted && s > last_root_sigma + 2 * step) {
            out.sigma_top = s;
            break;
        }
    }
    return out;
}

inline bool weyl_consistent(const std::vector<SpectralLine>& lines, double sigma_top, double L,
                            int E, int V) {
    const double pi = std::numbers::pi;
    const double budget = E + V + 1;
    double count = 0;
    for (const auto& ln : lines) {
        // just below the root
        if (std::abs(count - L * ln.sigma / pi) > budget) return false;
        count += ln.multiplicity;
        // just above the root
        if (std::abs(count - L * ln.sigma / pi) > budget) return false;
    }
    return std::abs(count - L * sigma_top / pi) <= budget;
}

}  // namespace detail

// First k eigenvalues (with multiplicity) of the graph Laplacian.
// lambda = 0 enters symbolically iff there is no Dirichlet vertex. The scan
// step starts at pi/(8L) and is halved until two consecutive passes agree on
// the leading k eigenvalues and the Weyl bracket holds.
inline Spectrum eigenvalues(const MetricGraph& g, int k, double tol = 1e-9) {
    if (k < 1) throw SolverError("eigenvalue count must be positive");
    if (g.edge_count() == 0) throw SolverError("graph has no edges");
    const double pi = std::numbers::pi;
    const double L = g.total_length();
    const int E = g.edge_count(), V = g.vertex_count();
    const bool zero_mode = !g.has_dirichlet();
    const int scan_target = zero_mode ? k - 1 : k;

    Spectrum spec;
    auto assemble = [&](const detail::ScanResult& res, double step, int halvings) {
        spec.lines.clear();
        spec.lambdas.clear();
        if (zero_mode) spec.lines.push_back({0.0, 0.0, 1, 0.0});
        for (const auto& ln : res.lines) spec.lines.push_back(ln);
        for (const auto& ln : spec.lines)
            for (int m = 0; m < ln.multiplicity && static_cast<int>(spec.lambdas.size()) < k; ++m)
                spec.lambdas.push_back(ln.lambda);
        spec.grid_step = step;
        spec.halvings = halvings;
        spec.sigma_max = res.sigma_top;
    };

    if (scan_target == 0) {
        detail::ScanResult empty;
        empty.sigma_top = 0;
        assemble(empty, pi / (8 * L), 0);
        spec.certified = true;
        return spec;
    }

    const double sigma_cap = pi * (k + E + V + 3) / L + 1.0;
    double step = pi / (8 * L);
    std::optional<detail::ScanResult> prev;
    for (int halving = 0; halving <= 6; ++halving) {
        detail::ScanResult res = detail::scan_spectrum(g, scan_target, tol, step, sigma_cap);
        spec.matrix_evals += res.evals;
        const bool weyl_ok = detail::weyl_consistent(res.lines, res.sigma_top, L, E, V);
        if (weyl_ok && prev) {
            // stable under halving: leading eigenvalues agree pairwise
            bool match = true;
            std::vector<double> a, b;
            for (const auto& ln : prev->lines)
                for (int m = 0; m < ln.multiplicity; ++m) a.push_back(ln.lambda);
            for (const auto& ln : res.lines)
                for (int m = 0; m < ln.multiplicity; ++m) b.push_back(ln.lambda);
            if (a.size() < static_cast<size_t>(scan_target) ||
                b.size() < static_cast<size_t>(scan_target))
                match = false;
            for (int j = 0; match && j < scan_target; ++j)
                if (std::abs(a[j] - b[j]) > 1e-7 * std::max(1.0, std::abs(b[j]))) match = false;
            if (match) {
                assemble(res, step, halving);
                spec.certified = true;
                return spec;
            }
        }
        prev = std::move(res);
        step /= 2;
    }
    throw SolverError("eigenvalue count failed to certify after repeated grid halving");
}

// ---------------------------------------------------------------------------
// eigenfunction reconstruction

inline double wave_norm2(const MetricGraph& g, const EdgeWaveFunction& f) {
    double out = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const EdgeWave& w = f.edges[e];
        out += w.amplitude * w.amplitude *
               int_sinsin(f.sigma, w.phase, f.sigma, w.phase, 0, g.edge(e).length);
    }
    return out;
}

inline double inner(const MetricGraph& g, const EdgeWaveFunction& f, const EdgeWaveFunction& h) {
    double out = 0;
    for (int e = 0; e < g.edge_count(); ++e)
        out += f.edges[e].amplitude * h.edges[e].amplitude *
               int_sinsin(f.sigma, f.edges[e].phase, h.sigma, h.edges[e].phase, 0,
                          g.edge(e).length);
    return out;
}

inline double dirichlet_energy(const MetricGraph& g, const EdgeWaveFunction& f) {
    const double pi2 = std::numbers::pi / 2;
    double out = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const double amp = f.edges[e].amplitude * f.sigma;
        out += amp * amp *
               int_sinsin(f.sigma, f.edges[e].phase + pi2, f.sigma, f.edges[e].phase + pi2, 0,
                          g.edge(e).length);
    }
    return out;
}

inline double dirichlet_energy(const MetricGraph& g, const PiecewiseAffine& f) {
    double out = 0;
    for (int e = 0; e < g.edge_count(); ++e)
        out += f.edges[e].slope * f.edges[e].slope * g.edge(e).length;
    return out;
}

// int f h phi^2 over the graph, f and h edge-wise affine.
inline double inner(const MetricGraph& g, const PiecewiseAffine& f, const PiecewiseAffine& h,
                    const EdgeWaveFunction& phi) {
    double out = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const EdgeAffine &af = f.edges[e], &ah = h.edges[e];
        const EdgeWave& w = phi.edges[e];
        out += w.amplitude * w.amplitude *
               int_poly_sinsin(af.offset * ah.offset, af.offset * ah.slope + af.slope * ah.offset,
                               af.slope * ah.slope, phi.sigma, w.phase, phi.sigma, w.phase, 0,
                               g.edge(e).length);
    }
    return out;
}

// int f' h' phi^2
inline double inner_deriv(const MetricGraph& g, const PiecewiseAffine& f, const PiecewiseAffine& h,
                          const EdgeWaveFunction& phi) {
    double out = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const EdgeWave& w = phi.edges[e];
        out += f.edges[e].slope * h.edges[e].slope * w.amplitude * w.amplitude *
               int_sinsin(phi.sigma, w.phase, phi.sigma, w.phase, 0, g.edge(e).length);
    }
    return out;
}

// int_{x0}^{x1} phi^2 on one edge
inline double wave_mass(const MetricGraph& g, const EdgeWaveFunction& phi, int e, double x0,
                        double x1) {
    const EdgeWave& w = phi.edges[e];
    (void)g;
    return w.amplitude * w.amplitude * int_sinsin(phi.sigma, w.phase, phi.sigma, w.phase, x0, x1);
}

// Max-norm residual of the vertex conditions for a reconstructed wave.
inline double secular_residual(const MetricGraph& g, const EdgeWaveFunction& f) {
    if (f.sigma == 0) return 0;
    const Eigen::MatrixXd M = secular_matrix(g, f.sigma);
    Eigen::VectorXd c(2 * g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        c(2 * e) = f.edges[e].amplitude * std::sin(f.edges[e].phase);
        c(2 * e + 1) = f.edges[e].amplitude * std::cos(f.edges[e].phase);
    }
    const double n = c.norm();
    if (n > 0) c /= n;
    return (M * c).cwiseAbs().maxCoeff();
}

namespace detail {

inline EdgeWaveFunction coeffs_to_wave(const MetricGraph& g, double sigma,
                                       const Eigen::VectorXd& c) {
    EdgeWaveFunction f;
    f.sigma = sigma;
    f.edges.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const double a = c(2 * e), b = c(2 * e + 1);
        double amp = std::hypot(a, b);
        double phase = amp > 0 ? std::atan2(a, b) : 0.0;
        if (phase < 0) phase += 2 * std::numbers::pi;
        f.edges[e] = {amp, phase};
    }
    return f;
}

// Largest |value| over an edge together with its sign.
inline double signed_extremum(const EdgeWaveFunction& f, int e, double len) {
    const EdgeWave& w = f.edges[e];
    double best = f.value(e, 0.0);
    const double at_end = f.value(e, len);
    if (std::abs(at_end) > std::abs(best)) best = at_end;
    if (f.sigma > 0) {
        // interior critical points: sigma x + phase = pi/2 + m pi
        const double pi = std::numbers::pi;
        const double lo = w.phase, hi = f.sigma * len + w.phase;
        for (double m = std::ceil((lo - pi / 2) / pi); m * pi + pi / 2 < hi; ++m) {
            const double x = (pi / 2 + m * pi - w.phase) / f.sigma;
            if (x > 0 && x < len) {
                const double val = f.value(e, x);
                if (std::abs(val) > std::abs(best)) best = val;
            }
        }
    }
    return best;
}

}  // namespace detail

inline int secular_multiplicity(const MetricGraph& g, double sigma) {
    const Eigen::VectorXd sv = detail::singular_values(secular_matrix(g, sigma));
    int mult = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) < detail::kRankRatio * sv(0)) ++mult;
    return mult;
}

// Reconstruct the eigenfunction at a certified sigma. Within a multiple
// eigenvalue the null-space basis is L2-orthonormalized and `index` selects a
// representative. The global sign is fixed so the extreme value is positive,
// which makes the ground state nonnegative.
inline EdgeWaveFunction eigenfunction(const MetricGraph& g, double sigma, int index = 0) {
    if (sigma == 0) {
        if (g.has_dirichlet()) throw SolverError("lambda = 0 is not an eigenvalue here");
        if (index != 0) throw SolverError("lambda = 0 is simple");
        EdgeWaveFunction f;
        f.sigma = 0;
        f.edges.assign(g.edge_count(), {1.0 / std::sqrt(g.total_length()), std::numbers::pi / 2});
        return f;
    }
    const Eigen::MatrixXd M = secular_matrix(g, sigma);
    Eigen::VectorXd sv;
    Eigen::MatrixXd V;
    if (M.rows() >= 32) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
        sv = svd.singularValues();
        V = svd.matrixV();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
        sv = svd.singularValues();
        V = svd.matrixV();
    }
    const int n = static_cast<int>(sv.size());
    int mult = 0;
    for (int i = 0; i < n; ++i)
        if (sv(i) < detail::kRankRatio * sv(0)) ++mult;
    if (mult == 0) throw SolverError("sigma is not an eigenvalue within tolerance");
    if (index < 0 || index >= mult) throw SolverError("eigenfunction index exceeds multiplicity");

    std::vector<EdgeWaveFunction> basis;
    for (int j = 0; j < mult; ++j) {
        EdgeWaveFunction f = detail::coeffs_to_wave(g, sigma, V.col(n - 1 - j));
        for (const EdgeWaveFunction& prev : basis) {
            const double c = inner(g, f, prev);
            // subtract c * prev in coefficient space
            for (int e = 0; e < g.edge_count(); ++e) {
                double a = f.edges[e].amplitude * std::sin(f.edges[e].phase) -
                           c * prev.edges[e].amplitude * std::sin(prev.edges[e].phase);
                double b = f.edges[e].amplitude * std::cos(f.edges[e].phase) -
                           c * prev.edges[e].amplitude * std::cos(prev.edges[e].phase);
                double amp = std::hypot(a, b);
                double ph = amp > 0 ? std::atan2(a, b) : 0.0;
                if (ph < 0) ph += 2 * std::numbers::pi;
                f.edges[e] = {amp, ph};
            }
        }
        const double nrm = std::sqrt(wave_norm2(g, f));
        if (nrm <= 0) throw SolverError("degenerate null-space basis");
        for (auto& w : f.edges) w.amplitude /= nrm;
        basis.push_back(std::move(f));
    }
    EdgeWaveFunction f = basis[index];
    double extreme = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        const double v = detail::signed_extremum(f, e, g.edge(e).length);
        if (std::abs(v) > std::abs(extreme)) extreme = v;
    }
    if (extreme < 0)
        for (auto& w : f.edges) {
            w.phase += std::numbers::pi;
            if (w.phase >= 2 * std::numbers::pi) w.phase -= 2 * std::numbers::pi;
        }
    return f;
}

}  // namespace qgraph
