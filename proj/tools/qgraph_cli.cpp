// qgraph command-line tool: spectra, bound reports, Cheeger cuts, affine
// triples, corpus verification, and eigenfunction plots for compact metric
// graphs.
//
// Exit codes: 0 success, 1 a certified check failed, 2 input error,
// 3 solver certification failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgraph/bounds.hpp"
#include "qgraph/cheeger.hpp"
#include "qgraph/corpus.hpp"
#include "qgraph/eigensolve.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/io.hpp"
#include "qgraph/plot.hpp"
#include "qgraph/trees.hpp"

using namespace qgraph;

namespace {

struct RunConfig {
    std::string graph_path;
    std::string corpus_spec;
    int k = 6;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    bool weighted = false;
    std::string out_dir;
    std::string format = "csv";  // csv | svg | both
    std::string path_spec;       // comma-separated edge ids for plots
    int samples = 128;
    bool guides = false;
};

std::map<std::string, std::string> parse_params(const std::string& s) {
    std::map<std::string, std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw GraphError("corpus parameter needs key=value: " + item);
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

double pnum(const std::map<std::string, std::string>& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : std::stod(it->second);
}

MetricGraph build_corpus(const std::string& spec, std::uint64_t default_seed) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const auto p = colon == std::string::npos ? std::map<std::string, std::string>{}
                                              : parse_params(spec.substr(colon + 1));
    const std::uint64_t seed =
        static_cast<std::uint64_t>(pnum(p, "seed", static_cast<double>(default_seed)));
    if (name == "interval") {
        const std::string bc = p.count("bc") ? p.at("bc") : "dd";
        IntervalBC ib = bc == "dn" ? IntervalBC::dn : bc == "nn" ? IntervalBC::nn : IntervalBC::dd;
        return make_interval(pnum(p, "L", 1.0), ib).graph;
    }
    if (name == "star4") return make_star4(pnum(p, "a", 0.5)).graph;
    if (name == "star15") return make_star15(static_cast<int>(pnum(p, "k", 5))).graph;
    if (name == "balloon") return make_balloon(static_cast<int>(pnum(p, "k", 3))).graph;
    if (name == "eqstar")
        return make_equilateral_star(static_cast<int>(pnum(p, "k", 3)), pnum(p, "a", 1.0)).graph;
    if (name == "tadpole") return make_tadpole(pnum(p, "loop", 1.5), pnum(p, "stem", 1.0)).graph;
    if (name == "tree")
        return make_random_tree(static_cast<int>(pnum(p, "E", 6)), seed, pnum(p, "ellmin", 0.1))
            .graph;
    if (name == "graph")
        return make_random_graph(static_cast<int>(pnum(p, "E", 6)),
                                 static_cast<int>(pnum(p, "beta", 1)), seed,
                                 pnum(p, "ellmin", 0.1))
            .graph;
    if (name == "saguaro")
        return make_saguaro(static_cast<int>(pnum(p, "E", 3)), seed,
                            {static_cast<int>(pnum(p, "k", 2))})
            .graph;
    if (name == "ornamented")
        return make_random_ornamented(seed, static_cast<int>(pnum(p, "E", 5))).assembled;
    throw GraphError("unknown corpus family: " + name);
}

MetricGraph load_input(const RunConfig& cfg) {
    if (!cfg.graph_path.empty()) return load_graph(cfg.graph_path);
    if (!cfg.corpus_spec.empty()) return build_corpus(cfg.corpus_spec, cfg.seed);
    throw GraphError("provide --graph <path> or --corpus <name:params>");
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    std::ofstream out(dir + "/" + name);
    out << content;
}

int cmd_spectrum(const RunConfig& cfg) {
    const MetricGraph g = load_input(cfg);
    const Spectrum spec = eigenvalues(g, cfg.k, cfg.tol);
    std::ostringstream csv;
    csv << "index,lambda,multiplicity\n";
    std::cout << "index  lambda  multiplicity\n";
    int idx = 1;
    for (const auto& line : spec.lines) {
        if (idx > cfg.k) break;
        std::cout << idx << "  " << fmt(line.lambda) << "  " << line.multiplicity << "\n";
        csv << idx << ',' << fmt(line.lambda) << ',' << line.multiplicity << '\n';
        idx += line.multiplicity;
    }
    std::cout << "grid_step=" << fmt(spec.grid_step) << " halvings=" << spec.halvings
              << " certified=" << (spec.certified ? "yes" : "no") << "\n";
    write_file(cfg.out_dir, "spectrum.csv", csv.str());
    // eigenfunction table for the distinct eigenvalues in range
    std::ostringstream efcsv;
    efcsv << "index,edge,amplitude,theta,sigma\n";
    idx = 1;
    for (const auto& line : spec.lines) {
        if (idx > cfg.k) break;
        if (line.sigma > 0) {
            const EdgeWaveFunction f = eigenfunction(g, line.sigma, 0);
            for (int e = 0; e < g.edge_count(); ++e)
                efcsv << idx << ',' << g.edge(e).id << ',' << fmt(f.edges[e].amplitude) << ','
                      << fmt(f.edges[e].phase) << ',' << fmt(f.sigma) << '\n';
        }
        idx += line.multiplicity;
    }
    write_file(cfg.out_dir, "eigenfunctions.csv", efcsv.str());
    return 0;
}

int cmd_bounds(const RunConfig& cfg) {
    const MetricGraph g = load_input(cfg);
    const std::string id = cfg.corpus_spec.empty() ? cfg.graph_path : cfg.corpus_spec;
    const BoundReport rep = report(g, id, std::max(cfg.k, 7), cfg.tol);
    std::cout << summary(rep);
    write_file(cfg.out_dir, "bounds.csv", to_csv(rep));
    return rep.certified_failure() ? 1 : 0;
}

int cmd_cheeger(const RunConfig& cfg) {
    const MetricGraph g = load_input(cfg);
    std::optional<EdgeWaveFunction> phi1;
    if (cfg.weighted) {
        const Spectrum spec = eigenvalues(g, 1, cfg.tol);
        phi1 = eigenfunction(g, std::sqrt(spec.lambda(1)), 0);
    }
    const CheegerEstimate est = cheeger_search(g, phi1 ? &*phi1 : nullptr);
    std::cout << (cfg.weighted ? "weighted" : "unweighted") << " Cheeger estimate: "
              << fmt(est.value) << "\n";
    std::cout << "cut points:";
    for (const auto& p : est.cut.points)
        std::cout << " (" << g.edge(p.edge).id << ", " << fmt(p.position) << ")";
    std::cout << "\nrefinement history:";
    for (double v : est.history) std::cout << ' ' << fmt(v);
    std::cout << "\n";
    std::ostringstream csv;
    csv << "edge,x0,x1,component\n";
    for (const auto& s : est.cut.segments)
        csv << g.edge(s.edge).id << ',' << fmt(s.x0) << ',' << fmt(s.x1) << ',' << s.component
            << '\n';
    write_file(cfg.out_dir, "cut.csv", csv.str());
    return 0;
}

int cmd_affine(const RunConfig& cfg) {
    const MetricGraph g = load_input(cfg);
    const AffineTriple t = affine_triple(g);
    std::ostringstream csv;
    csv << "edge,slope1,offset1,slope2,offset2,slope3,offset3\n";
    for (int e = 0; e < g.edge_count(); ++e) {
        csv << g.edge(e).id;
        for (int a = 0; a < 3; ++a)
            csv << ',' << t.slopes[e][a] << ',' << fmt(t.offsets[e][a]);
        csv << '\n';
    }
    std::cout << csv.str();
    write_file(cfg.out_dir, "affine.csv", csv.str());
    const auto val = validate_affine_triple(g, t);
    std::cout << "invariants: " << (val.ok ? "ok" : "VIOLATED") << "\n";
    return val.ok ? 0 : 1;
}

int cmd_corpus_verify(const RunConfig& cfg) {
    int failures = 0;
    for (const CorpusEntry& ce : standard_corpus()) {
        std::string status = "pass";
        std::string detail;
        try {
            const int depth = ce.oracle.empty() ? 3 : ce.oracle.back().index;
            const Spectrum spec = eigenvalues(ce.graph, std::max(depth, 2), cfg.tol);
            for (const auto& ov : ce.oracle) {
                const double rel = std::abs(spec.lambda(ov.index) / ov.lambda - 1);
                if (rel > 1e-8) {
                    status = "FAIL";
                    detail = "lambda_" + std::to_string(ov.index) +
                             " rel err " + fmt(rel);
                }
            }
            if (!spec.certified) {
                status = "FAIL";
                detail = "count not certified";
            }
            const BoundReport rep = report(ce.graph, ce.name, 7, cfg.tol);
            if (rep.certified_failure()) {
                status = "FAIL";
                detail = "certified bound check failed";
            }
        } catch (const std::exception& ex) {
            status = "FAIL";
            detail = ex.what();
        }
        if (status != "pass") ++failures;
        std::cout << status << "  " << ce.name << (detail.empty() ? "" : "  [" + detail + "]")
                  << "\n";
    }
    std::cout << (failures == 0 ? "corpus verification passed"
                                : "corpus verification FAILED on " + std::to_string(failures) +
                                      " entries")
              << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_plot(const RunConfig& cfg) {
    const MetricGraph g = load_input(cfg);
    const Spectrum spec = eigenvalues(g, std::max(cfg.k, 2), cfg.tol);
    std::vector<int> path;
    if (!cfg.path_spec.empty()) {
        std::stringstream ss(cfg.path_spec);
        std::string id;
        while (std::getline(ss, id, ',')) path.push_back(g.edge_index(id));
    } else {
        path = default_path(g);
    }
    std::vector<EdgeWaveFunction> funcs;
    std::vector<std::string> labels;
    int idx = 1;
    for (const auto& line : spec.lines) {
        if (idx > cfg.k) break;
        if (line.sigma > 0) {
            funcs.push_back(eigenfunction(g, line.sigma, 0));
        } else {
            EdgeWaveFunction c;
            c.sigma = 0;
            c.edges.assign(g.edge_count(), {1.0 / std::sqrt(g.total_length()),
                                            std::numbers::pi / 2});
            funcs.push_back(std::move(c));
        }
        labels.push_back("phi" + std::to_string(idx));
        idx += line.multiplicity;
    }
    std::vector<const EdgeWaveFunction*> fptr;
    for (const auto& f : funcs) fptr.push_back(&f);
    CurveSet curves = sample_along_path(g, path, fptr, labels, std::max(cfg.samples, 8));
    if (cfg.guides && g.has_dirichlet() && funcs.front().sigma > 0) {
        const Gamma1 g1 = gamma1(g, funcs.front());
        if (!g1.single_point) {
            const HarnackData hd = harnack(g, funcs.front());
            curves.guides.push_back({"m1", hd.m1});
            curves.guides.push_back({"M1", hd.M1});
        }
    }
    const std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
    if (cfg.format == "csv" || cfg.format == "both")
        write_file(dir, "plot.csv", to_csv(curves));
    if (cfg.format == "svg" || cfg.format == "both")
        write_file(dir, "plot.svg", to_svg(curves, cfg.corpus_spec));
    std::cout << "plotted " << funcs.size() << " curves over " << path.size()
              << " edges into " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for compact metric graphs"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--graph", cfg.graph_path, "graph file (JSON)");
        sub->add_option("--corpus", cfg.corpus_spec, "corpus family, e.g. star4:a=0.5");
        sub->add_option("--k", cfg.k, "number of eigenvalues");
        sub->add_option("--tol", cfg.tol, "eigenvalue tolerance");
        sub->add_option("--seed", cfg.seed, "random seed for generated graphs");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--format", cfg.format, "csv|svg|both");
    };
    auto* s1 = app.add_subcommand("spectrum", "compute eigenvalues and eigenfunctions");
    add_common(s1);
    auto* s2 = app.add_subcommand("bounds", "evaluate the bound catalog");
    add_common(s2);
    auto* s3 = app.add_subcommand("cheeger", "optimize a Cheeger cut");
    add_common(s3);
    s3->add_flag("--weighted", cfg.weighted, "weight by the squared ground state");
    auto* s4 = app.add_subcommand("affine", "affine triple of a metric tree");
    add_common(s4);
    auto* s5 = app.add_subcommand("corpus-verify", "verify solver output on the full corpus");
    add_common(s5);
    auto* s6 = app.add_subcommand("plot", "sample eigenfunctions along a path");
    add_common(s6);
    s6->add_option("--path", cfg.path_spec, "comma-separated edge ids");
    s6->add_option("--samples", cfg.samples, "samples per edge");
    s6->add_flag("--guides", cfg.guides, "draw m1/M1 guide lines");

    CLI11_PARSE(app, argc, argv);
    try {
        if (s1->parsed()) return cmd_spectrum(cfg);
        if (s2->parsed()) return cmd_bounds(cfg);
        if (s3->parsed()) return cmd_cheeger(cfg);
        if (s4->parsed()) return cmd_affine(cfg);
        if (s5->parsed()) return cmd_corpus_verify(cfg);
        if (s6->parsed()) return cmd_plot(cfg);
    } catch (const GraphError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return 2;
    } catch (const SolverError& ex) {
        std::cerr << "solver error: " << ex.what() << "\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
