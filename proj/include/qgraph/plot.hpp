// plot.hpp — eigenfunction profiles along an edge path, exported as CSV and
// a self-contained SVG. No interactive display; files are deterministic.
#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qgraph/eigensolve.hpp"
#include "qgraph/format.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

struct CurveSet {
    std::vector<double> x;                  // arclength along the path
    std::vector<std::vector<double>> ys;    // one row per curve
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, double>> guides;  // horizontal lines
};

// Walk a sequence of edges (consecutive edges must share a vertex) and sample
// the given functions along it.
inline CurveSet sample_along_path(const MetricGraph& g, const std::vector<int>& path,
                                  const std::vector<const EdgeWaveFunction*>& funcs,
                                  const std::vector<std::string>& labels, int samples_per_edge) {
    if (path.empty()) throw GraphError("empty path");
    for (int e : path)
        if (e < 0 || e >= g.edge_count()) throw GraphError("path edge not in graph");
    // orient the walk: determine the start vertex of each edge traversal
    std::vector<int> enter(path.size());  // 0: traverse from->to, 1: reversed
    if (path.size() == 1) {
        enter[0] = 0;
    } else {
        for (size_t i = 0; i < path.size(); ++i) {
            const Edge& cur = g.edge(path[i]);
            if (i + 1 < path.size()) {
                const Edge& nxt = g.edge(path[i + 1]);
                const bool to_shared = cur.to == nxt.from || cur.to == nxt.to;
                const bool from_shared = cur.from == nxt.from || cur.from == nxt.to;
                if (!to_shared && !from_shared)
                    throw GraphError("path edges " + cur.id + "," + nxt.id + " do not meet");
                if (i == 0) {
                    enter[i] = to_shared ? 0 : 1;
                } else {
                    // must continue from the previous exit vertex
                    const int prev_exit = enter[i - 1] == 0 ? g.edge(path[i - 1]).to
                                                            : g.edge(path[i - 1]).from;
                    if (cur.from == prev_exit) enter[i] = 0;
                    else if (cur.to == prev_exit) enter[i] = 1;
                    else throw GraphError("path is not a connected walk at edge " + cur.id);
                }
            } else {
                const int prev_exit = enter[i - 1] == 0 ? g.edge(path[i - 1]).to
                                                        : g.edge(path[i - 1]).from;
                if (cur.from == prev_exit) enter[i] = 0;
                else if (cur.to == prev_exit) enter[i] = 1;
                else throw GraphError("path is not a connected walk at edge " + cur.id);
            }
        }
    }
    CurveSet out;
    out.labels = labels;
    out.ys.resize(funcs.size());
    double base = 0;
    for (size_t i = 0; i < path.size(); ++i) {
        const Edge& ed = g.edge(path[i]);
        for (int s = 0; s <= samples_per_edge; ++s) {
            if (i > 0 && s == 0) continue;  // avoid duplicating shared vertices
            const double t = ed.length * s / samples_per_edge;
            const double xval = enter[i] == 0 ? t : ed.length - t;
            out.x.push_back(base + t);
            for (size_t f = 0; f < funcs.size(); ++f)
                out.ys[f].push_back(funcs[f]->value(path[i], xval));
        }
        base += ed.length;
    }
    return out;
}

inline std::string to_csv(const CurveSet& c) {
    std::ostringstream ss;
    ss << "x";
    for (const auto& l : c.labels) ss << ',' << l;
    ss << '\n';
    for (size_t i = 0; i < c.x.size(); ++i) {
        ss << fmt(c.x[i]);
        for (const auto& y : c.ys) ss << ',' << fmt(y[i]);
        ss << '\n';
    }
    return ss.str();
}

inline std::string to_svg(const CurveSet& c, const std::string& title = {}, int width = 800,
                          int height = 480) {
    const double margin = 50;
    double xmin = c.x.front(), xmax = c.x.back();
    double ymin = 0, ymax = 0;
    for (const auto& y : c.ys)
        for (double v : y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    for (const auto& [_, v] : c.guides) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    if (ymax == ymin) ymax = ymin + 1;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto X = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
    auto Y = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    auto coord = [](double v) {
        std::ostringstream ss;
        ss << std::fixed << std::setprecision(2) << v;
        return ss.str();
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream ss;
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    ss << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        ss << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    // axes
    ss << "<line x1=\"" << coord(margin) << "\" y1=\"" << coord(Y(0.0 >= ymin && 0.0 <= ymax ? 0.0 : ymin))
       << "\" x2=\"" << coord(width - margin) << "\" y2=\""
       << coord(Y(0.0 >= ymin && 0.0 <= ymax ? 0.0 : ymin)) << "\" stroke=\"#888\"/>\n";
    ss << "<line x1=\"" << coord(margin) << "\" y1=\"" << coord(Y(ymin)) << "\" x2=\""
       << coord(margin) << "\" y2=\"" << coord(Y(ymax)) << "\" stroke=\"#888\"/>\n";
    for (const auto& [label, v] : c.guides) {
        ss << "<line x1=\"" << coord(margin) << "\" y1=\"" << coord(Y(v)) << "\" x2=\""
           << coord(width - margin) << "\" y2=\"" << coord(Y(v))
           << "\" stroke=\"#999\" stroke-dasharray=\"6,4\"/>\n";
        ss << "<text x=\"" << coord(width - margin + 4) << "\" y=\"" << coord(Y(v) + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    }
    for (size_t f = 0; f < c.ys.size(); ++f) {
        ss << "<polyline fill=\"none\" stroke=\"" << colors[f % 5]
           << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < c.x.size(); ++i)
            ss << coord(X(c.x[i])) << ',' << coord(Y(c.ys[f][i])) << ' ';
        ss << "\"/>\n";
        ss << "<text x=\"" << coord(margin + 8) << "\" y=\"" << coord(margin + 16 + 16 * f)
           << "\" fill=\"" << colors[f % 5] << "\" font-family=\"sans-serif\" font-size=\"13\">"
           << (f < c.labels.size() ? c.labels[f] : "") << "</text>\n";
    }
    ss << "</svg>\n";
    return ss.str();
}

// Default plotting path: a shortest path realizing the largest vertex-pair
// distance, as an edge sequence.
inline std::vector<int> default_path(const MetricGraph& g) {
    const auto D = vertex_distances(g);
    int a = 0, b = 0;
    for (int u = 0; u < g.vertex_count(); ++u)
        for (int v = 0; v < g.vertex_count(); ++v)
            if (D[u][v] > D[a][b] && std::isfinite(D[u][v])) {
                a = u;
                b = v;
            }
    // greedy walk from a to b along distance-decreasing edges
    std::vector<int> path;
    int cur = a;
    while (cur != b) {
        int next_edge = -1, next_vertex = -1;
        for (const HalfEdge& h : g.incidence(cur)) {
            const int w = g.endpoint(h.edge, 1 - h.end);
            if (std::abs(D[cur][b] - g.edge(h.edge).length - D[w][b]) < 1e-12) {
                next_edge = h.edge;
                next_vertex = w;
                break;
            }
        }
        if (next_edge < 0) throw GraphError("failed to trace a diameter path");
        path.push_back(next_edge);
        cur = next_vertex;
    }
    if (path.empty()) path.push_back(0);
    return path;
}

}  // namespace qgraph
