// io.hpp — graph file format (JSON) and tabular export helpers.
//
// File schema:
//   { "vertices": [ { "id": "...", "bc": "standard"|"dirichlet" }, ... ],
//     "edges":    [ { "id": "...", "from": "...", "to": "...", "length": 1.5 }, ... ] }
#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qgraph/format.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

inline MetricGraph parse_graph(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw GraphError("graph document must be an object with 'vertices' and 'edges' arrays");
    const auto& jv = doc.at("vertices");
    const auto& je = doc.at("edges");
    if (!jv.is_array() || !je.is_array())
        throw GraphError("'vertices' and 'edges' must be arrays");
    std::vector<Vertex> vs;
    std::map<std::string, int> index;
    for (const auto& item : jv) {
        if (!item.is_object() || !item.contains("id") || !item.contains("bc"))
            throw GraphError("each vertex needs 'id' and 'bc'");
        Vertex v;
        v.id = item.at("id").get<std::string>();
        const std::string bc = item.at("bc").get<std::string>();
        if (bc == "standard") v.bc = BC::standard;
        else if (bc == "dirichlet") v.bc = BC::dirichlet;
        else throw GraphError("vertex '" + v.id + "': bc must be 'standard' or 'dirichlet'");
        if (!index.emplace(v.id, static_cast<int>(vs.size())).second)
            throw GraphError("duplicate vertex id: " + v.id);
        vs.push_back(std::move(v));
    }
    std::vector<Edge> es;
    for (const auto& item : je) {
        if (!item.is_object() || !item.contains("id") || !item.contains("from") ||
            !item.contains("to") || !item.contains("length"))
            throw GraphError("each edge needs 'id', 'from', 'to', 'length'");
        Edge e;
        e.id = item.at("id").get<std::string>();
        const std::string from = item.at("from").get<std::string>();
        const std::string to = item.at("to").get<std::string>();
        auto fi = index.find(from);
        auto ti = index.find(to);
        if (fi == index.end()) throw GraphError("edge '" + e.id + "': unknown vertex '" + from + "'");
        if (ti == index.end()) throw GraphError("edge '" + e.id + "': unknown vertex '" + to + "'");
        e.from = fi->second;
        e.to = ti->second;
        if (!item.at("length").is_number())
            throw GraphError("edge '" + e.id + "': length must be a number");
        e.length = item.at("length").get<double>();
        es.push_back(std::move(e));
    }
    return MetricGraph(std::move(vs), std::move(es));
}

inline MetricGraph parse_graph(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw GraphError(std::string("graph document is not valid JSON: ") + ex.what());
    }
    return parse_graph(doc);
}

inline MetricGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

inline nlohmann::json to_json(const MetricGraph& g) {
    nlohmann::json doc;
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : g.vertices())
        doc["vertices"].push_back({{"id", v.id}, {"bc", v.bc == BC::dirichlet ? "dirichlet" : "standard"}});
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges())
        doc["edges"].push_back({{"id", e.id},
                                {"from", g.vertex(e.from).id},
                                {"to", g.vertex(e.to).id},
                                {"length", e.length}});
    return doc;
}

inline void save_graph(const MetricGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write graph file: " + path);
    out << to_json(g).dump(2) << "\n";
}

}  // namespace qgraph
