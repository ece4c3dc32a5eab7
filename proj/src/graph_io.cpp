#include "qcluster/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcluster {

WeightedGraph graph_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
        throw std::invalid_argument("graph JSON needs \"nodes\" and \"edges\"");
    }
    const auto &nodes = doc.at("nodes");
    if (!nodes.is_number_integer() || nodes.get<long long>() <= 0) {
        throw std::invalid_argument("graph JSON: \"nodes\" must be a positive integer");
    }
    const auto &edges_json = doc.at("edges");
    if (!edges_json.is_array()) {
        throw std::invalid_argument("graph JSON: \"edges\" must be an array");
    }
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < edges_json.size(); ++k) {
        const auto &e = edges_json[k];
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number()) {
            throw std::invalid_argument("graph JSON: edge " + std::to_string(k) + " must be [i, j, w]");
        }
        if (e[0].get<long long>() < 0 || e[1].get<long long>() < 0) {
            throw std::invalid_argument("graph JSON: edge " + std::to_string(k) + " has a negative endpoint");
        }
        edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    return WeightedGraph(nodes.get<std::size_t>(), std::move(edges));
}

nlohmann::json graph_to_json(const WeightedGraph &g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge &e : g.edges()) {
        edges.push_back({e.u, e.v, e.weight});
    }
    return {{"nodes", g.node_count()}, {"edges", edges}};
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << contents;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

WeightedGraph read_graph_file(const std::filesystem::path &path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    return graph_from_json(doc);
}

void write_graph_file(const WeightedGraph &g, const std::filesystem::path &path) {
    write_text_file(path, graph_to_json(g).dump(2) + "\n");
}

} // namespace qcluster
