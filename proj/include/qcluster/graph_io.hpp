#pragma once

#include "qcluster/graph.hpp"

#include <filesystem>
#include <string>

#include "json.hpp"

namespace qcluster {

/// Graph file format: {"nodes": n, "edges": [[i, j, w], ...]}.
/// Rejects endpoints >= nodes, negative weights and duplicate pairs.
WeightedGraph graph_from_json(const nlohmann::json &doc);
nlohmann::json graph_to_json(const WeightedGraph &g);

WeightedGraph read_graph_file(const std::filesystem::path &path);
void write_graph_file(const WeightedGraph &g, const std::filesystem::path &path);

/// Reads a whole file, throwing std::runtime_error naming the path on failure.
std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &contents);

} // namespace qcluster
