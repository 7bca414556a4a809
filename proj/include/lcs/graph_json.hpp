#pragma once

#include <iosfwd>
#include <string>

#include "lcs/graph.hpp"

namespace lcs {

// {"kind": "dag|mag|pag", "nodes": [...], "edges": [{"a","b","mark_a","mark_b"}]}
MixedGraph graph_from_json(const std::string& text);
std::string graph_to_json(const MixedGraph& g, int indent = 2);
MixedGraph read_graph(const std::string& path);
void write_graph(const MixedGraph& g, const std::string& path);

}  // namespace lcs
