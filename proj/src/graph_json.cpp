#include "lcs/graph_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lcs {

using nlohmann::json;

MixedGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphError(std::string("graph json: ") + e.what());
  }
  try {
    MixedGraph g(kind_from_string(j.at("kind").get<std::string>()),
                 j.at("nodes").get<std::vector<std::string>>());
    for (const auto& e : j.at("edges"))
      g.add_edge(e.at("a").get<std::string>(), e.at("b").get<std::string>(),
                 mark_from_string(e.at("mark_a").get<std::string>()),
                 mark_from_string(e.at("mark_b").get<std::string>()));
    return g;
  } catch (const json::exception& e) {
    throw GraphError(std::string("graph json: ") + e.what());
  }
}

std::string graph_to_json(const MixedGraph& g, int indent) {
  json j;
  j["kind"] = to_string(g.kind());
  j["nodes"] = g.nodes();
  j["edges"] = json::array();
  for (const auto& e : g.edges())
    j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"mark_a", to_string(e.mark_a)},
                          {"mark_b", to_string(e.mark_b)}});
  return j.dump(indent);
}

MixedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

void write_graph(const MixedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write " + path);
  out << graph_to_json(g) << "\n";
}

}  // namespace lcs
