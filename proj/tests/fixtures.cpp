#include "fixtures.hpp"

#include <set>

namespace fixtures {

using lcs::GraphKind;
using lcs::Mark;
using lcs::MixedGraph;

MixedGraph build(GraphKind kind, const std::vector<std::string>& nodes, const std::vector<Arc>& arcs) {
  MixedGraph g(kind, nodes);
  for (const auto& e : arcs) {
    switch (e.kind) {
      case '>': g.add_edge(e.a, e.b, Mark::Tail, Mark::Arrow); break;
      case '<': g.add_edge(e.a, e.b, Mark::Arrow, Mark::Arrow); break;
      case 'o': g.add_edge(e.a, e.b, Mark::Circle, Mark::Arrow); break;
      case '-': g.add_edge(e.a, e.b, Mark::Circle, Mark::Circle); break;
      default: throw lcs::GraphError("bad arc kind");
    }
  }
  return g;
}

namespace {

const std::vector<std::string> kTwoRoute{"X", "Y", "V1", "V2", "V4", "V5", "V6", "V7", "V8"};

std::vector<std::string> plus_latent(std::vector<std::string> v) {
  v.push_back("L1");
  return v;
}

}  // namespace

MixedGraph two_route_dag() {
  return build(GraphKind::Dag, plus_latent(kTwoRoute),
               {{"L1", "V4", '>'}, {"L1", "X", '>'}, {"V5", "X", '>'}, {"V5", "V2", '>'},
                {"X", "V1", '>'}, {"X", "V7", '>'}, {"V6", "V1", '>'}, {"V1", "V2", '>'},
                {"V2", "Y", '>'}, {"V7", "V8", '>'}, {"V8", "Y", '>'}});
}

MixedGraph two_route_mag() {
  return build(GraphKind::Mag, kTwoRoute,
               {{"V4", "X", '<'}, {"V5", "X", '>'}, {"V5", "V2", '>'}, {"X", "V1", '>'},
                {"X", "V7", '>'}, {"V6", "V1", '>'}, {"V1", "V2", '>'}, {"V2", "Y", '>'},
                {"V7", "V8", '>'}, {"V8", "Y", '>'}});
}

MixedGraph two_route_pag() {
  return build(GraphKind::Pag, kTwoRoute,
               {{"X", "V7", '>'}, {"V7", "V8", '>'}, {"V8", "Y", '>'}, {"X", "V1", '>'},
                {"V1", "V2", '>'}, {"V2", "Y", '>'}, {"V4", "X", 'o'}, {"V5", "X", 'o'},
                {"V5", "V2", '>'}, {"V6", "V1", 'o'}});
}

namespace {
const std::vector<std::string> kParentWitness{"X", "Y", "V1", "V2", "V3", "V4", "V5", "V6"};
}

MixedGraph parent_witness_dag() {
  return build(GraphKind::Dag, plus_latent(kParentWitness),
               {{"L1", "V1", '>'}, {"L1", "V3", '>'}, {"V4", "V3", '>'}, {"V3", "X", '>'},
                {"X", "Y", '>'}, {"X", "V2", '>'}, {"V2", "Y", '>'}, {"V6", "V2", '>'},
                {"Y", "V5", '>'}, {"V4", "V5", '>'}});
}

MixedGraph parent_witness_mag() {
  return build(GraphKind::Mag, kParentWitness,
               {{"V1", "V3", '<'}, {"V4", "V3", '>'}, {"V3", "X", '>'}, {"X", "Y", '>'},
                {"X", "V2", '>'}, {"V2", "Y", '>'}, {"V6", "V2", '>'}, {"Y", "V5", '>'},
                {"V4", "V5", '>'}});
}

MixedGraph parent_witness_pag() {
  return build(GraphKind::Pag, kParentWitness,
               {{"X", "Y", '>'}, {"X", "V2", '>'}, {"V2", "Y", '>'}, {"V1", "V3", 'o'},
                {"V3", "X", '>'}, {"Y", "V5", '>'}, {"V4", "V3", 'o'}, {"V6", "V2", 'o'},
                {"V4", "V5", '>'}});
}

namespace {
const std::vector<std::string> kBidirected{"V1", "V2", "V3", "V4", "V5"};
}

MixedGraph bidirected_pair_dag() {
  return build(GraphKind::Dag, plus_latent(kBidirected),
               {{"L1", "V2", '>'}, {"L1", "V3", '>'}, {"V1", "V2", '>'}, {"V2", "V5", '>'},
                {"V3", "V5", '>'}, {"V4", "V3", '>'}, {"V4", "V5", '>'}});
}

MixedGraph bidirected_pair_mag() {
  return build(GraphKind::Mag, kBidirected,
               {{"V1", "V2", '>'}, {"V2", "V5", '>'}, {"V3", "V5", '>'}, {"V2", "V3", '<'},
                {"V4", "V3", '>'}, {"V4", "V5", '>'}});
}

MixedGraph bidirected_pair_pag() {
  return build(GraphKind::Pag, kBidirected,
               {{"V2", "V5", '>'}, {"V3", "V5", '>'}, {"V1", "V2", 'o'}, {"V4", "V5", 'o'},
                {"V4", "V3", 'o'}, {"V2", "V3", '<'}});
}

MixedGraph mildew_derived_dag() {
  auto t = [](const char* base, int i) { return std::string(base) + "_" + std::to_string(i); };
  std::vector<std::string> nodes;
  for (int i = 1; i <= 4; ++i) nodes.push_back(t("meldug", i));
  for (int i = 0; i <= 4; ++i) nodes.push_back(t("lai", i));
  for (int i = 1; i <= 3; ++i) nodes.push_back(t("mikro", i));
  for (int i = 1; i <= 4; ++i) nodes.push_back(t("foto", i));
  for (int i = 1; i <= 4; ++i) nodes.push_back(t("dm", i));
  nodes.push_back("udbytte");
  for (int i = 1; i <= 3; ++i) nodes.push_back(t("middel", i));
  for (int i = 1; i <= 4; ++i) nodes.push_back(t("temp", i));
  for (int i = 1; i <= 3; ++i) nodes.push_back(t("nedboer", i));
  for (int i = 1; i <= 4; ++i) nodes.push_back(t("straaling", i));

  std::vector<Arc> arcs;
  auto arc = [&](const std::string& a, const std::string& b) { arcs.push_back({a, b, '>'}); };
  for (int i = 2; i <= 4; ++i) {
    arc(t("meldug", i - 1), t("meldug", i));
    arc(t("lai", i - 1), t("meldug", i));
    arc(t("mikro", i - 1), t("meldug", i));
    arc(t("middel", i - 1), t("meldug", i));
  }
  for (int i = 1; i <= 4; ++i) {
    arc(t("lai", i - 1), t("lai", i));
    arc(t("meldug", i), t("lai", i));
  }
  for (int i = 1; i <= 3; ++i) {
    arc(t("lai", i), t("mikro", i));
    arc(t("temp", i), t("mikro", i));
    arc(t("nedboer", i), t("mikro", i));
  }
  for (int i = 1; i <= 4; ++i) {
    arc(t("lai", i), t("foto", i));
    arc(t("temp", i), t("foto", i));
    arc(t("straaling", i), t("foto", i));
  }
  arc("foto_1", "dm_1");
  for (int i = 2; i <= 4; ++i) {
    arc(t("dm", i - 1), t("dm", i));
    arc(t("foto", i), t("dm", i));
  }
  arc("dm_4", "udbytte");
  return build(GraphKind::Dag, nodes, arcs);
}

}  // namespace fixtures
