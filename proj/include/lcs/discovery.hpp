#pragma once

#include <map>
#include <string>
#include <vector>

#include "lcs/graph.hpp"
#include "lcs/independence.hpp"
#include "lcs/projection.hpp"

namespace lcs {

enum class SkeletonSearch {
  // Conditioning sets drawn from current adjacencies inside MB+(v), by
  // increasing size, then from Possible-D-Sep sets for the pairs at v.
  Adjacency,
  // Every subset of MB(v) for each pair at v.
  Exhaustive,
};

struct LearnerConfig {
  SkeletonSearch search = SkeletonSearch::Adjacency;
  // Largest separating set tried during local skeleton search; negative
  // means no limit.
  int max_sepset_size = -1;
  // Hard cap on processed nodes; negative means no limit.
  int max_processed = -1;
};

struct LocalStructure {
  std::string center;
  MixedGraph pag_fragment;
  NodeSet mb;
  NodeSet pa;
  NodeSet ncpa;
  NodeSet ch;
  NodeSet pa_star;
  NodeSet poss_de;
  // Pairs of fragment nodes known to be nonadjacent, with the set that
  // separated them.
  std::map<std::pair<std::string, std::string>, NodeSet> sepsets;
  std::vector<std::string> processed;
  std::string stop_rule;

  bool known_nonadjacent(const std::string& a, const std::string& b) const;
  NonadjacentFn nonadjacent_fn() const;
};

struct DerivedSets {
  NodeSet pa;
  NodeSet ncpa;
  NodeSet ch;
  NodeSet pa_star;
  NodeSet poss_de;
};

// x depends on v given every other variable.
NodeSet total_conditioning_mb(CiEngine& ci, std::string_view x);

DerivedSets derive_sets(const MixedGraph& fragment, std::string_view x, const NodeSet& mb);

LocalStructure learn_local_pag(CiEngine& ci, std::string_view x, const LearnerConfig& cfg = {});

}  // namespace lcs
