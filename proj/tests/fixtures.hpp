#pragma once

#include <string>
#include <vector>

#include "lcs/graph.hpp"

namespace fixtures {

struct Arc {
  std::string a;
  std::string b;
  char kind;  // '>' a->b, '<' a<->b, 'o' a o-> b, '-' a o-o b
};

lcs::MixedGraph build(lcs::GraphKind kind, const std::vector<std::string>& nodes, const std::vector<Arc>& arcs);

// X reaches Y along two directed routes; a latent confounds V4 and X.
lcs::MixedGraph two_route_dag();
lcs::MixedGraph two_route_mag();
lcs::MixedGraph two_route_pag();

// V3 is the only parent of X and must be adjusted for.
lcs::MixedGraph parent_witness_dag();
lcs::MixedGraph parent_witness_mag();
lcs::MixedGraph parent_witness_pag();

// V2 <-> V3 with a collider chain making V3 -> V5 visible.
lcs::MixedGraph bidirected_pair_dag();
lcs::MixedGraph bidirected_pair_mag();
lcs::MixedGraph bidirected_pair_pag();

inline const lcs::NodeSet kSingleLatent{"L1"};

// Crop-growth network rebuilt from its per-slice pattern.
lcs::MixedGraph mildew_derived_dag();
inline const lcs::NodeSet kMildewLatents{"meldug_3", "temp_2"};

}  // namespace fixtures
