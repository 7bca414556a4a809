#pragma once

#include <functional>

#include "lcs/graph.hpp"
#include "lcs/orientation.hpp"

namespace lcs {

enum class ProjectionMethod { Auto, Exhaustive, InducingPath };

// MAG over the observed nodes of a DAG. Auto enumerates separating sets when
// there are at most 12 observed nodes and searches inducing paths otherwise.
MixedGraph latent_project(const MixedGraph& dag, const NodeSet& latents,
                          ProjectionMethod method = ProjectionMethod::Auto);

MixedGraph mag_to_pag(const MixedGraph& mag, OrientationTrace* trace = nullptr);

// True when a and b are known to be nonadjacent.
using NonadjacentFn = std::function<bool(int, int)>;

// Every directed edge of a DAG is visible.
bool is_visible(const MixedGraph& g, int from, int to, const NonadjacentFn& nonadjacent);
bool is_visible(const MixedGraph& g, int from, int to);

struct VisibleEdge {
  std::string from;
  std::string to;
  bool visible;
};

std::vector<VisibleEdge> visible_edges(const MixedGraph& g);

}  // namespace lcs
