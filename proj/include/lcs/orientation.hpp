#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lcs/graph.hpp"

namespace lcs {

// Separating sets for pairs known to be nonadjacent. A pair absent from the
// store is treated as "adjacency unknown" by the orientation rules.
class SepsetStore {
 public:
  void set(int a, int b, std::vector<int> s);
  const std::vector<int>* find(int a, int b) const;
  bool contains(int a, int b) const { return find(a, b) != nullptr; }
  bool separates_with(int a, int b, int v) const;
  std::size_t size() const { return sets_.size(); }

 private:
  std::map<std::pair<int, int>, std::vector<int>> sets_;
};

struct OrientationEvent {
  std::string rule;
  int at;     // mark written at this node
  int other;  // on the edge at - other
  Mark mark;
  bool conflict;  // the mark was already set to something else and was kept
};

using OrientationTrace = std::vector<OrientationEvent>;

// Applies R0-R4 and R8-R10 in place. Edges of g are the known adjacencies;
// unresolved marks must be circles.
void orient_pag(MixedGraph& g, const SepsetStore& sepsets, OrientationTrace* trace = nullptr);

}  // namespace lcs
