#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lcs {

enum class Mark : std::uint8_t { None = 0, Tail, Arrow, Circle };
enum class GraphKind { Dag, Mag, Pag };

using NodeSet = std::set<std::string>;
using Mask = std::vector<char>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  std::string a;
  std::string b;
  Mark mark_a = Mark::None;
  Mark mark_b = Mark::None;
};

// Mixed graph over string-labelled nodes. Every adjacent pair carries one
// edge with a mark at each end. Indices follow node declaration order.
class MixedGraph {
 public:
  MixedGraph() = default;
  MixedGraph(GraphKind kind, std::vector<std::string> nodes);

  GraphKind kind() const { return kind_; }
  void set_kind(GraphKind k) { kind_ = k; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& name(int v) const { return nodes_[v]; }
  int index(std::string_view id) const;
  std::optional<int> find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id).has_value(); }

  void add_edge(int a, int b, Mark at_a, Mark at_b);
  void add_edge(std::string_view a, std::string_view b, Mark at_a, Mark at_b);
  void add_directed(std::string_view from, std::string_view to) {
    add_edge(from, to, Mark::Tail, Mark::Arrow);
  }
  void add_bidirected(std::string_view a, std::string_view b) {
    add_edge(a, b, Mark::Arrow, Mark::Arrow);
  }
  void remove_edge(int a, int b);
  // Mark at v on the edge v - u.
  void set_mark(int v, int u, Mark m);
  Mark mark_at(int v, int u) const { return marks_[idx(v, u)]; }
  bool adjacent(int a, int b) const { return a != b && marks_[idx(a, b)] != Mark::None; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  std::size_t edge_count() const;
  std::vector<Edge> edges() const;

  bool is_parent(int p, int c) const {
    return mark_at(p, c) == Mark::Tail && mark_at(c, p) == Mark::Arrow;
  }
  bool is_bidirected(int a, int b) const {
    return mark_at(a, b) == Mark::Arrow && mark_at(b, a) == Mark::Arrow;
  }
  bool has_circles() const;
  std::vector<int> parents(int v) const;
  std::vector<int> children(int v) const;

  MixedGraph induced(std::span<const int> keep) const;
  // Same kind, same node set, same edges; node order and edge order ignored.
  bool same_as(const MixedGraph& other) const;

  std::vector<int> indices(const NodeSet& ids) const;
  NodeSet names(std::span<const int> vs) const;
  std::vector<int> label_order() const;

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * nodes_.size() + b; }

  GraphKind kind_ = GraphKind::Dag;
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<Mark> marks_;
  std::vector<std::vector<int>> adj_;
};

enum class ViolationKind { DirectedCycle, AlmostDirectedCycle, NotMaximal, BadMark };

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const MixedGraph& g);

// Ancestor and descendant sets are reflexive and follow directed edges only.
Mask ancestor_mask(const MixedGraph& g, std::span<const int> vs);
Mask descendant_mask(const MixedGraph& g, std::span<const int> vs);
NodeSet ancestors(const MixedGraph& g, std::string_view v);
NodeSet descendants(const MixedGraph& g, std::string_view v);

// Nodes reachable from v along possibly directed paths, v included.
Mask possible_descendant_mask(const MixedGraph& g, int v);
NodeSet possible_descendants(const MixedGraph& g, std::string_view v);

bool m_separated(const MixedGraph& g, int x, int y, std::span<const int> z);
bool m_separated(const MixedGraph& g, std::string_view x, std::string_view y, const NodeSet& z);
// Nodes outside z and x that are m-connected to x given z.
Mask m_connected_mask(const MixedGraph& g, int x, std::span<const int> z);

std::vector<int> district(const MixedGraph& g, int v);
NodeSet district(const MixedGraph& g, std::string_view v);

// Nodes joined to v by a collider path (adjacent nodes included).
std::vector<int> markov_blanket_mag(const MixedGraph& g, int v);
NodeSet markov_blanket_mag(const MixedGraph& g, std::string_view v);

enum class PathKind { Directed, PossiblyDirected, ColliderPath, ArrowColliderPath };
std::set<PathKind> classify_path(const MixedGraph& g, const std::vector<std::string>& path);

bool is_collider(const MixedGraph& g, int a, int b, int c);

const char* to_string(GraphKind k);
const char* to_string(Mark m);
GraphKind kind_from_string(std::string_view s);
Mark mark_from_string(std::string_view s);

std::vector<int> mask_to_vector(const Mask& m);

}  // namespace lcs
