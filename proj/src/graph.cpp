#include "lcs/graph.hpp"

#include <algorithm>
#include <deque>

namespace lcs {

MixedGraph::MixedGraph(GraphKind kind, std::vector<std::string> nodes)
    : kind_(kind), nodes_(std::move(nodes)) {
  for (int i = 0; i < size(); ++i) {
    if (nodes_[i].empty()) throw GraphError("empty node id");
    if (!index_.emplace(nodes_[i], i).second) throw GraphError("duplicate node id: " + nodes_[i]);
  }
  marks_.assign(nodes_.size() * nodes_.size(), Mark::None);
  adj_.resize(nodes_.size());
}

int MixedGraph::index(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw GraphError("unknown node: " + std::string(id));
  return it->second;
}

std::optional<int> MixedGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void MixedGraph::add_edge(int a, int b, Mark at_a, Mark at_b) {
  if (a == b) throw GraphError("self-loop on " + nodes_[a]);
  if (at_a == Mark::None || at_b == Mark::None) throw GraphError("edge without marks");
  if (adjacent(a, b)) throw GraphError("multiple edges between " + nodes_[a] + " and " + nodes_[b]);
  marks_[idx(a, b)] = at_a;
  marks_[idx(b, a)] = at_b;
  adj_[a].insert(std::lower_bound(adj_[a].begin(), adj_[a].end(), b), b);
  adj_[b].insert(std::lower_bound(adj_[b].begin(), adj_[b].end(), a), a);
}

void MixedGraph::add_edge(std::string_view a, std::string_view b, Mark at_a, Mark at_b) {
  add_edge(index(a), index(b), at_a, at_b);
}

void MixedGraph::remove_edge(int a, int b) {
  if (!adjacent(a, b)) return;
  marks_[idx(a, b)] = Mark::None;
  marks_[idx(b, a)] = Mark::None;
  std::erase(adj_[a], b);
  std::erase(adj_[b], a);
}

void MixedGraph::set_mark(int v, int u, Mark m) {
  if (!adjacent(v, u)) throw GraphError("no edge between " + nodes_[v] + " and " + nodes_[u]);
  if (m == Mark::None) throw GraphError("use remove_edge to delete an edge");
  marks_[idx(v, u)] = m;
}

std::size_t MixedGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adj_) n += a.size();
  return n / 2;
}

std::vector<Edge> MixedGraph::edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < size(); ++a)
    for (int b : adj_[a])
      if (a < b) out.push_back({nodes_[a], nodes_[b], mark_at(a, b), mark_at(b, a)});
  return out;
}

bool MixedGraph::has_circles() const {
  return std::find(marks_.begin(), marks_.end(), Mark::Circle) != marks_.end();
}

std::vector<int> MixedGraph::parents(int v) const {
  std::vector<int> out;
  for (int u : adj_[v])
    if (is_parent(u, v)) out.push_back(u);
  return out;
}

std::vector<int> MixedGraph::children(int v) const {
  std::vector<int> out;
  for (int u : adj_[v])
    if (is_parent(v, u)) out.push_back(u);
  return out;
}

MixedGraph MixedGraph::induced(std::span<const int> keep) const {
  std::vector<std::string> names;
  for (int v : keep) names.push_back(nodes_[v]);
  MixedGraph g(kind_, names);
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (adjacent(keep[i], keep[j]))
        g.add_edge(static_cast<int>(i), static_cast<int>(j), mark_at(keep[i], keep[j]),
                   mark_at(keep[j], keep[i]));
  return g;
}

bool MixedGraph::same_as(const MixedGraph& o) const {
  if (kind_ != o.kind_ || size() != o.size()) return false;
  for (const auto& n : nodes_)
    if (!o.contains(n)) return false;
  if (edge_count() != o.edge_count()) return false;
  for (int a = 0; a < size(); ++a)
    for (int b : adj_[a]) {
      int oa = o.index(nodes_[a]), ob = o.index(nodes_[b]);
      if (o.mark_at(oa, ob) != mark_at(a, b)) return false;
    }
  return true;
}

std::vector<int> MixedGraph::indices(const NodeSet& ids) const {
  std::vector<int> out;
  for (const auto& id : ids) out.push_back(index(id));
  std::sort(out.begin(), out.end());
  return out;
}

NodeSet MixedGraph::names(std::span<const int> vs) const {
  NodeSet out;
  for (int v : vs) out.insert(nodes_[v]);
  return out;
}

std::vector<int> MixedGraph::label_order() const {
  std::vector<int> order(nodes_.size());
  for (int i = 0; i < size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return nodes_[a] < nodes_[b]; });
  return order;
}

std::vector<int> mask_to_vector(const Mask& m) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(m.size()); ++i)
    if (m[i]) out.push_back(i);
  return out;
}

namespace {

bool has_directed_cycle(const MixedGraph& g) {
  int n = g.size();
  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.parents(v).size());
  std::deque<int> q;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) q.push_back(v);
  int seen = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    ++seen;
    for (int c : g.children(v))
      if (--indeg[c] == 0) q.push_back(c);
  }
  return seen != n;
}

}  // namespace

ValidationReport validate(const MixedGraph& g) {
  ValidationReport r;
  for (int a = 0; a < g.size(); ++a)
    for (int b : g.neighbors(a)) {
      if (a > b) continue;
      Mark ma = g.mark_at(a, b), mb = g.mark_at(b, a);
      bool bad = false;
      switch (g.kind()) {
        case GraphKind::Dag:
          bad = !(g.is_parent(a, b) || g.is_parent(b, a));
          break;
        case GraphKind::Mag:
          bad = ma == Mark::Circle || mb == Mark::Circle || (ma == Mark::Tail && mb == Mark::Tail);
          break;
        case GraphKind::Pag:
          bad = ma == Mark::Tail && mb == Mark::Tail;
          break;
      }
      if (bad)
        r.violations.push_back({ViolationKind::BadMark, g.name(a) + " - " + g.name(b)});
    }
  if (!r.ok()) return r;
  if (has_directed_cycle(g)) {
    r.violations.push_back({ViolationKind::DirectedCycle, "directed cycle"});
    return r;
  }
  if (g.kind() != GraphKind::Mag) return r;
  for (int a = 0; a < g.size(); ++a)
    for (int b : g.neighbors(a))
      if (a < b && g.is_bidirected(a, b)) {
        int one = a;
        Mask an = ancestor_mask(g, std::span<const int>(&one, 1));
        int two = b;
        Mask bn = ancestor_mask(g, std::span<const int>(&two, 1));
        if (an[b] || bn[a])
          r.violations.push_back({ViolationKind::AlmostDirectedCycle, g.name(a) + " <-> " + g.name(b)});
      }
  if (!r.ok()) return r;
  // Ancestral graph is maximal iff every nonadjacent pair is separated by its ancestors.
  for (int a = 0; a < g.size(); ++a)
    for (int b = a + 1; b < g.size(); ++b) {
      if (g.adjacent(a, b)) continue;
      int ab[2] = {a, b};
      Mask an = ancestor_mask(g, ab);
      an[a] = an[b] = 0;
      if (!m_separated(g, a, b, mask_to_vector(an)))
        r.violations.push_back({ViolationKind::NotMaximal, g.name(a) + " , " + g.name(b)});
    }
  return r;
}

Mask ancestor_mask(const MixedGraph& g, std::span<const int> vs) {
  Mask m(g.size(), 0);
  std::vector<int> stack(vs.begin(), vs.end());
  for (int v : vs) m[v] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : g.neighbors(v))
      if (!m[u] && g.is_parent(u, v)) {
        m[u] = 1;
        stack.push_back(u);
      }
  }
  return m;
}

Mask descendant_mask(const MixedGraph& g, std::span<const int> vs) {
  Mask m(g.size(), 0);
  std::vector<int> stack(vs.begin(), vs.end());
  for (int v : vs) m[v] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : g.neighbors(v))
      if (!m[u] && g.is_parent(v, u)) {
        m[u] = 1;
        stack.push_back(u);
      }
  }
  return m;
}

NodeSet ancestors(const MixedGraph& g, std::string_view v) {
  int i = g.index(v);
  return g.names(mask_to_vector(ancestor_mask(g, std::span<const int>(&i, 1))));
}

NodeSet descendants(const MixedGraph& g, std::string_view v) {
  int i = g.index(v);
  return g.names(mask_to_vector(descendant_mask(g, std::span<const int>(&i, 1))));
}

Mask possible_descendant_mask(const MixedGraph& g, int v) {
  Mask m(g.size(), 0);
  m[v] = 1;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int b : g.neighbors(a))
      if (!m[b] && g.mark_at(a, b) != Mark::Arrow) {
        m[b] = 1;
        stack.push_back(b);
      }
  }
  return m;
}

NodeSet possible_descendants(const MixedGraph& g, std::string_view v) {
  return g.names(mask_to_vector(possible_descendant_mask(g, g.index(v))));
}

namespace {

// Walks m-connecting paths out of x given z. Stops at `stop` when it is
// reached; otherwise marks every reached node in `reached`.
bool walk_connections(const MixedGraph& g, int x, int stop, std::span<const int> z, Mask* reached) {
  Mask inz(g.size(), 0);
  for (int v : z) {
    if (v == x || v == stop) throw GraphError("conditioning set overlaps the query pair");
    inz[v] = 1;
  }
  Mask anz = ancestor_mask(g, z);
  // state = 2*node + (arrived with an arrowhead at node)
  std::vector<char> seen(2 * static_cast<std::size_t>(g.size()), 0);
  std::vector<int> stack;
  for (int w : g.neighbors(x)) {
    int s = 2 * w + (g.mark_at(w, x) == Mark::Arrow);
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    int v = s / 2;
    bool into = s % 2;
    if (v == stop) return true;
    if (reached) (*reached)[v] = 1;
    for (int u : g.neighbors(v)) {
      bool collider = into && g.mark_at(v, u) == Mark::Arrow;
      bool pass = collider ? anz[v] : !inz[v];
      if (!pass) continue;
      int t = 2 * u + (g.mark_at(u, v) == Mark::Arrow);
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  return false;
}

}  // namespace

bool m_separated(const MixedGraph& g, int x, int y, std::span<const int> z) {
  if (x == y) throw GraphError("m-separation query with x == y");
  return !walk_connections(g, x, y, z, nullptr);
}

Mask m_connected_mask(const MixedGraph& g, int x, std::span<const int> z) {
  Mask reached(g.size(), 0);
  walk_connections(g, x, -1, z, &reached);
  reached[x] = 0;
  for (int v : z) reached[v] = 0;
  return reached;
}

bool m_separated(const MixedGraph& g, std::string_view x, std::string_view y, const NodeSet& z) {
  auto zi = g.indices(z);
  return m_separated(g, g.index(x), g.index(y), zi);
}

std::vector<int> district(const MixedGraph& g, int v) {
  Mask m(g.size(), 0);
  m[v] = 1;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int b : g.neighbors(a))
      if (!m[b] && g.is_bidirected(a, b)) {
        m[b] = 1;
        stack.push_back(b);
      }
  }
  return mask_to_vector(m);
}

NodeSet district(const MixedGraph& g, std::string_view v) {
  return g.names(district(g, g.index(v)));
}

std::vector<int> markov_blanket_mag(const MixedGraph& g, int v) {
  Mask m(g.size(), 0);
  Mask through(g.size(), 0);
  std::vector<int> stack;
  for (int u : g.neighbors(v)) {
    m[u] = 1;
    if (g.mark_at(u, v) == Mark::Arrow && !through[u]) {
      through[u] = 1;
      stack.push_back(u);
    }
  }
  // continue only through colliders
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int b : g.neighbors(a)) {
      if (b == v || g.mark_at(a, b) != Mark::Arrow) continue;
      m[b] = 1;
      if (g.mark_at(b, a) == Mark::Arrow && !through[b]) {
        through[b] = 1;
        stack.push_back(b);
      }
    }
  }
  m[v] = 0;
  return mask_to_vector(m);
}

NodeSet markov_blanket_mag(const MixedGraph& g, std::string_view v) {
  return g.names(markov_blanket_mag(g, g.index(v)));
}

bool is_collider(const MixedGraph& g, int a, int b, int c) {
  return g.mark_at(b, a) == Mark::Arrow && g.mark_at(b, c) == Mark::Arrow;
}

std::set<PathKind> classify_path(const MixedGraph& g, const std::vector<std::string>& path) {
  if (path.size() < 2) throw GraphError("path needs at least two nodes");
  std::vector<int> p;
  for (const auto& s : path) p.push_back(g.index(s));
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (!g.adjacent(p[i], p[i + 1]))
      throw GraphError("not a path: " + path[i] + " and " + path[i + 1] + " are not adjacent");
  bool directed = true, possibly = true, colliders = true;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    directed = directed && g.is_parent(p[i], p[i + 1]);
    possibly = possibly && g.mark_at(p[i], p[i + 1]) != Mark::Arrow;
  }
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    colliders = colliders && is_collider(g, p[i - 1], p[i], p[i + 1]);
  std::set<PathKind> out;
  if (directed) out.insert(PathKind::Directed);
  if (possibly) out.insert(PathKind::PossiblyDirected);
  if (colliders && p.size() > 2) out.insert(PathKind::ColliderPath);
  if (colliders && g.mark_at(p[0], p[1]) == Mark::Arrow) out.insert(PathKind::ArrowColliderPath);
  return out;
}

const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Dag: return "dag";
    case GraphKind::Mag: return "mag";
    case GraphKind::Pag: return "pag";
  }
  return "?";
}

const char* to_string(Mark m) {
  switch (m) {
    case Mark::Tail: return "tail";
    case Mark::Arrow: return "arrow";
    case Mark::Circle: return "circle";
    case Mark::None: return "none";
  }
  return "?";
}

GraphKind kind_from_string(std::string_view s) {
  if (s == "dag") return GraphKind::Dag;
  if (s == "mag") return GraphKind::Mag;
  if (s == "pag") return GraphKind::Pag;
  throw GraphError("unknown graph kind: " + std::string(s));
}

Mark mark_from_string(std::string_view s) {
  if (s == "tail") return Mark::Tail;
  if (s == "arrow") return Mark::Arrow;
  if (s == "circle") return Mark::Circle;
  throw GraphError("unknown mark: " + std::string(s));
}

}  // namespace lcs
