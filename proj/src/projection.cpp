#include "lcs/projection.hpp"

#include <deque>

namespace lcs {

namespace {

bool separable_exhaustive(const MixedGraph& dag, int a, int b, const std::vector<int>& observed) {
  std::vector<int> rest;
  for (int v : observed)
    if (v != a && v != b) rest.push_back(v);
  if (rest.size() > 24) throw GraphError("too many observed nodes for exhaustive projection");
  std::vector<int> z;
  for (std::uint32_t bits = 0; bits < (1u << rest.size()); ++bits) {
    z.clear();
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (bits >> i & 1u) z.push_back(rest[i]);
    if (m_separated(dag, a, b, z)) return true;
  }
  return false;
}

// Inducing path relative to the latent set: observed interior nodes are
// colliders, and every collider is an ancestor of a or b.
bool has_inducing_path(const MixedGraph& dag, int a, int b, const Mask& latent) {
  int ab[2] = {a, b};
  Mask an = ancestor_mask(dag, ab);
  std::vector<char> seen(2 * static_cast<std::size_t>(dag.size()), 0);
  std::vector<int> stack;
  for (int w : dag.neighbors(a)) {
    int s = 2 * w + (dag.mark_at(w, a) == Mark::Arrow);
    seen[s] = 1;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    int v = s / 2;
    bool into = s % 2;
    if (v == b) return true;
    if (v == a) continue;
    for (int u : dag.neighbors(v)) {
      bool collider = into && dag.mark_at(v, u) == Mark::Arrow;
      bool pass = collider ? static_cast<bool>(an[v]) : static_cast<bool>(latent[v]);
      if (!pass) continue;
      int t = 2 * u + (dag.mark_at(u, v) == Mark::Arrow);
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  return false;
}

}  // namespace

MixedGraph latent_project(const MixedGraph& dag, const NodeSet& latents, ProjectionMethod method) {
  if (dag.kind() != GraphKind::Dag) throw GraphError("latent projection needs a DAG");
  auto rep = validate(dag);
  if (!rep.ok()) throw GraphError("invalid DAG: " + rep.violations.front().detail);
  Mask latent(dag.size(), 0);
  for (const auto& l : latents) latent[dag.index(l)] = 1;
  std::vector<int> observed;
  std::vector<std::string> names;
  for (int v = 0; v < dag.size(); ++v)
    if (!latent[v]) {
      observed.push_back(v);
      names.push_back(dag.name(v));
    }
  if (method == ProjectionMethod::Auto)
    method = observed.size() <= 12 ? ProjectionMethod::Exhaustive : ProjectionMethod::InducingPath;

  MixedGraph mag(GraphKind::Mag, names);
  for (std::size_t i = 0; i < observed.size(); ++i) {
    int a = observed[i];
    int one = a;
    Mask an_a = ancestor_mask(dag, std::span<const int>(&one, 1));
    for (std::size_t j = i + 1; j < observed.size(); ++j) {
      int b = observed[j];
      bool adjacent = method == ProjectionMethod::Exhaustive
                          ? !separable_exhaustive(dag, a, b, observed)
                          : has_inducing_path(dag, a, b, latent);
      if (!adjacent) continue;
      int two = b;
      Mask an_b = ancestor_mask(dag, std::span<const int>(&two, 1));
      int ia = static_cast<int>(i), ib = static_cast<int>(j);
      if (an_b[a])
        mag.add_edge(ia, ib, Mark::Tail, Mark::Arrow);
      else if (an_a[b])
        mag.add_edge(ia, ib, Mark::Arrow, Mark::Tail);
      else
        mag.add_edge(ia, ib, Mark::Arrow, Mark::Arrow);
    }
  }
  return mag;
}

MixedGraph mag_to_pag(const MixedGraph& mag, OrientationTrace* trace) {
  if (mag.kind() != GraphKind::Mag) throw GraphError("mag_to_pag needs a MAG");
  auto rep = validate(mag);
  if (!rep.ok()) throw GraphError("invalid MAG: " + rep.violations.front().detail);
  MixedGraph pag(GraphKind::Pag, mag.nodes());
  SepsetStore sepsets;
  for (int a = 0; a < mag.size(); ++a)
    for (int b = a + 1; b < mag.size(); ++b) {
      if (mag.adjacent(a, b)) {
        pag.add_edge(a, b, Mark::Circle, Mark::Circle);
        continue;
      }
      int ab[2] = {a, b};
      Mask an = ancestor_mask(mag, ab);
      an[a] = an[b] = 0;
      sepsets.set(a, b, mask_to_vector(an));
    }
  orient_pag(pag, sepsets, trace);
  return pag;
}

bool is_visible(const MixedGraph& g, int from, int to, const NonadjacentFn& nonadjacent) {
  if (!g.is_parent(from, to)) return false;
  if (g.kind() == GraphKind::Dag) return true;
  std::vector<char> seen(g.size(), 0);
  seen[from] = seen[to] = 1;
  std::deque<int> q;
  auto consider = [&](int v, int w) {
    // w *-> v, with v either `from` or a collider already on the path
    if (seen[w] || g.mark_at(v, w) != Mark::Arrow) return false;
    if (nonadjacent(w, to)) return true;
    if (g.is_parent(w, to) && g.mark_at(w, v) == Mark::Arrow) {
      seen[w] = 1;
      q.push_back(w);
    }
    return false;
  };
  for (int w : g.neighbors(from))
    if (consider(from, w)) return true;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : g.neighbors(v))
      if (consider(v, w)) return true;
  }
  return false;
}

bool is_visible(const MixedGraph& g, int from, int to) {
  return is_visible(g, from, to, [&](int a, int b) { return a != b && !g.adjacent(a, b); });
}

std::vector<VisibleEdge> visible_edges(const MixedGraph& g) {
  std::vector<VisibleEdge> out;
  for (int a = 0; a < g.size(); ++a)
    for (int b : g.neighbors(a))
      if (g.is_parent(a, b)) out.push_back({g.name(a), g.name(b), is_visible(g, a, b)});
  return out;
}

}  // namespace lcs
