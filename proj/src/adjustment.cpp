#include "lcs/adjustment.hpp"

#include <algorithm>

#include "lcs/projection.hpp"
#include "lcs/subsets.hpp"

namespace lcs {

const char* to_string(EffectCase c) {
  switch (c) {
    case EffectCase::Identifiable: return "identifiable";
    case EffectCase::Zero: return "zero";
    case EffectCase::NonIdentifiable: return "non_identifiable";
  }
  return "?";
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3a: return "R3a";
    case Rule::R3b: return "R3b";
    case Rule::None: return "none";
  }
  return "?";
}

namespace {

// Nodes that can reach `to` along possibly directed paths avoiding `skip`.
Mask possible_ancestor_mask(const MixedGraph& g, int to, int skip) {
  Mask m(g.size(), 0);
  m[to] = 1;
  std::vector<int> stack{to};
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    for (int a : g.neighbors(b))
      if (!m[a] && a != skip && g.mark_at(a, b) != Mark::Arrow) {
        m[a] = 1;
        stack.push_back(a);
      }
  }
  return m;
}

// Marks every node lying on some simple possibly directed path cur ~> to.
bool mark_pd_paths(const MixedGraph& g, int cur, int to, const Mask& allowed, Mask& on, Mask& hit,
                   long& budget) {
  if (cur == to) return true;
  if (--budget < 0) return false;
  bool any = false;
  for (int n : g.neighbors(cur)) {
    if (on[n] || !allowed[n] || g.mark_at(cur, n) == Mark::Arrow) continue;
    on[n] = 1;
    if (mark_pd_paths(g, n, to, allowed, on, hit, budget)) {
      hit[n] = 1;
      any = true;
    }
    on[n] = 0;
  }
  return any;
}

}  // namespace

GacChecker::GacChecker(const MixedGraph& g, std::string_view x, std::string_view y)
    : g_(g), x_(g.index(x)), y_(g.index(y)) {
  if (x_ == y_) throw GraphError("treatment and outcome coincide");
  Mask pd = possible_descendant_mask(g, x_);
  Mask pa = possible_ancestor_mask(g, y_, x_);
  Mask allowed(g.size(), 0);
  for (int v = 0; v < g.size(); ++v) allowed[v] = v != x_ && pd[v] && pa[v];
  Mask cn = allowed;
  if (g.has_circles() && allowed[y_]) {
    Mask on(g.size(), 0), hit(g.size(), 0);
    on[x_] = 1;
    long budget = 2'000'000;
    mark_pd_paths(g, x_, y_, allowed, on, hit, budget);
    if (budget >= 0) cn = hit;
  }
  if (!allowed[y_]) std::fill(cn.begin(), cn.end(), 0);

  std::vector<int> first;
  for (int c : g.neighbors(x_))
    if (g.mark_at(x_, c) != Mark::Arrow && cn[c]) first.push_back(c);
  amenable_ = true;
  for (int c : first)
    if (!g.is_parent(x_, c) || !is_visible(g, x_, c)) amenable_ = false;

  forb_mask_.assign(g.size(), 0);
  for (int w = 0; w < g.size(); ++w)
    if (cn[w]) {
      Mask d = possible_descendant_mask(g, w);
      for (int v = 0; v < g.size(); ++v)
        if (d[v]) forb_mask_[v] = 1;
    }
  forb_mask_[x_] = 0;
  forb_ = g.names(mask_to_vector(forb_mask_));

  pbd_ = g;
  for (int c : first) pbd_.remove_edge(x_, c);
}

bool GacChecker::satisfied(const NodeSet& z) const {
  auto zi = g_.indices(z);
  return satisfied(zi);
}

bool GacChecker::satisfied(std::span<const int> z) const {
  for (int v : z)
    if (v == x_ || v == y_) throw GraphError("adjustment set contains treatment or outcome");
  if (!amenable_) return false;
  for (int v : z)
    if (forb_mask_[v]) return false;
  return blocks(z);
}

bool GacChecker::blocks(std::span<const int> z) const {
  if (!g_.has_circles()) return m_separated(pbd_, x_, y_, z);
  Mask inz(g_.size(), 0);
  for (int v : z) inz[v] = 1;
  Mask anz = ancestor_mask(pbd_, z);
  Mask on(g_.size(), 0);
  on[x_] = 1;
  for (int n : pbd_.neighbors(x_)) {
    on[n] = 1;
    if (connected_definite(n, x_, inz, anz, on)) return false;
    on[n] = 0;
  }
  return true;
}

bool GacChecker::connected_definite(int cur, int prev, const Mask& inz, const Mask& anz, Mask& on) const {
  if (cur == y_) return true;
  for (int next : pbd_.neighbors(cur)) {
    if (on[next]) continue;
    Mark mp = pbd_.mark_at(cur, prev), mn = pbd_.mark_at(cur, next);
    bool open;
    if (mp == Mark::Arrow && mn == Mark::Arrow)
      open = anz[cur];
    else if (mp == Mark::Tail || mn == Mark::Tail || !g_.adjacent(prev, next))
      open = !inz[cur];
    else
      continue;  // not of definite status
    if (!open) continue;
    on[next] = 1;
    bool found = connected_definite(next, cur, inz, anz, on);
    on[next] = 0;
    if (found) return true;
  }
  return false;
}

NodeSet forb_set(const MixedGraph& g, std::string_view x, std::string_view y) {
  return GacChecker(g, x, y).forb();
}

bool amenable(const MixedGraph& g, std::string_view x, std::string_view y) {
  return GacChecker(g, x, y).amenable();
}

bool gac_satisfied(const MixedGraph& g, std::string_view x, std::string_view y, const NodeSet& z) {
  return GacChecker(g, x, y).satisfied(z);
}

std::vector<NodeSet> brute_force_adjustment_search(const MixedGraph& g, std::string_view x,
                                                   std::string_view y) {
  GacChecker gac(g, x, y);
  std::vector<NodeSet> out;
  if (!gac.amenable()) return out;
  int xi = g.index(x), yi = g.index(y);
  std::vector<int> cands;
  for (int v : g.label_order())
    if (v != xi && v != yi && !gac.forb().count(g.name(v))) cands.push_back(v);
  if (cands.size() > 22) throw GraphError("too many candidates for brute-force adjustment search");
  for_each_subset(cands, cands.size(), [&](const std::vector<int>& z) {
    if (gac.blocks(z)) out.push_back(g.names(z));
    return false;
  });
  return out;
}

namespace {

struct Ctx {
  CiEngine& ci;
  const LocalStructure& ls;
  int x;
  int y;
  std::string yname;

  std::vector<int> ids(const NodeSet& s) const {
    std::vector<int> out;
    for (const auto& n : s) out.push_back(ci.index(n));
    return out;  // label order
  }
};

NodeSet without(NodeSet s, std::initializer_list<std::string_view> drop) {
  for (auto d : drop) s.erase(std::string(d));
  return s;
}

NodeSet minus(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  for (const auto& v : a)
    if (!b.count(v)) out.insert(v);
  return out;
}

NodeSet names_of(const CiEngine& ci, const std::vector<int>& v) {
  NodeSet out;
  for (int i : v) out.insert(ci.variables()[i]);
  return out;
}

void log_rule(CiEngine& ci, const RuleHit& h) {
  if (!ci.log()) return;
  nlohmann::json e{{"event", "rule"}, {"rule", to_string(h.rule)}, {"z", h.z}};
  if (h.s) e["s"] = *h.s;
  ci.log()->add(std::move(e));
}

std::vector<int> with(std::vector<int> z, int v) {
  z.insert(std::upper_bound(z.begin(), z.end(), v), v);
  return z;
}

// S dep Y | Z and S indep Y | Z + X
bool r1_holds(CiEngine& ci, int s, int x, int y, const std::vector<int>& z) {
  if (ci.independent(s, y, z)) return false;
  return ci.independent(s, y, with(z, x));
}

// S dep X | Z and S indep Y | Z
bool r3b_holds(CiEngine& ci, int s, int x, int y, const std::vector<int>& z) {
  if (ci.independent(s, x, z)) return false;
  return ci.independent(s, y, z);
}

NodeSet witness_pool(const LocalStructure& ls, std::string_view y) {
  return without(minus(ls.mb, ls.poss_de), {y});
}

}  // namespace

std::optional<RuleHit> rule_r1(CiEngine& ci, const LocalStructure& ls, std::string_view x, std::string_view y,
                               WitnessScope scope) {
  PhaseScope ph(ci, "r1");
  Ctx c{ci, ls, ci.index(x), ci.index(y), std::string(y)};
  NodeSet pool = witness_pool(ls, y);
  NodeSet first_pass;
  for (const auto& v : ls.pa_star)
    if (pool.count(v)) first_pass.insert(v);

  std::vector<std::string> witnesses;
  for (const auto& s : pool) {
    bool parent = ls.pa.count(s) > 0;
    if (scope == WitnessScope::NonParents && parent) continue;
    if (scope == WitnessScope::Parents && !parent) continue;
    witnesses.push_back(s);
  }
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& s : witnesses) {
      int si = ci.index(s);
      NodeSet zpool = without(pass == 0 ? first_pass : pool, {s});
      auto cands = c.ids(zpool);
      std::vector<int> found;
      bool ok = for_each_subset(cands, cands.size(), [&](const std::vector<int>& z) {
        if (pass == 1) {
          bool outside = false;
          for (int v : z) outside = outside || !first_pass.count(ci.variables()[v]);
          if (!outside) return false;
        }
        if (!r1_holds(ci, si, c.x, c.y, z)) return false;
        found = z;
        return true;
      });
      if (ok) {
        RuleHit h{Rule::R1, names_of(ci, found), s};
        log_rule(ci, h);
        return h;
      }
    }
  return std::nullopt;
}

std::optional<RuleHit> rule_r2(CiEngine& ci, const LocalStructure& ls, std::string_view x, std::string_view y) {
  PhaseScope ph(ci, "r2");
  const auto& g = ls.pag_fragment;
  int xf = g.index(x);
  for (int v : g.neighbors(xf)) {
    if (g.mark_at(xf, v) == Mark::Circle) return std::nullopt;
    const auto& n = g.name(v);
    if (!ls.pa.count(n) && !ls.ncpa.count(n) && !ls.ch.count(n)) return std::nullopt;
  }
  auto nonadj = ls.nonadjacent_fn();
  if (auto yf = g.find(y)) {
    if (!ls.poss_de.count(std::string(y))) return std::nullopt;
    // every possibly directed first edge towards y must be visible
    for (int c : g.neighbors(xf)) {
      if (!g.is_parent(xf, c)) continue;
      Mask pd = possible_descendant_mask(g, c);
      if (pd[*yf] && !is_visible(g, xf, c, nonadj)) return std::nullopt;
    }
  } else {
    for (int c : g.neighbors(xf))
      if (g.is_parent(xf, c) && !is_visible(g, xf, c, nonadj)) return std::nullopt;
  }
  NodeSet z = ls.pa;
  z.insert(ls.ncpa.begin(), ls.ncpa.end());
  z.erase(std::string(y));
  std::vector<int> zi;
  for (const auto& v : z) zi.push_back(ci.index(v));
  std::sort(zi.begin(), zi.end());
  if (ci.independent(ci.index(x), ci.index(y), zi)) return std::nullopt;
  RuleHit h{Rule::R2, z, std::nullopt};
  log_rule(ci, h);
  return h;
}

std::optional<RuleHit> rule_r3(CiEngine& ci, const LocalStructure& ls, std::string_view x, std::string_view y) {
  PhaseScope ph(ci, "r3");
  int xi = ci.index(x), yi = ci.index(y);
  Ctx c{ci, ls, xi, yi, std::string(y)};
  NodeSet pool = witness_pool(ls, y);
  auto cands = c.ids(pool);
  std::vector<int> found;
  if (for_each_subset(cands, cands.size(), [&](const std::vector<int>& z) {
        if (!ci.independent(xi, yi, z)) return false;
        found = z;
        return true;
      })) {
    RuleHit h{Rule::R3a, names_of(ci, found), std::nullopt};
    log_rule(ci, h);
    return h;
  }
  for (const auto& s : pool) {
    int si = ci.index(s);
    auto zc = c.ids(without(pool, {s}));
    if (for_each_subset(zc, zc.size(), [&](const std::vector<int>& z) {
          if (!r3b_holds(ci, si, xi, yi, z)) return false;
          found = z;
          return true;
        })) {
      RuleHit h{Rule::R3b, names_of(ci, found), s};
      log_rule(ci, h);
      return h;
    }
  }
  return std::nullopt;
}

LcsResult lcs(CiEngine& ci, std::string_view x, std::string_view y, const LearnerConfig& cfg) {
  if (x == y) throw CiError("treatment and outcome coincide");
  ci.index(y);
  LcsResult r;
  std::uint64_t start = ci.test_count();
  {
    PhaseScope ph(ci, "structure");
    r.local = learn_local_pag(ci, x, cfg);
  }
  r.structure_tests = ci.test_count() - start;
  auto done = [&](EffectCase c, const RuleHit& h) {
    r.effect_case = c;
    r.rule = h.rule;
    r.adjustment_set = h.z;
    r.witness = h.s;
  };
  if (auto h = rule_r1(ci, r.local, x, y, WitnessScope::NonParents))
    done(EffectCase::Identifiable, *h);
  else if (auto h2 = rule_r2(ci, r.local, x, y))
    done(EffectCase::Identifiable, *h2);
  else if (auto h1 = rule_r1(ci, r.local, x, y, WitnessScope::Parents))
    done(EffectCase::Identifiable, *h1);
  else if (auto h3 = rule_r3(ci, r.local, x, y))
    done(EffectCase::Zero, *h3);
  r.n_tests = ci.test_count() - start;
  r.rule_tests = r.n_tests - r.structure_tests;
  if (ci.log())
    ci.log()->add({{"event", "verdict"},
                   {"case", to_string(r.effect_case)},
                   {"rule", to_string(r.rule)},
                   {"z", r.adjustment_set},
                   {"n_tests", r.n_tests},
                   {"structure_tests", r.structure_tests},
                   {"rule_tests", r.rule_tests}});
  return r;
}

std::vector<RuleHit> audit_rules(CiEngine& ci, const LocalStructure& ls, std::string_view x,
                                 std::string_view y) {
  PhaseScope ph(ci, "audit");
  std::vector<RuleHit> hits;
  int xi = ci.index(x), yi = ci.index(y);
  NodeSet pool = witness_pool(ls, y);
  std::vector<std::string> ps(pool.begin(), pool.end());
  std::uint32_t full = 1u << ps.size();
  auto ids_of = [&](std::uint32_t bits, int skip) {
    std::vector<int> z;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if ((bits >> i & 1u) && static_cast<int>(i) != skip) z.push_back(ci.index(ps[i]));
    std::sort(z.begin(), z.end());
    return z;
  };
  bool r1 = false, r3a = false, r3b = false;
  for (std::uint32_t bits = 0; bits < full; ++bits) {
    auto z = ids_of(bits, -1);
    if (!r3a && ci.independent(xi, yi, z)) {
      r3a = true;
      hits.push_back({Rule::R3a, names_of(ci, z), std::nullopt});
    }
    for (std::size_t s = 0; s < ps.size(); ++s) {
      if (bits >> s & 1u) continue;
      int si = ci.index(ps[s]);
      if (!r1 && !ci.independent(si, yi, z) && ci.independent(si, yi, with(z, xi))) {
        r1 = true;
        hits.push_back({Rule::R1, names_of(ci, z), ps[s]});
      }
      if (!r3b && !ci.independent(si, xi, z) && ci.independent(si, yi, z)) {
        r3b = true;
        hits.push_back({Rule::R3b, names_of(ci, z), ps[s]});
      }
    }
  }
  if (auto h = rule_r2(ci, ls, x, y)) hits.push_back(*h);
  return hits;
}

EhsResult ehs(CiEngine& ci, std::string_view x, std::string_view y, const EhsConfig& cfg) {
  PhaseScope ph(ci, "ehs");
  int xi = ci.index(x), yi = ci.index(y);
  if (xi == yi) throw CiError("treatment and outcome coincide");
  int p = static_cast<int>(ci.variables().size());
  std::vector<int> others;
  for (int v = 0; v < p; ++v)
    if (v != xi && v != yi) others.push_back(v);
  std::sort(others.begin(), others.end(),
            [&](int a, int b) { return ci.variables()[a] < ci.variables()[b]; });
  EhsResult r;
  std::uint64_t start = ci.test_count();
  auto budget_left = [&](std::size_t n) {
    if (ci.test_count() - start + n <= cfg.max_tests) return true;
    r.capped = true;
    return false;
  };
  std::size_t max_k = others.size();
  if (cfg.max_set_size >= 0) max_k = std::min<std::size_t>(max_k, static_cast<std::size_t>(cfg.max_set_size));

  // For each Z by increasing size, every witness W outside Z is tested:
  // W dep Y | Z, then W indep Y | Z + X for the dependent ones. The first
  // hit is reported; the search runs to the end unless told to stop.
  std::vector<int> ws, dep, zx;
  for_each_subset(others, max_k, [&](const std::vector<int>& z) {
    Mask inz(p, 0);
    for (int v : z) inz[v] = 1;
    ws.clear();
    for (int w : others)
      if (!inz[w]) ws.push_back(w);
    if (ws.empty()) return false;
    if (!budget_left(ws.size())) return true;
    std::vector<int> zs = z;
    std::sort(zs.begin(), zs.end());
    auto first = ci.independent_each(ws, yi, zs);
    dep.clear();
    for (std::size_t i = 0; i < ws.size(); ++i)
      if (!first[i]) dep.push_back(ws[i]);
    if (dep.empty()) return false;
    if (!budget_left(dep.size())) return true;
    zx = with(zs, xi);
    auto second = ci.independent_each(dep, yi, zx);
    for (std::size_t i = 0; i < dep.size() && r.effect_case != EffectCase::Identifiable; ++i)
      if (second[i]) {
        r.effect_case = EffectCase::Identifiable;
        r.adjustment_set = names_of(ci, zs);
        r.witness = ci.variables()[dep[i]];
      }
    return cfg.stop_at_first && r.effect_case == EffectCase::Identifiable;
  });
  r.n_tests = ci.test_count() - start;
  return r;
}

}  // namespace lcs
