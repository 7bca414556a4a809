#include "lcs/discovery.hpp"

#include <algorithm>
#include <deque>

#include "lcs/orientation.hpp"
#include "lcs/subsets.hpp"

namespace lcs {

bool LocalStructure::known_nonadjacent(const std::string& a, const std::string& b) const {
  return sepsets.count(std::minmax(a, b)) > 0;
}

NonadjacentFn LocalStructure::nonadjacent_fn() const {
  return [this](int a, int b) {
    return known_nonadjacent(pag_fragment.name(a), pag_fragment.name(b));
  };
}

namespace {

std::vector<int> tc_blanket(CiEngine& ci, int x) {
  int p = static_cast<int>(ci.variables().size());
  std::vector<int> mb, z;
  for (int v = 0; v < p; ++v) {
    if (v == x) continue;
    z.clear();
    for (int u = 0; u < p; ++u)
      if (u != x && u != v) z.push_back(u);
    if (!ci.independent(x, v, z)) mb.push_back(v);
  }
  return mb;
}

enum class Adj : char { Unknown, Yes, No };

class Learner {
 public:
  Learner(CiEngine& ci, int x, const LearnerConfig& cfg)
      : ci_(ci), x_(x), cfg_(cfg), p_(static_cast<int>(ci.variables().size())),
        adj_(static_cast<std::size_t>(p_) * p_, Adj::Unknown), processed_(p_, 0), queued_(p_, 0),
        mb_(p_), in_mbx_(p_, 0), label_rank_(p_) {
    std::vector<int> order(p_);
    for (int i = 0; i < p_; ++i) order[i] = i;
    const auto& names = ci_.variables();
    std::sort(order.begin(), order.end(), [&](int a, int b) { return names[a] < names[b]; });
    for (int i = 0; i < p_; ++i) label_rank_[order[i]] = i;
  }

  LocalStructure run() {
    wait_.push_back(x_);
    queued_[x_] = 1;
    std::string stop;
    for (;;) {
      int next = pick();
      if (next < 0) {
        stop = wait_.empty() ? "S-b" : "S-c";
        break;
      }
      process(next);
      rebuild();
      if (cfg_.max_processed >= 0 && static_cast<int>(order_.size()) >= cfg_.max_processed &&
          all_blanket_processed()) {
        stop = "cap";
        break;
      }
      if (all_blanket_processed()) {
        if (!circle_inside_blanket()) {
          stop = "S-a";
          break;
        }
        if (wait_.empty()) {
          stop = "S-b";
          break;
        }
      }
    }
    log({{"event", "stop"}, {"rule", stop}, {"processed", static_cast<int>(order_.size())}});
    return finish(stop);
  }

 private:
  Adj& adj(int a, int b) { return adj_[static_cast<std::size_t>(a) * p_ + b]; }
  Adj adj(int a, int b) const { return adj_[static_cast<std::size_t>(a) * p_ + b]; }

  void decide(int a, int b, Adj v, std::vector<int> sep = {}) {
    if (adj(a, b) != Adj::Unknown) return;
    adj(a, b) = adj(b, a) = v;
    if (v == Adj::No) sepsets_.set(a, b, std::move(sep));
  }

  void log(nlohmann::json e) {
    if (ci_.log()) ci_.log()->add(std::move(e));
  }

  void sort_labels(std::vector<int>& v) const {
    std::sort(v.begin(), v.end(), [&](int a, int b) { return label_rank_[a] < label_rank_[b]; });
  }

  bool all_blanket_processed() const {
    if (!processed_[x_]) return false;
    for (int v : mb_[x_])
      if (!processed_[v]) return false;
    return true;
  }

  bool circle_inside_blanket() const {
    for (int a = 0; a < p_; ++a) {
      if (!in_mbx_[a]) continue;
      for (int b : frag_.neighbors(a))
        if (in_mbx_[b] && frag_.mark_at(a, b) == Mark::Circle) return true;
    }
    return false;
  }

  // Nodes reachable from circle marks inside MB+(x) along o-o edges. An edge
  // with an arrowhead ends the path.
  Mask circle_component() const {
    Mask c(p_, 0);
    std::vector<int> stack;
    for (int a = 0; a < p_; ++a) {
      if (!in_mbx_[a]) continue;
      for (int b : frag_.neighbors(a))
        if (in_mbx_[b] && frag_.mark_at(a, b) == Mark::Circle) {
          for (int v : {a, b})
            if (!c[v]) {
              c[v] = 1;
              stack.push_back(v);
            }
        }
    }
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b : frag_.neighbors(a))
        if (!c[b] && frag_.mark_at(a, b) == Mark::Circle && frag_.mark_at(b, a) == Mark::Circle) {
          c[b] = 1;
          stack.push_back(b);
        }
    }
    return c;
  }

  int pick() {
    Mask rel;
    if (processed_[x_]) rel = circle_component();
    for (auto it = wait_.begin(); it != wait_.end(); ++it) {
      int v = *it;
      if (v == x_ || in_mbx_[v] || (!rel.empty() && rel[v])) {
        wait_.erase(it);
        return v;
      }
    }
    return -1;
  }

  std::size_t cap(std::size_t n) const {
    return cfg_.max_sepset_size < 0 ? n : std::min<std::size_t>(n, static_cast<std::size_t>(cfg_.max_sepset_size));
  }

  bool depth_allowed(std::size_t d) const {
    return cfg_.max_sepset_size < 0 || d <= static_cast<std::size_t>(cfg_.max_sepset_size);
  }

  void exhaustive_search(int v, const std::vector<int>& mb) {
    for (int w : mb) {
      if (adj(v, w) != Adj::Unknown) continue;
      std::vector<int> cands;
      for (int u : mb)
        if (u != w) cands.push_back(u);
      std::vector<int> found;
      bool sep = for_each_subset(cands, cap(cands.size()), [&](const std::vector<int>& s) {
        if (!ci_.independent(v, w, s)) return false;
        found = s;
        return true;
      });
      decide(v, w, sep ? Adj::No : Adj::Yes, found);
    }

    std::vector<int> nb;
    for (int w : mb)
      if (adj(v, w) == Adj::Yes) nb.push_back(w);
    // Pairs of neighbours that nothing else will resolve: look for a
    // separator inside MB+(v).
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        int a = nb[i], b = nb[j];
        if (adj(a, b) != Adj::Unknown) continue;
        if (processed_[a] || processed_[b] || in_mbx_[a] || in_mbx_[b]) continue;
        std::vector<int> cands;
        for (int u : mb)
          if (u != a && u != b) cands.push_back(u);
        cands.push_back(v);
        sort_labels(cands);
        std::vector<int> found;
        bool sep = for_each_subset(cands, cap(cands.size()), [&](const std::vector<int>& s) {
          if (!ci_.independent(a, b, s)) return false;
          found = s;
          return true;
        });
        if (sep) decide(a, b, Adj::No, found);
      }
  }

  // Skeleton search over the region MB+(v). Every open pair in the region is
  // tested against subsets of the current adjacencies of either endpoint, by
  // increasing size. Pairs at v that survive are then tested against subsets
  // of the Possible-D-Sep sets of the region graph with its colliders
  // oriented. Removals are global decisions; surviving pairs at v are edges.
  void adjacency_search(int v, const std::vector<int>& mb) {
    std::vector<int> region = mb;
    region.push_back(v);
    sort_labels(region);
    const std::size_t r = region.size();
    std::size_t iv = 0;
    while (region[iv] != v) ++iv;

    std::vector<char> on(r * r, 0);
    auto linked = [&](std::size_t i, std::size_t j) -> char& { return on[i * r + j]; };
    std::vector<std::pair<std::size_t, std::size_t>> open;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j) {
        Adj a = adj(region[i], region[j]);
        if (a == Adj::No) continue;
        linked(i, j) = linked(j, i) = 1;
        if (a == Adj::Unknown) open.emplace_back(i, j);
      }
    auto neighbours = [&](std::size_t i) {
      std::vector<std::size_t> out;
      for (std::size_t k = 0; k < r; ++k)
        if (linked(i, k)) out.push_back(k);
      return out;
    };
    std::vector<int> found;
    auto separated = [&](std::size_t i, std::size_t j, const std::vector<std::size_t>& s) {
      std::vector<int> z;
      for (std::size_t k : s) z.push_back(region[k]);
      if (!ci_.independent(region[i], region[j], z)) return false;
      found = std::move(z);
      return true;
    };
    auto remove = [&](std::size_t i, std::size_t j) {
      linked(i, j) = linked(j, i) = 0;
      decide(region[i], region[j], Adj::No, found);
    };

    for (std::size_t d = 0; depth_allowed(d); ++d) {
      std::vector<std::vector<std::size_t>> nb(r);
      for (std::size_t i = 0; i < r; ++i) nb[i] = neighbours(i);
      bool deeper = false;
      for (auto [i, j] : open) {
        if (!linked(i, j)) continue;
        std::vector<std::size_t> ci, cj;
        for (std::size_t k : nb[i])
          if (k != j) ci.push_back(k);
        Mask in_ci(r, 0);
        for (std::size_t k : ci) in_ci[k] = 1;
        for (std::size_t k : nb[j])
          if (k != i) cj.push_back(k);
        deeper = deeper || ci.size() > d || cj.size() > d;
        if (for_each_subset_of_size(ci, d, [&](const auto& s) { return separated(i, j, s); })) {
          remove(i, j);
          continue;
        }
        bool tried_i = ci.size() >= d;
        if (for_each_subset_of_size(cj, d, [&](const auto& s) {
              if (tried_i && std::all_of(s.begin(), s.end(), [&](std::size_t k) { return in_ci[k]; }))
                return false;
              return separated(i, j, s);
            }))
          remove(i, j);
      }
      if (!deeper) break;
    }

    bool done = true;
    for (int w : mb) done = done && adj(v, w) != Adj::Unknown;
    if (!done) {
      // Arrowheads from unshielded colliders of the region graph.
      std::vector<char> head(r * r, 0);
      for (std::size_t c = 0; c < r; ++c) {
        auto nb = neighbours(c);
        for (std::size_t x = 0; x < nb.size(); ++x)
          for (std::size_t y = x + 1; y < nb.size(); ++y) {
            std::size_t a = nb[x], b = nb[y];
            if (linked(a, b)) continue;
            const auto* s = sepsets_.find(region[a], region[b]);
            if (!s || std::find(s->begin(), s->end(), region[c]) != s->end()) continue;
            head[a * r + c] = head[b * r + c] = 1;
          }
      }
      auto pds = [&](std::size_t src) {
        Mask reached(r, 0), seen(r * r, 0);
        std::vector<std::pair<std::size_t, std::size_t>> stack;
        for (std::size_t k : neighbours(src)) {
          reached[k] = 1;
          seen[src * r + k] = 1;
          stack.emplace_back(src, k);
        }
        while (!stack.empty()) {
          auto [p, c] = stack.back();
          stack.pop_back();
          for (std::size_t q : neighbours(c)) {
            if (q == p || q == src || seen[c * r + q]) continue;
            bool collider = head[p * r + c] && head[q * r + c];
            if (!collider && !linked(p, q)) continue;
            seen[c * r + q] = 1;
            reached[q] = 1;
            stack.emplace_back(c, q);
          }
        }
        return reached;
      };
      PhaseScope ph(ci_, "pds");
      Mask pds_v = pds(iv);
      for (std::size_t iw = 0; iw < r; ++iw) {
        if (iw == iv || !linked(iv, iw) || adj(v, region[iw]) != Adj::Unknown) continue;
        // Subsets of either endpoint's adjacencies were covered above, and
        // the second side skips subsets the first side already tried.
        auto within = [&](const std::vector<std::size_t>& s, auto&& member) {
          return std::all_of(s.begin(), s.end(), member);
        };
        auto adjacent_to = [&](std::size_t end, std::size_t skip) {
          return [&, end, skip](std::size_t k) { return k != skip && linked(end, k); };
        };
        auto in_pds_v = [&](std::size_t k) { return k != iw && pds_v[k]; };
        bool sep = false;
        for (std::size_t side : {iv, iw}) {
          std::size_t other = side == iv ? iw : iv;
          Mask reach = side == iv ? pds_v : pds(side);
          std::vector<std::size_t> cands;
          for (std::size_t k = 0; k < r; ++k)
            if (reach[k] && k != other && k != side) cands.push_back(k);
          sep = for_each_subset(cands, cap(cands.size()), [&](const std::vector<std::size_t>& s) {
            if (within(s, adjacent_to(iv, iw)) || within(s, adjacent_to(iw, iv))) return false;
            if (side == iw && within(s, in_pds_v)) return false;
            return separated(iv, iw, s);
          });
          if (sep) break;
        }
        if (sep) remove(iv, iw);
      }
    }
    for (int w : mb)
      if (adj(v, w) == Adj::Unknown) decide(v, w, Adj::Yes);
  }

  void process(int v) {
    processed_[v] = 1;
    order_.push_back(v);
    std::vector<int> mb;
    {
      PhaseScope ph(ci_, "mb");
      mb = tc_blanket(ci_, v);
    }
    sort_labels(mb);
    mb_[v] = mb;
    Mask in_mb(p_, 0);
    for (int w : mb) in_mb[w] = 1;
    for (int w = 0; w < p_; ++w) {
      if (w == v || in_mb[w]) continue;
      std::vector<int> rest;
      for (int u = 0; u < p_; ++u)
        if (u != v && u != w) rest.push_back(u);
      decide(v, w, Adj::No, rest);
    }
    if (v == x_) {
      for (int w : mb) in_mbx_[w] = 1;
      in_mbx_[x_] = 1;
    }
    log({{"event", "process"}, {"node", ci_.variables()[v]}, {"mb_size", static_cast<int>(mb.size())}});

    {
      PhaseScope ph(ci_, "skeleton");
      if (cfg_.search == SkeletonSearch::Exhaustive)
        exhaustive_search(v, mb);
      else
        adjacency_search(v, mb);
    }

    for (int w : mb)
      if (!processed_[w] && !queued_[w]) {
        queued_[w] = 1;
        wait_.push_back(w);
      }
  }

  void rebuild() {
    frag_ = MixedGraph(GraphKind::Pag, ci_.variables());
    for (int a = 0; a < p_; ++a)
      for (int b = a + 1; b < p_; ++b)
        if (adj(a, b) == Adj::Yes) frag_.add_edge(a, b, Mark::Circle, Mark::Circle);
    OrientationTrace trace;
    orient_pag(frag_, sepsets_, &trace);
    if (ci_.log()) {
      nlohmann::json rules = nlohmann::json::object();
      int conflicts = 0;
      for (const auto& e : trace) {
        rules[e.rule] = rules.value(e.rule, 0) + 1;
        conflicts += e.conflict;
      }
      log({{"event", "orient"}, {"rules", rules}, {"conflicts", conflicts}});
    }
  }

  LocalStructure finish(const std::string& stop) {
    const auto& names = ci_.variables();
    Mask keep(p_, 0);
    for (int v : order_) {
      keep[v] = 1;
      for (int w : frag_.neighbors(v)) keep[w] = 1;
    }
    keep[x_] = 1;
    for (int v : mb_[x_]) keep[v] = 1;
    std::vector<int> nodes = mask_to_vector(keep);
    sort_labels(nodes);

    LocalStructure ls;
    ls.center = names[x_];
    ls.pag_fragment = frag_.induced(nodes);
    for (int v : mb_[x_]) ls.mb.insert(names[v]);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (const auto* s = sepsets_.find(nodes[i], nodes[j])) {
          NodeSet sep;
          for (int u : *s) sep.insert(names[u]);
          ls.sepsets[std::minmax(names[nodes[i]], names[nodes[j]])] = std::move(sep);
        }
    for (int v : order_) ls.processed.push_back(names[v]);
    ls.stop_rule = stop;
    auto d = derive_sets(ls.pag_fragment, ls.center, ls.mb);
    ls.pa = std::move(d.pa);
    ls.ncpa = std::move(d.ncpa);
    ls.ch = std::move(d.ch);
    ls.pa_star = std::move(d.pa_star);
    ls.poss_de = std::move(d.poss_de);
    return ls;
  }

  CiEngine& ci_;
  int x_;
  LearnerConfig cfg_;
  int p_;
  std::vector<Adj> adj_;
  SepsetStore sepsets_;
  Mask processed_;
  Mask queued_;
  std::vector<std::vector<int>> mb_;
  Mask in_mbx_;
  std::vector<int> label_rank_;
  std::deque<int> wait_;
  std::vector<int> order_;
  MixedGraph frag_;
};

}  // namespace

NodeSet total_conditioning_mb(CiEngine& ci, std::string_view x) {
  PhaseScope ph(ci, "mb");
  auto mb = tc_blanket(ci, ci.index(x));
  NodeSet out;
  for (int v : mb) out.insert(ci.variables()[v]);
  return out;
}

DerivedSets derive_sets(const MixedGraph& g, std::string_view xid, const NodeSet& mb) {
  int x = g.index(xid);
  DerivedSets d;
  Mask pd = possible_descendant_mask(g, x);
  pd[x] = 0;
  d.poss_de = g.names(mask_to_vector(pd));

  Mask local(g.size(), 0);
  local[x] = 1;
  for (const auto& m : mb)
    if (auto i = g.find(m)) local[*i] = 1;

  for (int v : g.neighbors(x)) {
    if (g.is_parent(v, x)) d.pa.insert(g.name(v));
    if (g.is_parent(x, v)) d.ch.insert(g.name(v));
    if (g.mark_at(v, x) == Mark::Circle && g.mark_at(x, v) == Mark::Arrow) {
      bool arrow_at_v = false;
      for (int w : g.neighbors(v))
        if (local[w] && g.mark_at(v, w) == Mark::Arrow) arrow_at_v = true;
      if (!arrow_at_v) d.ncpa.insert(g.name(v));
    }
  }

  // Arrow-collider paths out of x that stay outside PossDe(x).
  Mask seen(g.size(), 0);
  std::vector<int> stack;
  for (int v : g.neighbors(x)) {
    if (g.mark_at(x, v) != Mark::Arrow || pd[v]) continue;
    d.pa_star.insert(g.name(v));
    if (g.mark_at(v, x) == Mark::Arrow && !seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v)) {
      if (w == x || pd[w] || g.mark_at(v, w) != Mark::Arrow) continue;
      d.pa_star.insert(g.name(w));
      if (g.mark_at(w, v) == Mark::Arrow && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return d;
}

LocalStructure learn_local_pag(CiEngine& ci, std::string_view x, const LearnerConfig& cfg) {
  return Learner(ci, ci.index(x), cfg).run();
}

}  // namespace lcs
