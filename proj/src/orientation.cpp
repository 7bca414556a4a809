#include "lcs/orientation.hpp"

#include <algorithm>
#include <deque>

namespace lcs {

void SepsetStore::set(int a, int b, std::vector<int> s) {
  if (a > b) std::swap(a, b);
  std::sort(s.begin(), s.end());
  sets_[{a, b}] = std::move(s);
}

const std::vector<int>* SepsetStore::find(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = sets_.find({a, b});
  return it == sets_.end() ? nullptr : &it->second;
}

bool SepsetStore::separates_with(int a, int b, int v) const {
  const auto* s = find(a, b);
  return s && std::binary_search(s->begin(), s->end(), v);
}

namespace {

class Orienter {
 public:
  Orienter(MixedGraph& g, const SepsetStore& s, OrientationTrace* t) : g_(g), s_(s), trace_(t) {}

  void run() {
    rule0();
    bool any = true;
    while (any) {
      changed_ = false;
      rule1();
      rule2();
      rule3();
      rule4();
      if (!changed_) {
        rule8();
        rule9();
        rule10();
      }
      any = changed_;
    }
  }

 private:
  bool nonadj(int a, int b) const { return a != b && !g_.adjacent(a, b) && s_.contains(a, b); }

  void put(int v, int u, Mark m, const char* rule) {
    Mark cur = g_.mark_at(v, u);
    if (cur == m) return;
    if (cur != Mark::Circle) {
      if (trace_) trace_->push_back({rule, v, u, m, true});
      return;
    }
    g_.set_mark(v, u, m);
    changed_ = true;
    if (trace_) trace_->push_back({rule, v, u, m, false});
  }

  void rule0() {
    for (int b = 0; b < g_.size(); ++b) {
      const auto& nb = g_.neighbors(b);
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          int a = nb[i], c = nb[j];
          if (!nonadj(a, c) || s_.separates_with(a, c, b)) continue;
          put(b, a, Mark::Arrow, "R0");
          put(b, c, Mark::Arrow, "R0");
        }
    }
  }

  void rule1() {
    for (int b = 0; b < g_.size(); ++b)
      for (int a : g_.neighbors(b)) {
        if (g_.mark_at(b, a) != Mark::Arrow) continue;
        for (int c : g_.neighbors(b)) {
          if (c == a || g_.mark_at(b, c) != Mark::Circle || !nonadj(a, c)) continue;
          put(b, c, Mark::Tail, "R1");
          put(c, b, Mark::Arrow, "R1");
        }
      }
  }

  void rule2() {
    for (int a = 0; a < g_.size(); ++a)
      for (int c : g_.neighbors(a)) {
        if (g_.mark_at(c, a) != Mark::Circle) continue;
        for (int b : g_.neighbors(a)) {
          if (b == c || !g_.adjacent(b, c)) continue;
          bool first = g_.is_parent(a, b) && g_.mark_at(c, b) == Mark::Arrow;
          bool second = g_.mark_at(b, a) == Mark::Arrow && g_.is_parent(b, c);
          if (first || second) {
            put(c, a, Mark::Arrow, "R2");
            break;
          }
        }
      }
  }

  void rule3() {
    for (int b = 0; b < g_.size(); ++b) {
      const auto& nb = g_.neighbors(b);
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          int a = nb[i], c = nb[j];
          if (g_.mark_at(b, a) != Mark::Arrow || g_.mark_at(b, c) != Mark::Arrow || !nonadj(a, c))
            continue;
          for (int t : nb) {
            if (t == a || t == c || g_.mark_at(b, t) != Mark::Circle) continue;
            if (!g_.adjacent(t, a) || !g_.adjacent(t, c)) continue;
            if (g_.mark_at(t, a) == Mark::Circle && g_.mark_at(t, c) == Mark::Circle)
              put(b, t, Mark::Arrow, "R3");
          }
        }
    }
  }

  // Discriminating path <theta, ..., a, b, c> for b, with b o-* c.
  void rule4() {
    int n = g_.size();
    for (int b = 0; b < n; ++b)
      for (int c : g_.neighbors(b)) {
        if (g_.mark_at(b, c) != Mark::Circle) continue;
        for (int a : g_.neighbors(b)) {
          if (a == c || g_.mark_at(a, b) != Mark::Arrow || !g_.is_parent(a, c)) continue;
          int theta = find_discriminator(a, b, c);
          if (theta < 0) continue;
          if (s_.separates_with(theta, c, b)) {
            put(b, c, Mark::Tail, "R4");
            put(c, b, Mark::Arrow, "R4");
          } else {
            put(b, c, Mark::Arrow, "R4");
            put(c, b, Mark::Arrow, "R4");
            put(b, a, Mark::Arrow, "R4");
            put(a, b, Mark::Arrow, "R4");
          }
          if (g_.mark_at(b, c) != Mark::Circle) break;
        }
      }
  }

  int find_discriminator(int a, int b, int c) const {
    std::vector<char> seen(g_.size(), 0);
    seen[a] = seen[b] = seen[c] = 1;
    std::deque<int> q{a};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w : g_.neighbors(v)) {
        if (seen[w] || g_.mark_at(v, w) != Mark::Arrow) continue;
        if (nonadj(w, c)) return w;
        if (g_.is_parent(w, c) && g_.mark_at(w, v) == Mark::Arrow) {
          seen[w] = 1;
          q.push_back(w);
        }
      }
    }
    return -1;
  }

  void rule8() {
    for (int a = 0; a < g_.size(); ++a)
      for (int c : g_.neighbors(a)) {
        if (g_.mark_at(a, c) != Mark::Circle || g_.mark_at(c, a) != Mark::Arrow) continue;
        for (int b : g_.neighbors(a)) {
          if (b == c || !g_.is_parent(b, c)) continue;
          bool tail_a = g_.mark_at(a, b) == Mark::Tail;
          bool ok = tail_a && (g_.mark_at(b, a) == Mark::Arrow || g_.mark_at(b, a) == Mark::Circle);
          if (ok) {
            put(a, c, Mark::Tail, "R8");
            break;
          }
        }
      }
  }

  // First nodes after `from` of uncovered possibly directed paths from `from`
  // to `to` that avoid `avoid`.
  std::vector<int> uncovered_pd_starts(int from, int to, int avoid, bool need_gap) const {
    std::vector<int> starts;
    std::vector<int> path{from};
    std::vector<char> on(g_.size(), 0);
    on[from] = 1;
    if (avoid >= 0) on[avoid] = 1;
    for (int m : g_.neighbors(from)) {
      if (on[m] || g_.mark_at(from, m) == Mark::Arrow || g_.mark_at(m, from) == Mark::Tail) continue;
      if (m == to) {
        if (!need_gap) starts.push_back(m);
        continue;
      }
      if (need_gap && !nonadj(m, to)) continue;
      path.push_back(m);
      on[m] = 1;
      if (extend(path, on, to)) starts.push_back(m);
      on[m] = 0;
      path.pop_back();
    }
    return starts;
  }

  bool extend(std::vector<int>& path, std::vector<char>& on, int to) const {
    int cur = path.back(), prev = path[path.size() - 2];
    for (int nx : g_.neighbors(cur)) {
      if (g_.mark_at(cur, nx) == Mark::Arrow || g_.mark_at(nx, cur) == Mark::Tail) continue;
      if (nx == to) {
        if (nonadj(prev, nx)) return true;
        continue;
      }
      if (on[nx] || !nonadj(prev, nx)) continue;
      path.push_back(nx);
      on[nx] = 1;
      bool ok = extend(path, on, to);
      on[nx] = 0;
      path.pop_back();
      if (ok) return true;
    }
    return false;
  }

  void rule9() {
    for (int a = 0; a < g_.size(); ++a)
      for (int c : g_.neighbors(a)) {
        if (g_.mark_at(a, c) != Mark::Circle || g_.mark_at(c, a) != Mark::Arrow) continue;
        if (!uncovered_pd_starts(a, c, -1, true).empty()) put(a, c, Mark::Tail, "R9");
      }
  }

  void rule10() {
    for (int a = 0; a < g_.size(); ++a)
      for (int c : g_.neighbors(a)) {
        if (g_.mark_at(a, c) != Mark::Circle || g_.mark_at(c, a) != Mark::Arrow) continue;
        auto pa = g_.parents(c);
        bool done = false;
        for (std::size_t i = 0; i < pa.size() && !done; ++i)
          for (std::size_t j = i + 1; j < pa.size() && !done; ++j) {
            if (pa[i] == a || pa[j] == a) continue;
            auto m1 = uncovered_pd_starts(a, pa[i], c, false);
            if (m1.empty()) continue;
            auto m2 = uncovered_pd_starts(a, pa[j], c, false);
            for (int mu : m1)
              for (int om : m2)
                if (!done && mu != om && nonadj(mu, om)) done = true;
          }
        if (done) put(a, c, Mark::Tail, "R10");
      }
  }

  MixedGraph& g_;
  const SepsetStore& s_;
  OrientationTrace* trace_;
  bool changed_ = false;
};

}  // namespace

void orient_pag(MixedGraph& g, const SepsetStore& sepsets, OrientationTrace* trace) {
  g.set_kind(GraphKind::Pag);
  Orienter(g, sepsets, trace).run();
}

}  // namespace lcs
