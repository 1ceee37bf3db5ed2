#include "mstproj/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace mstproj {

namespace {

bool swappable(const AsyncEvent& x, const AsyncEvent& y, std::span<const AsyncEvent> prefix) {
  if (x.is_send() && y.is_send()) return x.active != y.active;
  if (x.is_receive() && y.is_receive()) return x.active != y.active;
  if (x.is_send() && y.is_receive()) {
    // x = p>q!m, y = s<r?m'
    const Role& p = x.active;
    const Role& q = x.peer;
    const Role& s = y.active;
    const Role& r = y.peer;
    if (p != s && (p != r || q != s)) return true;
    if (s == q && r == p) {
      std::size_t sent = 0;
      std::size_t received = 0;
      for (const auto& e : prefix) {
        if (e.is_send() && e.active == p && e.peer == q) ++sent;
        if (e.is_receive() && e.active == q && e.peer == p) ++received;
      }
      return sent > received;
    }
  }
  return false;
}

}  // namespace

bool indistinguishable_finite(std::span<const AsyncEvent> u, std::span<const AsyncEvent> v, std::size_t budget) {
  Trace from(u.begin(), u.end());
  Trace goal(v.begin(), v.end());
  if (from == goal) return true;
  Trace a = from;
  Trace b = goal;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return false;

  std::set<Trace> seen{from};
  std::deque<Trace> work{from};
  std::size_t expanded = 0;
  while (!work.empty()) {
    if (expanded++ >= budget) throw BudgetExhausted("indistinguishability search exceeded its budget");
    Trace w = std::move(work.front());
    work.pop_front();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      std::span<const AsyncEvent> prefix(w.data(), i);
      if (!swappable(w[i], w[i + 1], prefix) && !swappable(w[i + 1], w[i], prefix)) continue;
      Trace next = w;
      std::swap(next[i], next[i + 1]);
      if (next == goal) return true;
      if (seen.insert(next).second) work.push_back(std::move(next));
    }
  }
  return false;
}

std::optional<std::vector<SyncTransition>> intersection_witness(const SyncAutomaton& gaut,
                                                                std::span<const AsyncEvent> w) {
  std::map<Role, std::size_t> role_index;
  std::vector<Trace> views;
  for (const auto& e : w) {
    auto [it, fresh] = role_index.emplace(e.active, views.size());
    if (fresh) views.emplace_back();
    views[it->second].push_back(e);
  }

  using Counts = std::vector<std::uint32_t>;
  struct Entry {
    NodeId node;
    Counts counts;
    std::size_t parent;
    SyncTransition via;
  };
  auto complete = [&](const Counts& c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] < views[i].size()) return false;
    }
    return true;
  };
  // A role's next expected event must match; once its view is consumed the
  // run may continue freely for it.
  auto advance = [&](Counts& c, const AsyncEvent& e) {
    auto it = role_index.find(e.active);
    if (it == role_index.end()) return true;
    auto& k = c[it->second];
    const auto& view = views[it->second];
    if (k == view.size()) return true;
    if (view[k] != e) return false;
    ++k;
    return true;
  };

  std::vector<Entry> entries{{gaut.initial(), Counts(views.size(), 0), 0, {}}};
  std::set<std::pair<NodeId, Counts>> seen{{gaut.initial(), entries.front().counts}};
  for (std::size_t cur = 0; cur < entries.size(); ++cur) {
    if (complete(entries[cur].counts)) {
      std::vector<SyncTransition> run;
      for (std::size_t i = cur; i != 0; i = entries[i].parent) run.push_back(entries[i].via);
      std::reverse(run.begin(), run.end());
      return run;
    }
    for (const auto& t : gaut.out(entries[cur].node)) {
      Counts next = entries[cur].counts;
      if (t.label) {
        auto [send, receive] = split(*t.label);
        if (!advance(next, send) || !advance(next, receive)) continue;
      }
      if (!seen.insert({t.target, next}).second) continue;
      entries.push_back({t.target, std::move(next), cur, t});
    }
  }
  return std::nullopt;
}

std::optional<std::vector<SyncTransition>> intersection_witness(const GlobalType& g, std::span<const AsyncEvent> w) {
  return intersection_witness(build_gaut(g), w);
}

namespace {

struct GautCsmKey {
  NodeId node;
  CsmConfiguration cfg;
  friend bool operator==(const GautCsmKey&, const GautCsmKey&) = default;
};

struct GautCsmHash {
  std::size_t operator()(const GautCsmKey& k) const noexcept {
    return CsmConfigurationHash{}(k.cfg) * 31 + k.node.value;
  }
};

template <class Entry>
Trace unwind(const std::vector<Entry>& entries, std::size_t i) {
  Trace out;
  for (; i != 0; i = entries[i].parent) {
    for (auto it = entries[i].events.rbegin(); it != entries[i].events.rend(); ++it) out.push_back(*it);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Obligation 1: every split GAut run prefix replays in the CSM.
bool replay_gaut_prefixes(const SyncAutomaton& gaut, const Csm& c, std::size_t depth, FidelityReport& report) {
  struct Entry {
    GautCsmKey key;
    std::size_t length;
    std::size_t parent;
    Trace events;
  };
  std::vector<Entry> entries{{{gaut.initial(), initial_configuration(c)}, 0, 0, {}}};
  std::unordered_map<GautCsmKey, std::size_t, GautCsmHash> seen{{entries.front().key, 0}};
  for (std::size_t cur = 0; cur < entries.size(); ++cur) {
    for (const auto& t : gaut.out(entries[cur].key.node)) {
      std::size_t length = entries[cur].length;
      CsmConfiguration cfg = entries[cur].key.cfg;
      Trace events;
      if (t.label) {
        if (length + 2 > depth) continue;
        auto [send, receive] = split(*t.label);
        events = {send, receive};
        for (const auto& e : events) {
          try {
            cfg = csm_step(c, cfg, e);
          } catch (const NotEnabled& err) {
            Trace w = unwind(entries, cur);
            w.push_back(send);
            if (&e != &events.front()) w.push_back(receive);
            report.witness = std::move(w);
            report.detail = err.what();
            return false;
          }
        }
        length += 2;
      }
      GautCsmKey key{t.target, std::move(cfg)};
      if (seen.contains(key)) continue;
      seen.emplace(key, entries.size());
      entries.push_back({std::move(key), length, cur, std::move(events)});
    }
  }
  report.gaut_prefixes = entries.size();
  return true;
}

// Obligation 2: every CSM trace has a run consistent with all local views.
// Traces with equal per-role views share their intersection set, and
// intersection sets only shrink along extensions, so it suffices to check
// the view vectors that have no extension within the bounds.
bool check_csm_views(const SyncAutomaton& gaut, const Csm& c, std::size_t depth, std::size_t channel_bound,
                     FidelityReport& report) {
  using Views = std::vector<std::vector<AsyncEvent>>;
  struct Entry {
    CsmConfiguration cfg;
    Views views;
    std::size_t length;
    std::size_t parent;
    Trace events;
  };
  std::vector<Entry> entries{{initial_configuration(c), Views(c.role_count()), 0, 0, {}}};
  std::set<Views> seen{entries.front().views};
  std::vector<std::size_t> leaves;
  for (std::size_t cur = 0; cur < entries.size(); ++cur) {
    bool extended = false;
    if (entries[cur].length < depth) {
      for (const auto& e : enabled_events(c, entries[cur].cfg)) {
        CsmConfiguration next = csm_step(c, entries[cur].cfg, e);
        std::size_t self = *c.role_index(e.active);
        if (e.is_send() && next.channels[c.channel(self, *c.role_index(e.peer))].size() > channel_bound) {
          report.frontier_cut = true;
          continue;
        }
        extended = true;
        Views views = entries[cur].views;
        views[self].push_back(e);
        if (!seen.insert(views).second) continue;
        entries.push_back({std::move(next), std::move(views), entries[cur].length + 1, cur, {e}});
      }
    }
    if (!extended) leaves.push_back(cur);
  }
  report.csm_views = entries.size();

  for (std::size_t leaf : leaves) {
    Trace w = unwind(entries, leaf);
    if (intersection_witness(gaut, w)) continue;
    std::size_t n = w.size();
    while (n > 0 && !intersection_witness(gaut, std::span<const AsyncEvent>(w.data(), n - 1))) --n;
    w.resize(n);
    report.witness = std::move(w);
    report.detail = "no run of the global type is consistent with every role's view";
    return false;
  }
  return true;
}

}  // namespace

FidelityReport bounded_fidelity_check(const GlobalType& g, const Csm& c, std::size_t depth, std::size_t channel_bound) {
  FidelityReport report;
  SyncAutomaton gaut = build_gaut(g);
  auto fail = [&](int obligation) {
    report.passed = false;
    report.failed_obligation = obligation;
    return report;
  };
  if (!replay_gaut_prefixes(gaut, c, depth, report)) return fail(1);
  if (!check_csm_views(gaut, c, depth, channel_bound, report)) return fail(2);
  auto explored = explore(c, channel_bound, depth);
  report.frontier_cut = report.frontier_cut || explored.frontier_cut;
  if (!explored.deadlocks.empty()) {
    report.witness = explored.deadlocks.front().witness;
    report.detail = "deadlock";
    return fail(3);
  }
  return report;
}

GlobalType generate_gk(unsigned k) {
  if (k < 1) throw std::invalid_argument("generate_gk requires k >= 1");
  GlobalTypeBuilder builder;
  NodeArena& a = builder.arena();
  Role p("p"), q("q"), r("r");
  Message ma("a"), mb("b"), md("d"), ms("s"), ml("l");

  auto tail = [&](const Message& x) {
    NodeId base = a.prefix(p, q, md, a.prefix(q, p, x, a.end()));
    for (unsigned i = 1; i < k; ++i) base = a.choice(p, {{q, ma, base}, {q, mb, base}});
    return base;
  };
  NodeId ga = tail(ma);
  NodeId gb = tail(mb);
  NodeId t = a.var(RecVar("t"));
  NodeId loop = a.choice(p, {{q, ma, t}, {q, mb, t}});
  NodeId leave = a.choice(p, {{q, ma, ga}, {q, mb, gb}});
  NodeId body = a.choice(p, {{r, ms, loop}, {r, ml, leave}});
  return builder.build(a.rec(RecVar("t"), body));
}

}  // namespace mstproj
