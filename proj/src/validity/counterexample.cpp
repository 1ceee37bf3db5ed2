#include <deque>
#include <map>
#include <set>

#include "mstproj/csm.hpp"
#include "mstproj/oracle.hpp"
#include "mstproj/validity.hpp"

namespace mstproj {

namespace {

using Path = std::vector<SyncTransition>;

constexpr std::size_t kDriftDepth = 8;
constexpr std::size_t kDriftPaths = 4096;

// Breadth-first search over GAut paired with the role's subset machine.
// Returns the run prefixes reaching each product node, in discovery order.
class ProductSearch {
 public:
  ProductSearch(const SyncAutomaton& gaut, const SubsetMachine& m) {
    const Role& p = m.role();
    push({gaut.initial(), m.initial()}, npos, {});
    for (std::size_t cur = 0; cur < nodes_.size(); ++cur) {
      auto [g, s] = nodes_[cur];
      for (const auto& t : gaut.out(g)) {
        StateIndex next = s;
        if (t.label) {
          if (auto local = erase_label(*t.label, p)) {
            auto stepped = m.step(s, *local);
            if (!stepped) continue;
            next = *stepped;
          }
        }
        push({t.target, next}, cur, t);
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }
  NodeId subterm(std::size_t i) const { return nodes_[i].first; }
  StateIndex state(std::size_t i) const { return nodes_[i].second; }

  Path path_to(std::size_t i) const {
    Path out;
    while (parent_[i].first != npos) {
      out.push_back(parent_[i].second);
      i = parent_[i].first;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void push(std::pair<NodeId, StateIndex> node, std::size_t from, SyncTransition via) {
    if (!seen_.insert(node).second) return;
    nodes_.push_back(node);
    parent_.push_back({from, std::move(via)});
  }

  std::vector<std::pair<NodeId, StateIndex>> nodes_;
  std::vector<std::pair<std::size_t, SyncTransition>> parent_;
  std::set<std::pair<NodeId, StateIndex>> seen_;
};

Trace split_path(const Path& path) {
  std::vector<SyncEvent> word;
  for (const auto& t : path) {
    if (t.label) word.push_back(*t.label);
  }
  return split_word(word);
}

// Shortest GAut path from `from` to `to` using only edges silent for p.
std::optional<Path> silent_path(const SyncAutomaton& gaut, const Role& p, NodeId from, NodeId to) {
  std::map<NodeId, std::pair<NodeId, SyncTransition>> parent;
  std::deque<NodeId> work{from};
  std::set<NodeId> seen{from};
  while (!work.empty()) {
    NodeId cur = work.front();
    work.pop_front();
    if (cur == to) {
      Path out;
      while (cur != from) {
        out.push_back(parent.at(cur).second);
        cur = parent.at(cur).first;
      }
      std::reverse(out.begin(), out.end());
      return out;
    }
    for (const auto& t : gaut.out(cur)) {
      if (t.label && erase_label(*t.label, p)) continue;
      if (!seen.insert(t.target).second) continue;
      parent.emplace(t.target, std::make_pair(cur, t));
      work.push_back(t.target);
    }
  }
  return std::nullopt;
}

// Events of a path segment taken while p waits. Roles that causally depend
// on p's pending receive are blocked and contribute nothing; the others
// send, and their receivers consume immediately unless blocked.
Trace blocked_segment(const Path& segment, const Role& p) {
  std::set<Role> blocked{p};
  Trace out;
  for (const auto& t : segment) {
    if (!t.label) continue;
    const auto& e = *t.label;
    if (blocked.contains(e.sender)) {
      blocked.insert(e.receiver);
      continue;
    }
    out.push_back(AsyncEvent::send(e.sender, e.receiver, e.message));
    if (!blocked.contains(e.receiver)) out.push_back(AsyncEvent::receive(e.receiver, e.sender, e.message));
  }
  return out;
}

// Paths of at most `depth` edges leaving `from`, shortest first.
std::vector<Path> paths_from(const SyncAutomaton& gaut, NodeId from, std::size_t depth, std::size_t limit) {
  std::vector<std::pair<NodeId, Path>> layer{{from, {}}};
  std::vector<Path> out;
  for (std::size_t d = 0; d < depth && !layer.empty(); ++d) {
    std::vector<std::pair<NodeId, Path>> next;
    for (const auto& [node, path] : layer) {
      for (const auto& t : gaut.out(node)) {
        Path longer = path;
        longer.push_back(t);
        out.push_back(longer);
        if (out.size() >= limit) return out;
        next.emplace_back(t.target, std::move(longer));
      }
    }
    layer = std::move(next);
  }
  return out;
}

bool validates(const Csm& csm, const SyncAutomaton& gaut, const Trace& w) {
  try {
    replay(csm, w);
  } catch (const NotEnabled&) {
    return false;
  }
  return !intersection_witness(gaut, w);
}

}  // namespace

Trace build_counterexample(const GlobalType& g, const ValidityViolation& v) {
  SyncAutomaton gaut = build_gaut(g);
  Csm csm = Csm::of_subset_constructions(g);
  auto idx = csm.role_index(v.role);
  if (!idx) throw InternalError("violation names a role outside the protocol: " + v.role.value);
  const SubsetMachine& m = csm.machine(*idx);
  ProductSearch product(gaut, m);

  if (v.kind == ViolationKind::SendValidity) {
    for (std::size_t i = 0; i < product.size(); ++i) {
      if (product.state(i) != v.state) continue;
      if (std::find(v.missing.begin(), v.missing.end(), product.subterm(i)) == v.missing.end()) continue;
      Trace prefix = split_path(product.path_to(i));
      Trace w = prefix;
      w.push_back(v.label);
      if (validates(csm, gaut, w)) return w;
      // The member may still let the run drift, silently for p, into one that
      // sends. Let the other roles commit first while p stays put.
      for (const Path& drift : paths_from(gaut, product.subterm(i), kDriftDepth, kDriftPaths)) {
        w = prefix;
        Trace tail = blocked_segment(drift, v.role);
        w.insert(w.end(), tail.begin(), tail.end());
        w.push_back(v.label);
        if (validates(csm, gaut, w)) return w;
      }
    }
    throw InternalError("no validated counterexample for " + describe(v, g));
  }

  const Role& p = v.role;
  SyncEvent competing{v.second.peer, p, v.second.message};
  AvailableMessages available(g);
  const auto& reach = available.query({v.witness, {p}, {}});
  auto beyond = reach.events.find(v.offending);
  if (beyond == reach.events.end()) throw InternalError("witness does not offer " + to_string(v.offending));

  for (std::size_t i = 0; i < product.size(); ++i) {
    if (product.state(i) != v.state) continue;
    for (const auto& e : gaut.out(product.subterm(i))) {
      if (!e.label || *e.label != competing) continue;
      auto silent = silent_path(gaut, p, e.target, v.witness);
      if (!silent) continue;
      Path segment{e};
      segment.insert(segment.end(), silent->begin(), silent->end());
      segment.insert(segment.end(), beyond->second.begin(), beyond->second.end());
      Trace w = split_path(product.path_to(i));
      Trace tail = blocked_segment(segment, p);
      w.insert(w.end(), tail.begin(), tail.end());
      w.push_back(v.first);
      if (validates(csm, gaut, w)) return w;
    }
  }
  throw InternalError("no validated counterexample for " + describe(v, g));
}

}  // namespace mstproj
