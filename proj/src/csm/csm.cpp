#include "mstproj/csm.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace mstproj {

std::string_view to_string(NotEnabledReason reason) {
  switch (reason) {
    case NotEnabledReason::NoLocalTransition:
      return "NoLocalTransition";
    case NotEnabledReason::EmptyChannel:
      return "EmptyChannel";
    case NotEnabledReason::WrongHead:
      return "WrongHead";
  }
  return "?";
}

NotEnabled::NotEnabled(NotEnabledReason reason, const AsyncEvent& event)
    : std::runtime_error(std::string(to_string(reason)) + " for " + to_string(event)), reason_(reason) {}

Csm::Csm(std::vector<SubsetMachine> machines) : machines_(std::move(machines)) {
  std::vector<Message> msgs;
  for (const auto& m : machines_) {
    for (const auto& t : m.transitions()) msgs.push_back(t.label.message);
  }
  std::sort(msgs.begin(), msgs.end());
  msgs.erase(std::unique(msgs.begin(), msgs.end()), msgs.end());
  messages_ = std::move(msgs);
}

Csm Csm::of_subset_constructions(const GlobalType& g) {
  SyncAutomaton gaut = build_gaut(g);
  std::vector<SubsetMachine> machines;
  for (const Role& r : g.roles()) machines.push_back(subset_construction(erase(gaut, r)));
  return Csm(std::move(machines));
}

std::optional<std::size_t> Csm::role_index(const Role& r) const {
  for (std::size_t i = 0; i < machines_.size(); ++i) {
    if (machines_[i].role() == r) return i;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> Csm::message_id(const Message& m) const {
  auto it = std::lower_bound(messages_.begin(), messages_.end(), m);
  if (it == messages_.end() || *it != m) return std::nullopt;
  return static_cast<std::uint32_t>(it - messages_.begin());
}

std::size_t CsmConfigurationHash::operator()(const CsmConfiguration& c) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::size_t v) { h = (h ^ v) * 0x100000001b3ULL; };
  for (auto s : c.states) mix(s);
  for (const auto& ch : c.channels) {
    mix(ch.size() + 0x9e37);
    for (auto m : ch) mix(m);
  }
  return h;
}

CsmConfiguration initial_configuration(const Csm& c) {
  CsmConfiguration cfg;
  cfg.states.reserve(c.role_count());
  for (std::size_t i = 0; i < c.role_count(); ++i) cfg.states.push_back(c.machine(i).initial());
  cfg.channels.assign(c.role_count() * c.role_count(), {});
  return cfg;
}

bool is_final(const Csm& c, const CsmConfiguration& cfg) {
  for (std::size_t i = 0; i < c.role_count(); ++i) {
    if (!c.machine(i).is_final(cfg.states[i])) return false;
  }
  return std::all_of(cfg.channels.begin(), cfg.channels.end(), [](const auto& ch) { return ch.empty(); });
}

std::vector<AsyncEvent> enabled_events(const Csm& c, const CsmConfiguration& cfg) {
  std::vector<AsyncEvent> out;
  for (std::size_t i = 0; i < c.role_count(); ++i) {
    for (const auto& t : c.machine(i).out(cfg.states[i])) {
      if (t.label.is_send()) {
        out.push_back(t.label);
        continue;
      }
      auto peer = c.role_index(t.label.peer);
      if (!peer) continue;
      const auto& ch = cfg.channels[c.channel(*peer, i)];
      if (!ch.empty() && c.message(ch.front()) == t.label.message) out.push_back(t.label);
    }
  }
  return out;
}

CsmConfiguration csm_step(const Csm& c, const CsmConfiguration& cfg, const AsyncEvent& e) {
  auto self = c.role_index(e.active);
  auto peer = c.role_index(e.peer);
  if (!self || !peer || *self == *peer) throw NotEnabled(NotEnabledReason::NoLocalTransition, e);
  auto next_state = c.machine(*self).step(cfg.states[*self], e);
  if (!next_state) throw NotEnabled(NotEnabledReason::NoLocalTransition, e);
  CsmConfiguration next = cfg;
  next.states[*self] = *next_state;
  auto msg = c.message_id(e.message);
  if (e.is_send()) {
    next.channels[c.channel(*self, *peer)].push_back(*msg);
  } else {
    auto& ch = next.channels[c.channel(*peer, *self)];
    if (ch.empty()) throw NotEnabled(NotEnabledReason::EmptyChannel, e);
    if (ch.front() != *msg) throw NotEnabled(NotEnabledReason::WrongHead, e);
    ch.erase(ch.begin());
  }
  return next;
}

CsmConfiguration replay(const Csm& c, std::span<const AsyncEvent> w) {
  CsmConfiguration cfg = initial_configuration(c);
  for (const auto& e : w) cfg = csm_step(c, cfg, e);
  return cfg;
}

namespace {

Trace trace_to(const std::vector<std::pair<std::size_t, AsyncEvent>>& parent, std::size_t node) {
  Trace out;
  while (node != 0) {
    out.push_back(parent[node].second);
    node = parent[node].first;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

ExplorationReport explore(const Csm& c, std::size_t channel_bound, std::size_t depth, bool keep_traces) {
  ExplorationReport report;
  std::vector<CsmConfiguration> nodes;
  std::vector<std::pair<std::size_t, AsyncEvent>> parent;
  std::vector<std::size_t> level;
  std::unordered_map<CsmConfiguration, std::size_t, CsmConfigurationHash> index;

  nodes.push_back(initial_configuration(c));
  parent.push_back({0, AsyncEvent{}});
  level.push_back(0);
  index.emplace(nodes.front(), 0);

  for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
    auto events = enabled_events(c, nodes[cur]);
    if (events.empty()) {
      if (!is_final(c, nodes[cur])) report.deadlocks.push_back({nodes[cur], trace_to(parent, cur)});
      continue;
    }
    if (level[cur] >= depth) {
      report.frontier_cut = true;
      continue;
    }
    for (const auto& e : events) {
      CsmConfiguration next = csm_step(c, nodes[cur], e);
      if (e.is_send()) {
        auto ch = c.channel(*c.role_index(e.active), *c.role_index(e.peer));
        if (next.channels[ch].size() > channel_bound) {
          report.frontier_cut = true;
          continue;
        }
      }
      if (index.contains(next)) continue;
      index.emplace(next, nodes.size());
      nodes.push_back(std::move(next));
      parent.push_back({cur, e});
      level.push_back(level[cur] + 1);
    }
  }

  report.visited = nodes.size();
  if (keep_traces) {
    report.traces.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) report.traces.push_back(trace_to(parent, i));
  }
  return report;
}

bool check_channel_compliance(std::span<const AsyncEvent> w) {
  // Per channel: messages sent so far, and how many have been received.
  std::map<std::pair<Role, Role>, std::pair<std::vector<Message>, std::size_t>> channels;
  for (const auto& e : w) {
    if (e.is_send()) {
      channels[{e.active, e.peer}].first.push_back(e.message);
      continue;
    }
    auto& [sent, received] = channels[{e.peer, e.active}];
    if (received >= sent.size() || sent[received] != e.message) return false;
    ++received;
  }
  return true;
}

}  // namespace mstproj
