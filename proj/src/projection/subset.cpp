#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "mstproj/projection.hpp"

namespace mstproj {

bool SubsetState::contains(NodeId id) const { return std::binary_search(members.begin(), members.end(), id); }

SubsetMachine::SubsetMachine(Role role, std::vector<SubsetState> states, std::vector<SubsetTransition> transitions,
                             std::vector<bool> finals)
    : role_(std::move(role)), states_(std::move(states)), transitions_(std::move(transitions)), finals_(std::move(finals)) {
  std::stable_sort(transitions_.begin(), transitions_.end(), [](const auto& a, const auto& b) {
    if (a.source != b.source) return a.source < b.source;
    return a.label < b.label;
  });
  offsets_.assign(states_.size() + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.source + 1];
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

std::span<const SubsetTransition> SubsetMachine::out(StateIndex i) const {
  return std::span<const SubsetTransition>(transitions_.data() + offsets_.at(i), offsets_.at(i + 1) - offsets_.at(i));
}

std::optional<StateIndex> SubsetMachine::step(StateIndex i, const AsyncEvent& label) const {
  auto edges = out(i);
  auto it = std::lower_bound(edges.begin(), edges.end(), label,
                             [](const SubsetTransition& t, const AsyncEvent& l) { return t.label < l; });
  if (it == edges.end() || it->label != label) return std::nullopt;
  return it->target;
}

SubsetState epsilon_closure(const LocalNfa& nfa, std::span<const NodeId> seed) {
  std::vector<bool> seen(nfa.id_bound(), false);
  std::vector<NodeId> stack(seed.begin(), seed.end());
  SubsetState out;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen.at(id.value)) continue;
    seen[id.value] = true;
    out.members.push_back(id);
    for (const auto& t : nfa.out(id)) {
      if (!t.label) stack.push_back(t.target);
    }
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

SubsetMachine subset_construction(const LocalNfa& nfa) {
  std::vector<SubsetState> states;
  std::map<SubsetState, StateIndex> index;
  std::vector<SubsetTransition> transitions;
  std::deque<StateIndex> work;

  auto intern = [&](SubsetState s) -> StateIndex {
    auto [it, fresh] = index.emplace(s, static_cast<StateIndex>(states.size()));
    if (fresh) {
      states.push_back(std::move(s));
      work.push_back(it->second);
    }
    return it->second;
  };

  NodeId init = nfa.initial();
  intern(epsilon_closure(nfa, std::span<const NodeId>(&init, 1)));
  while (!work.empty()) {
    StateIndex cur = work.front();
    work.pop_front();
    std::map<AsyncEvent, std::vector<NodeId>> targets;
    for (NodeId member : states[cur].members) {
      for (const auto& t : nfa.out(member)) {
        if (t.label) targets[*t.label].push_back(t.target);
      }
    }
    for (auto& [label, seed] : targets) {
      StateIndex next = intern(epsilon_closure(nfa, seed));
      transitions.push_back({cur, label, next});
    }
  }

  std::vector<bool> finals;
  finals.reserve(states.size());
  for (const auto& s : states) {
    finals.push_back(std::any_of(s.members.begin(), s.members.end(), [&](NodeId id) { return nfa.is_final(id); }));
  }
  return SubsetMachine(nfa.role(), std::move(states), std::move(transitions), std::move(finals));
}

SubsetMachine subset_construction(const GlobalType& g, const Role& p) {
  return subset_construction(erase(build_gaut(g), p));
}

bool bounded_local_language_check(const GlobalType& g, const Role& p, std::size_t depth) {
  LocalNfa nfa = erase(build_gaut(g), p);

  // Words of the erased NFA, explored over (state, word) pairs.
  std::set<Trace> nfa_words;
  std::set<std::pair<NodeId, Trace>> seen;
  std::deque<std::pair<NodeId, Trace>> work{{nfa.initial(), {}}};
  while (!work.empty()) {
    auto [id, word] = work.front();
    work.pop_front();
    if (!seen.insert({id, word}).second) continue;
    nfa_words.insert(word);
    for (const auto& t : nfa.out(id)) {
      if (!t.label) {
        work.push_back({t.target, word});
      } else if (word.size() < depth) {
        Trace next = word;
        next.push_back(*t.label);
        work.push_back({t.target, std::move(next)});
      }
    }
  }

  SubsetMachine m = subset_construction(nfa);
  std::set<Trace> dfa_words;
  std::deque<std::pair<StateIndex, Trace>> dwork{{m.initial(), {}}};
  while (!dwork.empty()) {
    auto [s, word] = dwork.front();
    dwork.pop_front();
    dfa_words.insert(word);
    if (word.size() == depth) continue;
    for (const auto& t : m.out(s)) {
      Trace next = word;
      next.push_back(t.label);
      dwork.push_back({t.target, std::move(next)});
    }
  }
  return nfa_words == dfa_words;
}

std::string to_dot(const SubsetMachine& m) {
  std::string out = "digraph \"C_" + m.role().value + "\" {\n  rankdir=LR;\n  init [shape=point];\n";
  for (StateIndex i = 0; i < m.size(); ++i) {
    std::string label = "{";
    const auto& members = m.state(i).members;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k) label += ",";
      label += std::to_string(members[k].value);
    }
    label += "}";
    out += "  s" + std::to_string(i) + " [shape=" + (m.is_final(i) ? "doublecircle" : "circle") + ", label=\"" +
           label + "\"];\n";
  }
  out += "  init -> s0;\n";
  for (const auto& t : m.transitions()) {
    out += "  s" + std::to_string(t.source) + " -> s" + std::to_string(t.target) + " [label=\"" +
           to_string(t.label) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mstproj
