#include <algorithm>

#include "mstproj/validity.hpp"

namespace mstproj {

std::string_view to_string(ViolationKind kind) {
  return kind == ViolationKind::SendValidity ? "SendValidity" : "ReceiveValidity";
}

std::string describe(const ValidityViolation& v, const GlobalType& g) {
  std::string out = std::string(to_string(v.kind)) + " for role " + v.role.value + " at state " +
                    std::to_string(v.state) + ": ";
  if (v.kind == ViolationKind::SendValidity) {
    out += to_string(v.label) + " is not enabled in";
    for (std::size_t i = 0; i < v.missing.size(); ++i) {
      out += (i ? ", " : " ") + render_subterm(g, v.missing[i]);
    }
  } else {
    out += to_string(v.first) + " competes with " + to_string(v.second) + ", but " + to_string(v.offending) +
           " is available after it in " + render_subterm(g, v.witness);
  }
  return out;
}

OriginsDestinations transition_origins_destinations(const SubsetMachine& m, const LocalNfa& nfa, StateIndex source,
                                                    const AsyncEvent& label) {
  OriginsDestinations out;
  std::vector<NodeId> targets;
  for (NodeId member : m.state(source).members) {
    bool fires = false;
    for (const auto& t : nfa.out(member)) {
      if (t.label && *t.label == label) {
        fires = true;
        targets.push_back(t.target);
      }
    }
    if (fires) out.origins.push_back(member);
  }
  out.destinations = epsilon_closure(nfa, targets).members;
  return out;
}

namespace {

// A member all of whose edges are silent for the role: the role cannot
// observe being there, only in the members it leads to.
bool silent_passage(const LocalNfa& nfa, NodeId id) {
  auto edges = nfa.out(id);
  return !edges.empty() && std::all_of(edges.begin(), edges.end(), [](const auto& t) { return !t.label; });
}

std::optional<ValidityViolation> report(std::optional<ValidityViolation>& first, ValidityViolation v, bool all,
                                        std::vector<ValidityViolation>* sink) {
  if (sink) sink->push_back(v);
  if (!first) first = std::move(v);
  return all ? std::nullopt : first;
}

}  // namespace

std::optional<ValidityViolation> check_send_validity(const SubsetMachine& m, const LocalNfa& nfa, bool all,
                                                     std::vector<ValidityViolation>* sink) {
  std::optional<ValidityViolation> first;
  for (StateIndex s = 0; s < m.size(); ++s) {
    const auto& members = m.state(s).members;
    for (const auto& t : m.out(s)) {
      if (!t.label.is_send()) continue;
      auto od = transition_origins_destinations(m, nfa, s, t.label);
      std::vector<NodeId> missing;
      for (NodeId member : members) {
        if (silent_passage(nfa, member)) continue;
        if (!std::binary_search(od.origins.begin(), od.origins.end(), member)) missing.push_back(member);
      }
      if (missing.empty()) continue;
      ValidityViolation v;
      v.kind = ViolationKind::SendValidity;
      v.role = m.role();
      v.state = s;
      v.members = m.state(s);
      v.label = t.label;
      v.missing = std::move(missing);
      if (report(first, std::move(v), all, sink)) return first;
    }
  }
  return first;
}

std::optional<ValidityViolation> check_send_validity(const SubsetMachine& m, const LocalNfa& nfa) {
  return check_send_validity(m, nfa, false, nullptr);
}

std::optional<ValidityViolation> check_receive_validity(const SubsetMachine& m, const LocalNfa& nfa,
                                                        const GlobalType& g, AvailableMessages& available, bool all,
                                                        std::vector<ValidityViolation>* sink) {
  (void)g;
  std::optional<ValidityViolation> first;
  const Role& p = m.role();
  for (StateIndex s = 0; s < m.size(); ++s) {
    std::vector<AsyncEvent> receives;
    for (const auto& t : m.out(s)) {
      if (t.label.is_receive()) receives.push_back(t.label);
    }
    for (const auto& t1 : receives) {
      AsyncEvent offending = AsyncEvent::send(t1.peer, p, t1.message);
      for (const auto& t2 : receives) {
        if (t1.peer == t2.peer) continue;
        auto od = transition_origins_destinations(m, nfa, s, t2);
        for (NodeId g2 : od.destinations) {
          if (!available.query({g2, {p}, {}}).contains(offending)) continue;
          ValidityViolation v;
          v.kind = ViolationKind::ReceiveValidity;
          v.role = p;
          v.state = s;
          v.members = m.state(s);
          v.first = t1;
          v.second = t2;
          v.witness = g2;
          v.offending = offending;
          if (report(first, std::move(v), all, sink)) return first;
          break;
        }
      }
    }
  }
  return first;
}

std::optional<ValidityViolation> check_receive_validity(const SubsetMachine& m, const LocalNfa& nfa,
                                                        const GlobalType& g) {
  AvailableMessages available(g);
  return check_receive_validity(m, nfa, g, available);
}

bool check_no_mixed_choice(const SubsetMachine& m) {
  for (StateIndex s = 0; s < m.size(); ++s) {
    bool sends = false;
    bool receives = false;
    for (const auto& t : m.out(s)) (t.label.is_send() ? sends : receives) = true;
    if (sends && receives) return false;
  }
  return true;
}

Verdict check_implementability(const GlobalType& g, bool all_violations) {
  require_well_formed(g);
  Verdict verdict;
  SyncAutomaton gaut = build_gaut(g);
  AvailableMessages available(g);
  std::vector<ValidityViolation>* sink = all_violations ? &verdict.violations : nullptr;

  for (const Role& p : g.roles()) {
    LocalNfa nfa = erase(gaut, p);
    verdict.subset_constructions.push_back(subset_construction(nfa));
    const SubsetMachine& m = verdict.subset_constructions.back();
    if (verdict.violation && !all_violations) continue;
    auto send = check_send_validity(m, nfa, all_violations, sink);
    if (send && !verdict.violation) verdict.violation = send;
    if (verdict.violation && !all_violations) continue;
    auto recv = check_receive_validity(m, nfa, g, available, all_violations, sink);
    if (recv && !verdict.violation) verdict.violation = recv;
  }

  verdict.implementable = !verdict.violation;
  if (verdict.implementable) {
    verdict.projections = verdict.subset_constructions;
  } else {
    verdict.counterexample = build_counterexample(g, *verdict.violation);
  }
  return verdict;
}

}  // namespace mstproj
