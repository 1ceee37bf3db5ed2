#include "mstproj/cli.hpp"

namespace mstproj::cli {

using nlohmann::json;

namespace {

json members_json(const SubsetState& s) {
  json out = json::array();
  for (NodeId id : s.members) out.push_back(id.value);
  return out;
}

}  // namespace

json violation_json(const ValidityViolation& v, const GlobalType& g) {
  json out = {
      {"kind", std::string(to_string(v.kind))},
      {"role", v.role.value},
      {"state", v.state},
      {"members", members_json(v.members)},
      {"message", describe(v, g)},
  };
  if (v.kind == ViolationKind::SendValidity) {
    out["transition"] = to_string(v.label);
    json missing = json::array();
    for (NodeId id : v.missing) missing.push_back(render_subterm(g, id));
    out["not_enabled_in"] = std::move(missing);
  } else {
    out["first"] = to_string(v.first);
    out["second"] = to_string(v.second);
    out["witness"] = render_subterm(g, v.witness);
    out["available"] = to_string(v.offending);
  }
  return out;
}

json machine_summary_json(const SubsetMachine& m) {
  std::size_t finals = 0;
  for (StateIndex i = 0; i < m.size(); ++i) finals += m.is_final(i) ? 1 : 0;
  return {{"role", m.role().value},
          {"states", m.size()},
          {"transitions", m.transitions().size()},
          {"final_states", finals}};
}

json machine_json(const SubsetMachine& m, const GlobalType& g) {
  json states = json::array();
  json finals = json::array();
  for (StateIndex i = 0; i < m.size(); ++i) {
    json subterms = json::array();
    for (NodeId id : m.state(i).members) subterms.push_back(render_subterm(g, id));
    states.push_back({{"id", i}, {"members", members_json(m.state(i))}, {"subterms", std::move(subterms)}});
    if (m.is_final(i)) finals.push_back(i);
  }
  json transitions = json::array();
  for (const auto& t : m.transitions()) {
    transitions.push_back({{"source", t.source}, {"label", to_string(t.label)}, {"target", t.target}});
  }
  return {{"role", m.role().value},
          {"initial", m.initial()},
          {"states", std::move(states)},
          {"transitions", std::move(transitions)},
          {"final_states", std::move(finals)}};
}

json exploration_json(const ExplorationReport& r) {
  json deadlocks = json::array();
  for (const auto& d : r.deadlocks) deadlocks.push_back({{"trace", format_trace(d.witness)}});
  return {{"visited", r.visited}, {"frontier_cut", r.frontier_cut}, {"deadlocks", std::move(deadlocks)}};
}

}  // namespace mstproj::cli
