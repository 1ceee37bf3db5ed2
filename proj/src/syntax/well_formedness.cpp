#include <algorithm>
#include <set>

#include "mstproj/syntax.hpp"

namespace mstproj {

std::string_view to_string(WellFormednessRule rule) {
  switch (rule) {
    case WellFormednessRule::BranchDistinctness:
      return "BranchDistinctness";
    case WellFormednessRule::SelfCommunication:
      return "SelfCommunication";
    case WellFormednessRule::Unguarded:
      return "Unguarded";
    case WellFormednessRule::UnboundVariable:
      return "UnboundVariable";
  }
  return "?";
}

namespace {

std::string summarize(const WellFormednessReport& report) {
  std::string out = "global type is not well-formed:";
  for (const auto& v : report.violations) {
    out += "\n  ";
    out += to_string(v.rule);
    out += ": ";
    out += v.message;
  }
  return out;
}

}  // namespace

WellFormednessError::WellFormednessError(WellFormednessReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

WellFormednessReport validate_well_formedness(const GlobalType& g) {
  WellFormednessReport report;
  auto add = [&](WellFormednessRule rule, NodeId at, std::string msg) {
    report.violations.push_back({rule, at, std::move(msg)});
  };

  const auto ids = g.subterms();
  std::map<RecVar, std::vector<NodeId>> binders;
  for (NodeId id : ids) {
    const Node& n = g.node(id);
    if (n.kind == NodeKind::Choice) {
      std::set<std::pair<Role, Message>> seen;
      for (const auto& b : n.branches) {
        if (b.receiver == n.sender) {
          add(WellFormednessRule::SelfCommunication, id,
              "role '" + n.sender.value + "' sends '" + b.message.value + "' to itself");
        }
        if (!seen.insert({b.receiver, b.message}).second) {
          add(WellFormednessRule::BranchDistinctness, id,
              "duplicate branch " + n.sender.value + "->" + b.receiver.value + ":" + b.message.value);
        }
      }
    } else if (n.kind == NodeKind::Rec) {
      binders[n.var].push_back(id);
      // Follow nested binders down to the first non-binder.
      NodeId cur = n.body;
      while (g.node(cur).kind == NodeKind::Rec) cur = g.node(cur).body;
      if (g.node(cur).kind == NodeKind::Var && g.node(cur).var == n.var) {
        add(WellFormednessRule::Unguarded, id,
            "variable '" + n.var.value + "' occurs without an intervening message");
      }
    }
  }

  for (const auto& [var, ids_for_var] : binders) {
    for (std::size_t i = 1; i < ids_for_var.size(); ++i) {
      add(WellFormednessRule::UnboundVariable, ids_for_var[i],
          "variable '" + var.value + "' is bound more than once");
    }
  }

  // Free variables, bottom-up over ascending ids (children precede parents).
  std::unordered_map<NodeId, std::set<RecVar>> free;
  for (NodeId id : ids) {
    const Node& n = g.node(id);
    std::set<RecVar> fv;
    switch (n.kind) {
      case NodeKind::End:
        break;
      case NodeKind::Var:
        fv.insert(n.var);
        break;
      case NodeKind::Rec:
        fv = free.at(n.body);
        fv.erase(n.var);
        break;
      case NodeKind::Choice:
        for (const auto& b : n.branches) {
          const auto& sub = free.at(b.next);
          fv.insert(sub.begin(), sub.end());
        }
        break;
    }
    free.emplace(id, std::move(fv));
  }
  for (const RecVar& v : free.at(g.root())) {
    NodeId at = g.root();
    for (NodeId id : ids) {
      if (g.node(id).kind == NodeKind::Var && g.node(id).var == v) at = id;
    }
    add(WellFormednessRule::UnboundVariable, at, "variable '" + v.value + "' is not bound");
  }

  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const auto& a, const auto& b) { return a.location < b.location; });
  return report;
}

void require_well_formed(const GlobalType& g) {
  auto report = validate_well_formedness(g);
  if (!report.ok()) throw WellFormednessError(std::move(report));
}

}  // namespace mstproj
