#include "mstproj/syntax.hpp"

#include <algorithm>
#include <set>

namespace mstproj {

namespace {

void append_field(std::string& key, const std::string& s) {
  key += std::to_string(s.size());
  key += ':';
  key += s;
}

std::string intern_key(const Node& n) {
  std::string key;
  switch (n.kind) {
    case NodeKind::End:
      key = "E";
      break;
    case NodeKind::Choice:
      key = "C";
      append_field(key, n.sender.value);
      for (const auto& b : n.branches) {
        append_field(key, b.receiver.value);
        append_field(key, b.message.value);
        key += std::to_string(b.next.value);
        key += ';';
      }
      break;
    case NodeKind::Rec:
      key = "R";
      append_field(key, n.var.value);
      key += std::to_string(n.body.value);
      break;
    case NodeKind::Var:
      key = "V";
      append_field(key, n.var.value);
      break;
  }
  return key;
}

}  // namespace

NodeId NodeArena::intern(Node node) {
  auto key = intern_key(node);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(node));
  index_.emplace(std::move(key), id);
  return id;
}

NodeId NodeArena::end() { return intern(Node{}); }

NodeId NodeArena::choice(Role sender, std::vector<Branch> branches) {
  Node n;
  n.kind = NodeKind::Choice;
  n.sender = std::move(sender);
  n.branches = std::move(branches);
  return intern(std::move(n));
}

NodeId NodeArena::prefix(Role sender, Role receiver, Message message, NodeId next) {
  return choice(std::move(sender), {Branch{std::move(receiver), std::move(message), next}});
}

NodeId NodeArena::rec(RecVar var, NodeId body) {
  Node n;
  n.kind = NodeKind::Rec;
  n.var = std::move(var);
  n.body = body;
  return intern(std::move(n));
}

NodeId NodeArena::var(RecVar var) {
  Node n;
  n.kind = NodeKind::Var;
  n.var = std::move(var);
  return intern(std::move(n));
}

GlobalType::GlobalType(std::shared_ptr<const NodeArena> arena, NodeId root)
    : arena_(std::move(arena)), root_(root) {
  std::vector<bool> seen(arena_->size(), false);
  std::set<Role> role_seen;
  std::set<Message> msg_seen;
  auto note_role = [&](const Role& r) {
    if (role_seen.insert(r).second) roles_.push_back(r);
  };

  // Iterative pre-order walk; children pushed in reverse to keep source order.
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen[id.value]) continue;
    seen[id.value] = true;
    const Node& n = arena_->at(id);
    switch (n.kind) {
      case NodeKind::End:
        end_ = id;
        break;
      case NodeKind::Choice:
        note_role(n.sender);
        for (const auto& b : n.branches) {
          note_role(b.receiver);
          if (msg_seen.insert(b.message).second) messages_.push_back(b.message);
        }
        for (auto it = n.branches.rbegin(); it != n.branches.rend(); ++it) stack.push_back(it->next);
        break;
      case NodeKind::Rec:
        binders_[n.var].push_back(id);
        stack.push_back(n.body);
        break;
      case NodeKind::Var:
        break;
    }
  }
  for (auto& [var, ids] : binders_) std::sort(ids.begin(), ids.end());
}

std::vector<NodeId> GlobalType::subterms() const {
  std::vector<bool> seen(arena_->size(), false);
  std::vector<NodeId> stack{root_};
  std::vector<NodeId> out;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen[id.value]) continue;
    seen[id.value] = true;
    out.push_back(id);
    const Node& n = arena_->at(id);
    if (n.kind == NodeKind::Choice) {
      for (const auto& b : n.branches) stack.push_back(b.next);
    } else if (n.kind == NodeKind::Rec) {
      stack.push_back(n.body);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<NodeId> GlobalType::binder(const RecVar& var) const {
  auto it = binders_.find(var);
  if (it == binders_.end() || it->second.size() != 1) return std::nullopt;
  return it->second.front();
}

std::size_t measure_size(const GlobalType& g) {
  std::size_t states = 0;
  std::size_t transitions = 0;
  for (NodeId id : g.subterms()) {
    ++states;
    const Node& n = g.node(id);
    switch (n.kind) {
      case NodeKind::End:
        break;
      case NodeKind::Choice:
        transitions += n.branches.size();
        break;
      case NodeKind::Rec:
      case NodeKind::Var:
        ++transitions;
        break;
    }
  }
  return states + transitions;
}

bool structurally_equal(const GlobalType& a, NodeId ra, const GlobalType& b, NodeId rb) {
  const Node& x = a.node(ra);
  const Node& y = b.node(rb);
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::End:
      return true;
    case NodeKind::Var:
      return x.var == y.var;
    case NodeKind::Rec:
      return x.var == y.var && structurally_equal(a, x.body, b, y.body);
    case NodeKind::Choice:
      if (x.sender != y.sender || x.branches.size() != y.branches.size()) return false;
      for (std::size_t i = 0; i < x.branches.size(); ++i) {
        const auto& bx = x.branches[i];
        const auto& by = y.branches[i];
        if (bx.receiver != by.receiver || bx.message != by.message) return false;
        if (!structurally_equal(a, bx.next, b, by.next)) return false;
      }
      return true;
  }
  return false;
}

GlobalType rename(const GlobalType& g, const std::function<Role(const Role&)>& role_map,
                  const std::function<Message(const Message&)>& message_map,
                  const std::function<RecVar(const RecVar&)>& var_map) {
  GlobalTypeBuilder builder;
  std::unordered_map<NodeId, NodeId> memo;
  std::function<NodeId(NodeId)> go = [&](NodeId id) -> NodeId {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const Node& n = g.node(id);
    NodeId out;
    switch (n.kind) {
      case NodeKind::End:
        out = builder.arena().end();
        break;
      case NodeKind::Var:
        out = builder.arena().var(var_map(n.var));
        break;
      case NodeKind::Rec:
        out = builder.arena().rec(var_map(n.var), go(n.body));
        break;
      case NodeKind::Choice: {
        std::vector<Branch> branches;
        for (const auto& b : n.branches) {
          branches.push_back(Branch{role_map(b.receiver), message_map(b.message), go(b.next)});
        }
        out = builder.arena().choice(role_map(n.sender), std::move(branches));
        break;
      }
    }
    memo.emplace(id, out);
    return out;
  };
  NodeId root = go(g.root());
  return builder.build(root);
}

}  // namespace mstproj
