#include <map>
#include <tuple>

#include "mstproj/validity.hpp"

namespace mstproj {

struct AvailableMessages::Impl {
  const GlobalType& g;
  std::map<Role, unsigned> role_bit;
  std::map<RecVar, unsigned> var_bit;
  std::map<std::tuple<std::uint32_t, std::uint64_t, std::uint64_t>, AvailableMessageResult> memo;

  explicit Impl(const GlobalType& gt) : g(gt) {
    for (const Role& r : g.roles()) role_bit.emplace(r, static_cast<unsigned>(role_bit.size()));
    for (NodeId id : g.subterms()) {
      const Node& n = g.node(id);
      if (n.kind == NodeKind::Rec || n.kind == NodeKind::Var) var_bit.emplace(n.var, 0);
    }
    unsigned i = 0;
    for (auto& [v, bit] : var_bit) bit = i++;
    if (role_bit.size() > 64 || var_bit.size() > 64) {
      throw InternalError("available messages support at most 64 roles and 64 recursion variables");
    }
  }

  std::uint64_t role_mask(const Role& r) const {
    auto it = role_bit.find(r);
    return it == role_bit.end() ? 0 : (std::uint64_t{1} << it->second);
  }
  std::uint64_t var_mask(const RecVar& v) const { return std::uint64_t{1} << var_bit.at(v); }

  static void add(AvailableMessageResult& out, const AsyncEvent& e, std::vector<SyncTransition> head,
                  const std::vector<SyncTransition>& tail) {
    if (out.events.contains(e)) return;
    head.insert(head.end(), tail.begin(), tail.end());
    out.events.emplace(e, std::move(head));
  }

  const AvailableMessageResult& compute(NodeId id, std::uint64_t blocked, std::uint64_t unfolded) {
    auto key = std::make_tuple(id.value, blocked, unfolded);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    AvailableMessageResult out;
    const Node& n = g.node(id);
    switch (n.kind) {
      case NodeKind::End:
        break;
      case NodeKind::Rec: {
        const auto& sub = compute(n.body, blocked, unfolded | var_mask(n.var));
        SyncTransition step{id, std::nullopt, n.body};
        for (const auto& [e, path] : sub.events) add(out, e, {step}, path);
        break;
      }
      case NodeKind::Var: {
        if (unfolded & var_mask(n.var)) break;
        auto binder = g.binder(n.var);
        if (!binder) throw InternalError("variable without a unique binder: " + n.var.value);
        NodeId body = g.node(*binder).body;
        const auto& sub = compute(body, blocked, unfolded | var_mask(n.var));
        std::vector<SyncTransition> steps{{id, std::nullopt, *binder}, {*binder, std::nullopt, body}};
        for (const auto& [e, path] : sub.events) add(out, e, steps, path);
        break;
      }
      case NodeKind::Choice: {
        bool sender_blocked = (blocked & role_mask(n.sender)) != 0;
        for (const auto& b : n.branches) {
          SyncTransition step{id, SyncEvent{n.sender, b.receiver, b.message}, b.next};
          if (!sender_blocked) {
            add(out, AsyncEvent::send(n.sender, b.receiver, b.message), {step}, {});
            const auto& sub = compute(b.next, blocked, unfolded);
            for (const auto& [e, path] : sub.events) {
              if (e.active == n.sender && e.peer == b.receiver) continue;
              add(out, e, {step}, path);
            }
          } else {
            const auto& sub = compute(b.next, blocked | role_mask(b.receiver), unfolded);
            for (const auto& [e, path] : sub.events) add(out, e, {step}, path);
          }
        }
        break;
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  }
};

AvailableMessages::AvailableMessages(const GlobalType& g) : impl_(std::make_unique<Impl>(g)) {}
AvailableMessages::~AvailableMessages() = default;

const AvailableMessageResult& AvailableMessages::query(const AvailableMessageQuery& q) {
  if (q.subterm.value >= impl_->g.node_count()) throw InternalError("subterm is not part of the global type");
  std::uint64_t blocked = 0;
  for (const Role& r : q.blocked) blocked |= impl_->role_mask(r);
  std::uint64_t unfolded = 0;
  for (const RecVar& v : q.unfolded) {
    if (impl_->var_bit.contains(v)) unfolded |= impl_->var_mask(v);
  }
  return impl_->compute(q.subterm, blocked, unfolded);
}

AvailableMessageResult available_messages(const GlobalType& g, const AvailableMessageQuery& q) {
  AvailableMessages m(g);
  return m.query(q);
}

}  // namespace mstproj
