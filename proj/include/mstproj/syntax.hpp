#pragma once

// Global types: interned AST, parser, pretty-printer and well-formedness.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mstproj {

/// A name wrapper that keeps roles, messages and recursion variables apart.
template <class Tag>
struct Name {
  std::string value;

  Name() = default;
  explicit Name(std::string v) : value(std::move(v)) {}

  friend auto operator<=>(const Name&, const Name&) = default;
  friend bool operator==(const Name&, const Name&) = default;
};

struct RoleTag {};
struct MessageTag {};
struct RecVarTag {};

using Role = Name<RoleTag>;
using Message = Name<MessageTag>;
using RecVar = Name<RecVarTag>;

/// Dense identifier of an interned subterm. Ids index the owning arena.
struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class NodeKind { End, Choice, Rec, Var };

struct Branch {
  Role receiver;
  Message message;
  NodeId next;
  friend bool operator==(const Branch&, const Branch&) = default;
};

/// One interned node. Which fields are meaningful depends on `kind`:
/// Choice uses sender/branches, Rec uses var/body, Var uses var.
struct Node {
  NodeKind kind = NodeKind::End;
  Role sender;
  std::vector<Branch> branches;
  RecVar var;
  NodeId body;
};

/// Hash-consing store. Structurally equal subterms receive the same id;
/// ids are handed out in creation order.
class NodeArena {
 public:
  NodeId end();
  NodeId choice(Role sender, std::vector<Branch> branches);
  NodeId prefix(Role sender, Role receiver, Message message, NodeId next);
  NodeId rec(RecVar var, NodeId body);
  NodeId var(RecVar var);

  const Node& at(NodeId id) const { return nodes_.at(id.value); }
  std::size_t size() const { return nodes_.size(); }

 private:
  NodeId intern(Node node);
  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeId> index_;
};

/// An immutable global type: a root inside a shared arena. Only the subterms
/// of the root are ever stored in the arena, so arena ids double as the
/// subterm universe.
class GlobalType {
 public:
  GlobalType(std::shared_ptr<const NodeArena> arena, NodeId root);

  NodeId root() const { return root_; }
  const Node& node(NodeId id) const { return arena_->at(id); }
  std::size_t node_count() const { return arena_->size(); }

  /// Every subterm id in ascending order.
  std::vector<NodeId> subterms() const;

  /// Roles in order of first occurrence: at each choice the sender, then the
  /// receivers of its branches, then the continuations left to right.
  const std::vector<Role>& roles() const { return roles_; }
  /// Message labels in order of first occurrence.
  const std::vector<Message>& messages() const { return messages_; }

  /// The Rec node binding `var`, if there is exactly one such binder.
  std::optional<NodeId> binder(const RecVar& var) const;
  std::optional<NodeId> end_node() const { return end_; }

  const NodeArena& arena() const { return *arena_; }

 private:
  std::shared_ptr<const NodeArena> arena_;
  NodeId root_;
  std::vector<Role> roles_;
  std::vector<Message> messages_;
  std::map<RecVar, std::vector<NodeId>> binders_;
  std::optional<NodeId> end_;
};

/// Helper for building types in code (generators, tests).
class GlobalTypeBuilder {
 public:
  GlobalTypeBuilder() : arena_(std::make_shared<NodeArena>()) {}
  NodeArena& arena() { return *arena_; }
  GlobalType build(NodeId root) { return GlobalType(arena_, root); }

 private:
  std::shared_ptr<NodeArena> arena_;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

GlobalType parse_global_type(std::string_view text);

/// Canonical layout: single-branch prefixes stay on one line, every branch
/// of a `+ { ... }` gets its own line.
std::string pretty_print(const GlobalType& g);
/// Compact one-line rendering of a subterm, used for labels and messages.
std::string render_subterm(const GlobalType& g, NodeId id);

/// True when the subterms rooted at a and b have the same shape.
bool structurally_equal(const GlobalType& a, NodeId ra, const GlobalType& b, NodeId rb);

enum class WellFormednessRule { BranchDistinctness, SelfCommunication, Unguarded, UnboundVariable };

std::string_view to_string(WellFormednessRule rule);

struct WellFormednessViolation {
  WellFormednessRule rule;
  NodeId location;
  std::string message;
};

struct WellFormednessReport {
  std::vector<WellFormednessViolation> violations;
  bool ok() const { return violations.empty(); }
};

WellFormednessReport validate_well_formedness(const GlobalType& g);

class WellFormednessError : public std::runtime_error {
 public:
  explicit WellFormednessError(WellFormednessReport report);
  const WellFormednessReport& report() const { return report_; }

 private:
  WellFormednessReport report_;
};

/// Throws WellFormednessError unless `g` passes validation.
void require_well_formed(const GlobalType& g);

/// Number of GAut states plus transitions, counting each distinct subterm once.
std::size_t measure_size(const GlobalType& g);

/// Rebuilds `g` with every role, message and variable passed through the maps.
GlobalType rename(const GlobalType& g, const std::function<Role(const Role&)>& role_map,
                  const std::function<Message(const Message&)>& message_map,
                  const std::function<RecVar(const RecVar&)>& var_map);

}  // namespace mstproj

template <class Tag>
struct std::hash<mstproj::Name<Tag>> {
  std::size_t operator()(const mstproj::Name<Tag>& n) const noexcept {
    return std::hash<std::string>{}(n.value);
  }
};

template <>
struct std::hash<mstproj::NodeId> {
  std::size_t operator()(const mstproj::NodeId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
