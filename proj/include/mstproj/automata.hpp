#pragma once

// GAut(G), asynchronous events, split and projection by erasure.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mstproj/syntax.hpp"

namespace mstproj {

struct SyncEvent {
  Role sender;
  Role receiver;
  Message message;
  friend auto operator<=>(const SyncEvent&, const SyncEvent&) = default;
  friend bool operator==(const SyncEvent&, const SyncEvent&) = default;
};

enum class Direction { Send, Receive };

/// `active` is the role performing the event. Field order fixes the total
/// order used everywhere labels are sorted.
struct AsyncEvent {
  Role active;
  Direction direction = Direction::Send;
  Role peer;
  Message message;

  static AsyncEvent send(Role from, Role to, Message m) {
    return {std::move(from), Direction::Send, std::move(to), std::move(m)};
  }
  static AsyncEvent receive(Role at, Role from, Message m) {
    return {std::move(at), Direction::Receive, std::move(from), std::move(m)};
  }

  bool is_send() const { return direction == Direction::Send; }
  bool is_receive() const { return direction == Direction::Receive; }

  friend auto operator<=>(const AsyncEvent&, const AsyncEvent&) = default;
  friend bool operator==(const AsyncEvent&, const AsyncEvent&) = default;
};

using Trace = std::vector<AsyncEvent>;

/// `p->q:m`
std::string to_string(const SyncEvent& e);
/// Token form: `p>q!m` or `p<q?m`.
std::string to_string(const AsyncEvent& e);
/// Tokens joined by `.`; the empty trace renders as the empty string.
std::string format_trace(std::span<const AsyncEvent> w);
/// Inverse of format_trace. Throws std::invalid_argument on malformed tokens.
Trace parse_trace(std::string_view text);

std::pair<AsyncEvent, AsyncEvent> split(const SyncEvent& e);
Trace split_word(std::span<const SyncEvent> w);
/// w restricted to the events whose active role is p.
Trace project(std::span<const AsyncEvent> w, const Role& p);
/// split(e) restricted to p: the send, the receive, or nothing.
std::optional<AsyncEvent> erase_label(const SyncEvent& e, const Role& p);

template <class Label>
struct Edge {
  NodeId source;
  std::optional<Label> label;  // nullopt is ε
  NodeId target;
  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

using SyncTransition = Edge<SyncEvent>;
using LocalTransition = Edge<AsyncEvent>;

/// Shared storage for GAut and its erasures. States are subterm ids; the
/// transition list is sorted by (source, label, target) with ε first.
template <class Label>
class SubtermAutomaton {
 public:
  SubtermAutomaton(std::vector<NodeId> states, std::vector<Edge<Label>> transitions, NodeId initial,
                   std::vector<NodeId> finals, std::size_t id_bound);

  const std::vector<NodeId>& states() const { return states_; }
  const std::vector<Edge<Label>>& transitions() const { return transitions_; }
  NodeId initial() const { return initial_; }
  const std::vector<NodeId>& finals() const { return finals_; }
  bool is_final(NodeId id) const;
  /// Outgoing transitions of a state, in sorted order.
  std::span<const Edge<Label>> out(NodeId id) const;
  /// One past the largest state id; sizes id-indexed tables.
  std::size_t id_bound() const { return offsets_.size() - 1; }

 private:
  std::vector<NodeId> states_;
  std::vector<Edge<Label>> transitions_;
  NodeId initial_;
  std::vector<NodeId> finals_;
  std::vector<std::size_t> offsets_;
};

class SyncAutomaton : public SubtermAutomaton<SyncEvent> {
 public:
  using SubtermAutomaton::SubtermAutomaton;
};

class LocalNfa : public SubtermAutomaton<AsyncEvent> {
 public:
  LocalNfa(Role role, SubtermAutomaton<AsyncEvent> base)
      : SubtermAutomaton(std::move(base)), role_(std::move(role)) {}
  const Role& role() const { return role_; }

 private:
  Role role_;
};

/// Requires every Var to have a unique binder; throws WellFormednessError otherwise.
SyncAutomaton build_gaut(const GlobalType& g);
LocalNfa erase(const SyncAutomaton& a, const Role& p);

std::string to_dot(const SyncAutomaton& a, const GlobalType& g);
std::string to_dot(const LocalNfa& a, const GlobalType& g);

}  // namespace mstproj
