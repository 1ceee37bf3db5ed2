#pragma once

// Subset construction C(G,p): determinization of the erased automaton.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mstproj/automata.hpp"

namespace mstproj {

/// A non-empty, sorted set of subterm ids.
struct SubsetState {
  std::vector<NodeId> members;

  bool contains(NodeId id) const;
  friend auto operator<=>(const SubsetState&, const SubsetState&) = default;
  friend bool operator==(const SubsetState&, const SubsetState&) = default;
};

using StateIndex = std::uint32_t;

struct SubsetTransition {
  StateIndex source;
  AsyncEvent label;
  StateIndex target;
};

/// States are numbered in discovery order; the initial state is 0.
class SubsetMachine {
 public:
  SubsetMachine(Role role, std::vector<SubsetState> states, std::vector<SubsetTransition> transitions,
                std::vector<bool> finals);

  const Role& role() const { return role_; }
  std::size_t size() const { return states_.size(); }
  const SubsetState& state(StateIndex i) const { return states_.at(i); }
  const std::vector<SubsetState>& states() const { return states_; }
  const std::vector<SubsetTransition>& transitions() const { return transitions_; }
  StateIndex initial() const { return 0; }
  bool is_final(StateIndex i) const { return finals_.at(i); }
  /// Outgoing transitions of `i`, sorted by label.
  std::span<const SubsetTransition> out(StateIndex i) const;
  std::optional<StateIndex> step(StateIndex i, const AsyncEvent& label) const;

 private:
  Role role_;
  std::vector<SubsetState> states_;
  std::vector<SubsetTransition> transitions_;
  std::vector<bool> finals_;
  std::vector<std::size_t> offsets_;
};

SubsetState epsilon_closure(const LocalNfa& nfa, std::span<const NodeId> seed);

SubsetMachine subset_construction(const LocalNfa& nfa);
SubsetMachine subset_construction(const GlobalType& g, const Role& p);

/// Compares the length-bounded local languages of GAut(g) erased to p and of
/// C(g,p). Meant for testing; the decision procedure never calls it.
bool bounded_local_language_check(const GlobalType& g, const Role& p, std::size_t depth = 10);

/// States labeled with their member ids.
std::string to_dot(const SubsetMachine& m);

}  // namespace mstproj
