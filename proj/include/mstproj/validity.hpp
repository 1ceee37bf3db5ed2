#pragma once

// Send and Receive Validity, available messages, verdicts and counterexamples.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "mstproj/projection.hpp"

namespace mstproj {

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct OriginsDestinations {
  std::vector<NodeId> origins;
  std::vector<NodeId> destinations;
};

/// Members of `source` with an edge labeled `label`, and the members of the
/// successor state reached through such an edge followed by ε-edges.
OriginsDestinations transition_origins_destinations(const SubsetMachine& m, const LocalNfa& nfa, StateIndex source,
                                                    const AsyncEvent& label);

struct AvailableMessageQuery {
  NodeId subterm;
  std::set<Role> blocked;
  std::set<RecVar> unfolded;
};

struct AvailableMessageResult {
  /// Each available send with a GAut path from the queried subterm whose
  /// last transition is the matching synchronous event.
  std::map<AsyncEvent, std::vector<SyncTransition>> events;

  bool contains(const AsyncEvent& e) const { return events.contains(e); }
};

/// Memoizing evaluator for M^{B,T}, bound to one global type.
class AvailableMessages {
 public:
  explicit AvailableMessages(const GlobalType& g);
  ~AvailableMessages();
  AvailableMessages(const AvailableMessages&) = delete;
  AvailableMessages& operator=(const AvailableMessages&) = delete;

  const AvailableMessageResult& query(const AvailableMessageQuery& q);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

AvailableMessageResult available_messages(const GlobalType& g, const AvailableMessageQuery& q);

enum class ViolationKind { SendValidity, ReceiveValidity };

std::string_view to_string(ViolationKind kind);

struct ValidityViolation {
  ViolationKind kind = ViolationKind::SendValidity;
  Role role;
  StateIndex state = 0;
  SubsetState members;

  // Send: the offending transition and the members that cannot take it.
  AsyncEvent label;
  std::vector<NodeId> missing;

  // Receive: p<q1?m1 competes with p<q2?m2, and q1>p!m1 is available in
  // the continuation `witness` of the second.
  AsyncEvent first;
  AsyncEvent second;
  NodeId witness;
  AsyncEvent offending;
};

/// Human-readable one-line summary.
std::string describe(const ValidityViolation& v, const GlobalType& g);

/// A send transition is valid when every member of its source that can
/// make a move visible to the role has that transition. Members whose every
/// outgoing edge is silent for the role only pass through to their successors.
std::optional<ValidityViolation> check_send_validity(const SubsetMachine& m, const LocalNfa& nfa, bool all,
                                                     std::vector<ValidityViolation>* sink = nullptr);
std::optional<ValidityViolation> check_receive_validity(const SubsetMachine& m, const LocalNfa& nfa,
                                                        const GlobalType& g, AvailableMessages& available,
                                                        bool all = false,
                                                        std::vector<ValidityViolation>* sink = nullptr);
std::optional<ValidityViolation> check_send_validity(const SubsetMachine& m, const LocalNfa& nfa);
std::optional<ValidityViolation> check_receive_validity(const SubsetMachine& m, const LocalNfa& nfa,
                                                        const GlobalType& g);

bool check_no_mixed_choice(const SubsetMachine& m);

struct Verdict {
  bool implementable = false;
  /// Subset constructions for every role, in role order, whatever the outcome.
  std::vector<SubsetMachine> subset_constructions;
  /// Present iff implementable.
  std::optional<std::vector<SubsetMachine>> projections;
  std::optional<ValidityViolation> violation;
  /// Every violation, filled only when requested.
  std::vector<ValidityViolation> violations;
  std::optional<Trace> counterexample;
};

Verdict check_implementability(const GlobalType& g, bool all_violations = false);

/// Builds a trace that the subset CSM can execute but that no run of g
/// explains. Throws InternalError if no candidate validates.
Trace build_counterexample(const GlobalType& g, const ValidityViolation& v);

}  // namespace mstproj
