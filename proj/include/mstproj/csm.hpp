#pragma once

// Communicating state machines over per-pair FIFO channels.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mstproj/projection.hpp"

namespace mstproj {

enum class NotEnabledReason { NoLocalTransition, EmptyChannel, WrongHead };

std::string_view to_string(NotEnabledReason reason);

class NotEnabled : public std::runtime_error {
 public:
  NotEnabled(NotEnabledReason reason, const AsyncEvent& event);
  NotEnabledReason reason() const { return reason_; }

 private:
  NotEnabledReason reason_;
};

/// One deterministic machine per role. Messages are interned to small ids
/// so configurations stay cheap to hash.
class Csm {
 public:
  explicit Csm(std::vector<SubsetMachine> machines);
  /// The subset constructions of every role of g, in first-occurrence order.
  static Csm of_subset_constructions(const GlobalType& g);

  std::size_t role_count() const { return machines_.size(); }
  const Role& role(std::size_t i) const { return machines_.at(i).role(); }
  std::optional<std::size_t> role_index(const Role& r) const;
  const SubsetMachine& machine(std::size_t i) const { return machines_.at(i); }

  std::size_t channel(std::size_t from, std::size_t to) const { return from * machines_.size() + to; }
  std::optional<std::uint32_t> message_id(const Message& m) const;
  const Message& message(std::uint32_t id) const { return messages_.at(id); }

 private:
  std::vector<SubsetMachine> machines_;
  std::vector<Message> messages_;
};

struct CsmConfiguration {
  std::vector<StateIndex> states;
  /// Indexed by Csm::channel(from, to); the diagonal stays empty.
  std::vector<std::vector<std::uint32_t>> channels;

  friend auto operator<=>(const CsmConfiguration&, const CsmConfiguration&) = default;
  friend bool operator==(const CsmConfiguration&, const CsmConfiguration&) = default;
};

struct CsmConfigurationHash {
  std::size_t operator()(const CsmConfiguration& c) const noexcept;
};

CsmConfiguration initial_configuration(const Csm& c);
bool is_final(const Csm& c, const CsmConfiguration& cfg);
/// Enabled events ordered by role index, then label.
std::vector<AsyncEvent> enabled_events(const Csm& c, const CsmConfiguration& cfg);
CsmConfiguration csm_step(const Csm& c, const CsmConfiguration& cfg, const AsyncEvent& e);
/// Replays w from the initial configuration; throws NotEnabled on the first failing event.
CsmConfiguration replay(const Csm& c, std::span<const AsyncEvent> w);

struct Deadlock {
  CsmConfiguration configuration;
  Trace witness;
};

struct ExplorationReport {
  std::size_t visited = 0;
  std::vector<Deadlock> deadlocks;
  bool frontier_cut = false;
  /// One shortest trace per visited configuration, when requested.
  std::vector<Trace> traces;
};

ExplorationReport explore(const Csm& c, std::size_t channel_bound = 4, std::size_t depth = 14,
                          bool keep_traces = false);

bool check_channel_compliance(std::span<const AsyncEvent> w);

}  // namespace mstproj
