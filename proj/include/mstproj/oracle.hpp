#pragma once

// Brute-force checks used to validate verdicts and counterexamples.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mstproj/csm.hpp"

namespace mstproj {

class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True when v is reachable from u by swapping adjacent independent events.
/// Throws BudgetExhausted if more than `budget` words are expanded.
bool indistinguishable_finite(std::span<const AsyncEvent> u, std::span<const AsyncEvent> v,
                              std::size_t budget = 10000);

/// A run prefix of GAut(g) that every role's view of w is a prefix of, if
/// one exists. Runs never need to be maximal: every non-final GAut state has
/// a successor, so any such prefix extends to a maximal run.
std::optional<std::vector<SyncTransition>> intersection_witness(const GlobalType& g, std::span<const AsyncEvent> w);

/// Same search against a prebuilt automaton.
std::optional<std::vector<SyncTransition>> intersection_witness(const SyncAutomaton& gaut,
                                                                std::span<const AsyncEvent> w);

struct FidelityReport {
  bool passed = true;
  /// 0 when passed, else the failing obligation: 1 replay, 2 intersection, 3 deadlock.
  int failed_obligation = 0;
  Trace witness;
  std::string detail;
  std::size_t gaut_prefixes = 0;
  std::size_t csm_views = 0;
  bool frontier_cut = false;
};

FidelityReport bounded_fidelity_check(const GlobalType& g, const Csm& c, std::size_t depth = 14,
                                      std::size_t channel_bound = 4);

/// The implementable family whose subset constructions for q need at least
/// 2^k states.
GlobalType generate_gk(unsigned k);

}  // namespace mstproj
