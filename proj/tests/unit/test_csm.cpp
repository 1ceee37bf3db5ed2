#include <doctest.h>

#include <random>

#include "mstproj/csm.hpp"
#include "mstproj/validity.hpp"
#include "test_support.hpp"

using namespace mstproj;
using mstproj::testing::corpus;

namespace {

NotEnabledReason failure(const Csm& c, std::string_view trace) {
  try {
    replay(c, parse_trace(trace));
  } catch (const NotEnabled& e) {
    return e.reason();
  }
  FAIL("trace replayed: " << trace);
  return NotEnabledReason::NoLocalTransition;
}

// Receives never outrun sends, and every channel delivers in order.
bool compliant_by_queue(const Trace& w) {
  std::map<std::pair<Role, Role>, std::vector<Message>> sent;
  std::map<std::pair<Role, Role>, std::size_t> read;
  for (const auto& e : w) {
    if (e.is_send()) {
      sent[{e.active, e.peer}].push_back(e.message);
    } else {
      auto& q = sent[{e.peer, e.active}];
      auto& at = read[{e.peer, e.active}];
      if (at >= q.size() || q[at] != e.message) return false;
      ++at;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("single steps") {
  Csm c = Csm::of_subset_constructions(corpus("gs_prime"));
  CsmConfiguration init = initial_configuration(c);
  CHECK_FALSE(is_final(c, init));
  for (const auto& ch : init.channels) CHECK(ch.empty());

  auto p = *c.role_index(Role("p"));
  auto q = *c.role_index(Role("q"));
  CsmConfiguration sent = csm_step(c, init, parse_trace("p>q!o")[0]);
  CHECK(sent.channels[c.channel(p, q)] == std::vector{*c.message_id(Message("o"))});
  CHECK(sent.states[p] != init.states[p]);
  CHECK(sent.states[q] == init.states[q]);

  CsmConfiguration got = csm_step(c, sent, parse_trace("q<p?o")[0]);
  CHECK(got.channels[c.channel(p, q)].empty());
  CHECK(got.states[q] != init.states[q]);

  CHECK(failure(c, "q<p?o") == NotEnabledReason::EmptyChannel);
  CHECK(failure(c, "p>q!o.q<p?m") == NotEnabledReason::WrongHead);
  CHECK(failure(c, "q>p!o") == NotEnabledReason::NoLocalTransition);
  CHECK(failure(c, "p>q!o.p>q!o") == NotEnabledReason::NoLocalTransition);
  CHECK(to_string(NotEnabledReason::WrongHead) == "WrongHead");
}

TEST_CASE("enabled events") {
  Csm c = Csm::of_subset_constructions(corpus("gs"));
  auto events = enabled_events(c, initial_configuration(c));
  CHECK(format_trace(events) == "p>q!m.p>q!o.r>q!m.r>q!o");
  for (const auto& e : events) CHECK_NOTHROW(csm_step(c, initial_configuration(c), e));
}

TEST_CASE("the gs deadlock") {
  Csm c = Csm::of_subset_constructions(corpus("gs"));
  CsmConfiguration stuck = replay(c, parse_trace("p>q!o.q<p?o.r>q!m"));
  CHECK(enabled_events(c, stuck).empty());
  CHECK_FALSE(is_final(c, stuck));

  ExplorationReport report = explore(c);
  CHECK_FALSE(report.frontier_cut);
  REQUIRE_FALSE(report.deadlocks.empty());
  for (const auto& d : report.deadlocks) {
    CHECK(replay(c, d.witness) == d.configuration);
    CHECK(enabled_events(c, d.configuration).empty());
  }
  CHECK(std::any_of(report.deadlocks.begin(), report.deadlocks.end(),
                    [&](const Deadlock& d) { return d.configuration == stuck; }));
}

TEST_CASE("implementable corpus: no deadlocks, compliant traces") {
  for (const auto& name : testing::implementable_corpus_names()) {
    CAPTURE(name);
    Csm c = Csm::of_subset_constructions(corpus(name));
    ExplorationReport report = explore(c, 4, 14, true);
    CHECK(report.deadlocks.empty());
    CHECK(report.traces.size() == report.visited);
    for (const auto& w : report.traces) {
      CHECK(check_channel_compliance(w));
      CHECK(compliant_by_queue(w));
      CsmConfiguration cfg = replay(c, w);
      if (enabled_events(c, cfg).empty()) CHECK(is_final(c, cfg));
    }
  }
  ExplorationReport gsp = explore(Csm::of_subset_constructions(corpus("gs_prime")));
  CHECK(gsp.deadlocks.empty());
  CHECK_FALSE(gsp.frontier_cut);
}

TEST_CASE("the empty protocol") {
  Csm c = Csm::of_subset_constructions(parse_global_type("0"));
  CHECK(c.role_count() == 0);
  ExplorationReport report = explore(c);
  CHECK(report.visited == 1);
  CHECK(is_final(c, initial_configuration(c)));
  CHECK(report.deadlocks.empty());
}

TEST_CASE("bounds cut the frontier") {
  Csm loop = Csm::of_subset_constructions(parse_global_type("mu t . p->q:a . t"));
  ExplorationReport small = explore(loop, 2, 50);
  CHECK(small.frontier_cut);
  CHECK(small.visited == 6);  // up to two queued a, q before or after its receive
  CHECK(explore(loop, 10, 3).frontier_cut);
}

TEST_CASE("channel compliance") {
  CHECK(check_channel_compliance(parse_trace("p>q!a.q<p?a")));
  CHECK(check_channel_compliance(parse_trace("p>q!a.p>q!b.q<p?a")));
  CHECK(check_channel_compliance(Trace{}));
  CHECK_FALSE(check_channel_compliance(parse_trace("q<p?a")));
  CHECK_FALSE(check_channel_compliance(parse_trace("p>q!a.q<p?b")));
  CHECK_FALSE(check_channel_compliance(parse_trace("p>q!a.p>q!b.q<p?b")));
  CHECK_FALSE(check_channel_compliance(parse_trace("p>r!a.q<p?a")));
}

TEST_CASE("random types: explored traces replay and comply") {
  std::mt19937 rng(23);
  for (int i = 0; i < 150; ++i) {
    GlobalType g = testing::random_global_type(rng, 20);
    Csm c = Csm::of_subset_constructions(g);
    ExplorationReport report = explore(c, 2, 8, true);
    for (const auto& w : report.traces) {
      CHECK(check_channel_compliance(w) == compliant_by_queue(w));
      CHECK(check_channel_compliance(w));
    }
    if (check_implementability(g).implementable) CHECK(report.deadlocks.empty());
  }
}
