#include <doctest.h>

#include <random>

#include "mstproj/automata.hpp"
#include "test_support.hpp"

using namespace mstproj;
using mstproj::testing::corpus;
using mstproj::testing::find_subterm;

namespace {

AsyncEvent send(const char* p, const char* q, const char* m) { return AsyncEvent::send(Role(p), Role(q), Message(m)); }
AsyncEvent recv(const char* p, const char* q, const char* m) {
  return AsyncEvent::receive(Role(p), Role(q), Message(m));
}
SyncEvent sync(const char* p, const char* q, const char* m) { return {Role(p), Role(q), Message(m)}; }

}  // namespace

TEST_CASE("GAut of the terminated protocol") {
  GlobalType g = parse_global_type("0");
  SyncAutomaton a = build_gaut(g);
  CHECK(a.states().size() == 1);
  CHECK(a.transitions().empty());
  CHECK(a.is_final(a.initial()));
}

TEST_CASE("GAut of gs") {
  GlobalType g = corpus("gs");
  SyncAutomaton a = build_gaut(g);
  // Subterms: the choice, both continuations, and 0.
  NodeId root = g.root();
  NodeId top = find_subterm(g, "r->q:o . 0");
  NodeId bottom = find_subterm(g, "r->q:m . 0");
  NodeId end = find_subterm(g, "0");
  CHECK(a.states() == std::vector<NodeId>{std::min({root, top, bottom, end}), a.states()[1], a.states()[2],
                                          std::max({root, top, bottom, end})});
  CHECK(a.states().size() == 4);
  std::vector<SyncTransition> expected{{root, sync("p", "q", "o"), top},
                                       {root, sync("p", "q", "m"), bottom},
                                       {top, sync("r", "q", "o"), end},
                                       {bottom, sync("r", "q", "m"), end}};
  std::sort(expected.begin(), expected.end());
  CHECK(a.transitions() == expected);
  CHECK(a.finals() == std::vector<NodeId>{end});
}

TEST_CASE("GAut of a minimal loop") {
  GlobalType g = parse_global_type("mu t . p->q:o . t");
  SyncAutomaton a = build_gaut(g);
  NodeId rec = g.root();
  NodeId body = g.node(rec).body;
  NodeId var = g.node(body).branches[0].next;
  CHECK(a.states().size() == 3);
  std::vector<SyncTransition> expected{{rec, std::nullopt, body}, {body, sync("p", "q", "o"), var},
                                       {var, std::nullopt, rec}};
  std::sort(expected.begin(), expected.end());
  CHECK(a.transitions() == expected);
  CHECK(a.finals().empty());
}

TEST_CASE("split") {
  CHECK(split_word(std::vector{sync("p", "q", "m")}) == Trace{send("p", "q", "m"), recv("q", "p", "m")});
  CHECK(split_word(std::vector<SyncEvent>{}).empty());
  CHECK(split_word(std::vector{sync("p", "q", "o"), sync("q", "r", "o")}) ==
        Trace{send("p", "q", "o"), recv("q", "p", "o"), send("q", "r", "o"), recv("r", "q", "o")});
}

TEST_CASE("trace tokens") {
  Trace w{send("p", "q", "o"), recv("q", "p", "o"), send("r", "q", "m")};
  CHECK(format_trace(w) == "p>q!o.q<p?o.r>q!m");
  CHECK(parse_trace("p>q!o.q<p?o.r>q!m") == w);
  CHECK(parse_trace("").empty());
  CHECK_THROWS_AS(parse_trace("p>q"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace("pq!m"), std::invalid_argument);
  CHECK(send("p", "q", "m") < recv("p", "q", "m"));
}

TEST_CASE("erasure") {
  GlobalType g = corpus("gs");
  SyncAutomaton a = build_gaut(g);
  LocalNfa r = erase(a, Role("r"));
  for (const auto& t : r.out(g.root())) CHECK_FALSE(t.label.has_value());
  LocalNfa p = erase(a, Role("p"));
  std::vector<AsyncEvent> labels;
  for (const auto& t : p.out(g.root())) labels.push_back(*t.label);
  CHECK(labels == std::vector{send("p", "q", "m"), send("p", "q", "o")});
  CHECK(r.states() == a.states());
  CHECK(r.finals() == a.finals());
  CHECK(r.initial() == a.initial());

  GlobalType end = parse_global_type("0");
  LocalNfa e = erase(build_gaut(end), Role("p"));
  CHECK(e.states().size() == 1);
  CHECK(e.transitions().empty());
}

TEST_CASE("structural invariants and replay on random types") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    GlobalType g = testing::random_global_type(rng);
    SyncAutomaton a = build_gaut(g);
    for (NodeId id : a.states()) {
      const Node& n = g.node(id);
      auto out = a.out(id);
      switch (n.kind) {
        case NodeKind::End:
          CHECK(out.empty());
          break;
        case NodeKind::Choice:
          CHECK(out.size() == n.branches.size());
          for (const auto& t : out) CHECK(t.label.has_value());
          break;
        default:
          REQUIRE(out.size() == 1);
          CHECK_FALSE(out[0].label.has_value());
      }
    }

    // Walk a random run and follow the same states in each erasure.
    std::vector<SyncTransition> run;
    NodeId cur = a.initial();
    for (int step = 0; step < 12 && !a.out(cur).empty(); ++step) {
      auto out = a.out(cur);
      run.push_back(out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)]);
      cur = run.back().target;
    }
    std::vector<SyncEvent> word;
    for (const auto& t : run) {
      if (t.label) word.push_back(*t.label);
    }
    Trace split_trace = split_word(word);
    for (const Role& p : g.roles()) {
      LocalNfa nfa = erase(a, p);
      Trace along;
      for (const auto& t : run) {
        auto out = nfa.out(t.source);
        auto it = std::find_if(out.begin(), out.end(), [&](const LocalTransition& e) {
          return e.target == t.target && e.label == (t.label ? erase_label(*t.label, p) : std::nullopt);
        });
        REQUIRE(it != out.end());
        if (it->label) along.push_back(*it->label);
      }
      CHECK(along == project(split_trace, p));

      // Messages p sends to each peer, in order.
      for (const Role& q : g.roles()) {
        std::vector<Message> sent;
        for (const auto& e : word) {
          if (e.sender == p && e.receiver == q) sent.push_back(e.message);
        }
        std::vector<Message> projected;
        for (const auto& e : split_trace) {
          if (e.is_send() && e.active == p && e.peer == q) projected.push_back(e.message);
        }
        CHECK(sent == projected);
      }
    }
  }
}

TEST_CASE("DOT export") {
  GlobalType g = parse_global_type("mu t . p->q:o . + { p->q:a . t, p->q:b . 0 }");
  std::string dot = to_dot(build_gaut(g), g);
  CHECK(dot.find("doublecircle") != std::string::npos);
  CHECK(dot.find("ε") != std::string::npos);
  CHECK(dot.find("init [shape=point]") != std::string::npos);
  CHECK(to_dot(erase(build_gaut(g), Role("q")), g).find("q<p?o") != std::string::npos);
}
