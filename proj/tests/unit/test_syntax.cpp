#include <doctest.h>

#include <random>

#include "mstproj/syntax.hpp"
#include "test_support.hpp"

using namespace mstproj;
using mstproj::testing::corpus;

namespace {

std::vector<WellFormednessRule> rules_of(std::string_view text) {
  std::vector<WellFormednessRule> out;
  for (const auto& v : validate_well_formedness(parse_global_type(text)).violations) out.push_back(v.rule);
  return out;
}

}  // namespace

TEST_CASE("parse terminal and prefixes") {
  GlobalType end = parse_global_type("0");
  CHECK(end.node(end.root()).kind == NodeKind::End);
  CHECK(end.subterms().size() == 1);

  GlobalType gs = parse_global_type("+ { p->q:o . r->q:o . 0, p->q:m . r->q:m . 0 }");
  const Node& root = gs.node(gs.root());
  REQUIRE(root.kind == NodeKind::Choice);
  CHECK(root.sender == Role("p"));
  REQUIRE(root.branches.size() == 2);
  CHECK(root.branches[0].message == Message("o"));
  CHECK(root.branches[1].message == Message("m"));
  CHECK(render_subterm(gs, root.branches[0].next) == "r->q:o . 0");

  GlobalType loop = parse_global_type("mu t . p->q:o . t");
  const Node& rec = loop.node(loop.root());
  REQUIRE(rec.kind == NodeKind::Rec);
  CHECK(rec.var == RecVar("t"));
  const Node& body = loop.node(rec.body);
  REQUIRE(body.kind == NodeKind::Choice);
  CHECK(loop.node(body.branches[0].next).kind == NodeKind::Var);
}

TEST_CASE("whitespace and comments are insignificant") {
  GlobalType a = parse_global_type("p->q:m.0");
  GlobalType b = parse_global_type("// header\n  p -> q : m // trailing\n .\n 0\n");
  CHECK(structurally_equal(a, a.root(), b, b.root()));
}

TEST_CASE("syntax errors carry positions") {
  auto error_at = [](std::string_view text) -> std::pair<int, int> {
    try {
      parse_global_type(text);
    } catch (const SyntaxError& e) {
      return {e.line(), e.column()};
    }
    FAIL("expected a syntax error for " << text);
    return {0, 0};
  };
  CHECK(error_at("p->q:o") == std::pair{1, 7});
  CHECK(error_at("p->q:o .\n  + { }") == std::pair{2, 7});
  CHECK(error_at("+ { p->q:o . 0, q->p:m . 0 }") == std::pair{1, 17});
  CHECK(error_at("0 0") == std::pair{1, 3});
  CHECK(error_at("p->q:o . 12") == std::pair{1, 10});
  CHECK(error_at("p->q:o . $") == std::pair{1, 10});
  CHECK(error_at("mu mu . 0") == std::pair{1, 4});
  CHECK(error_at("") == std::pair{1, 1});
}

TEST_CASE("interning shares equal subterms") {
  GlobalType g = parse_global_type("+ { p->q:o . r->q:b . 0, p->q:m . r->q:b . 0 }");
  const Node& root = g.node(g.root());
  CHECK(root.branches[0].next == root.branches[1].next);
  CHECK(g.subterms().size() == 3);
}

TEST_CASE("well-formedness rules") {
  CHECK(rules_of("mu t . t") == std::vector{WellFormednessRule::Unguarded});
  CHECK(rules_of("+ { p->q:o.0, p->q:o.0 }") == std::vector{WellFormednessRule::BranchDistinctness});
  CHECK(rules_of("p->p:m . 0") == std::vector{WellFormednessRule::SelfCommunication});
  CHECK(rules_of("p->q:m . t") == std::vector{WellFormednessRule::UnboundVariable});
  CHECK(rules_of("mu t . mu s . t") == std::vector{WellFormednessRule::Unguarded});
  CHECK(rules_of("mu t . p->q:a . mu t . q->p:b . t") == std::vector{WellFormednessRule::UnboundVariable});
  CHECK(rules_of("+ { p->q:a . mu t . p->q:a . t, p->r:b . mu t . p->r:b . t }") ==
        std::vector{WellFormednessRule::UnboundVariable});
  CHECK(rules_of("mu t . p->q:a . 0").empty());
  CHECK(rules_of("+ { p->q:o . 0, p->q:m . 0 }").empty());
  CHECK(validate_well_formedness(corpus("odd_even")).ok());

  auto report = validate_well_formedness(parse_global_type("mu t . t"));
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].location == parse_global_type("mu t . t").root());
  CHECK_THROWS_AS(require_well_formed(parse_global_type("mu t . t")), WellFormednessError);
}

TEST_CASE("measure_size") {
  CHECK(measure_size(corpus("gr")) == 12);
  CHECK(measure_size(corpus("gr_prime")) == 16);
  CHECK(measure_size(corpus("gs")) == 8);
  // Shared continuation r->q:b . 0 is counted once.
  CHECK(measure_size(corpus("gs_prime")) == 6);
  CHECK(measure_size(parse_global_type("0")) == 1);
  CHECK(measure_size(parse_global_type("mu t . p->q:o . t")) == 6);
}

TEST_CASE("pretty printing is canonical") {
  GlobalType gs = corpus("gs");
  CHECK(pretty_print(gs) ==
        "+ {\n"
        "  p->q:o . r->q:o . 0,\n"
        "  p->q:m . r->q:m . 0\n"
        "}\n");
  CHECK(render_subterm(gs, gs.root()) == "+ { p->q:o . r->q:o . 0, p->q:m . r->q:m . 0 }");
}

TEST_CASE("roles and messages in first-occurrence order") {
  GlobalType g = corpus("two_buyer");
  std::vector<std::string> roles;
  for (const auto& r : g.roles()) roles.push_back(r.value);
  CHECK(roles == std::vector<std::string>{"b1", "s", "b2"});
  CHECK(g.messages().front() == Message("title"));
}

TEST_CASE("round trip, interning and renaming on random types") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    GlobalType g = testing::random_global_type(rng);
    GlobalType back = parse_global_type(pretty_print(g));
    REQUIRE(structurally_equal(g, g.root(), back, back.root()));
    CHECK(validate_well_formedness(back).ok());

    auto ids = g.subterms();
    for (NodeId a : ids) {
      for (NodeId b : ids) CHECK((a == b) == structurally_equal(g, a, g, b));
    }

    GlobalType renamed = rename(
        g, [](const Role& r) { return Role("role_" + r.value); },
        [](const Message& m) { return Message(m.value + "_x"); },
        [](const RecVar& v) { return RecVar("v" + v.value); });
    CHECK(measure_size(renamed) == measure_size(g));
    CHECK(validate_well_formedness(renamed).ok());
  }
}
