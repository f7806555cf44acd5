#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "foldasp/error.hpp"
#include "foldasp/parser.hpp"

using namespace foldasp;

TEST_CASE("parse a default rule") {
  Program p = parse_program("fly(X) :- bird(X), not ab0(X).");
  REQUIRE(p.size() == 1);
  const Clause& c = p.clauses()[0];
  CHECK(c.head()->to_string() == "fly(X)");
  REQUIRE(c.body().size() == 2);
  CHECK(c.body()[0].to_string() == "bird(X)");
  CHECK(c.body()[1].naf());
  CHECK(c.body()[1].atom().to_string() == "ab0(X)");
}

TEST_CASE("empty input is the empty program") {
  CHECK(parse_program("").empty());
  CHECK(parse_program("  % only a comment\n").empty());
  CHECK(print_program(Program{}).empty());
}

TEST_CASE("headless clause") {
  Program p = parse_program(":- red(X), edge(X,Y), red(Y).");
  REQUIRE(p.size() == 1);
  CHECK(p.clauses()[0].is_constraint());
  CHECK(p.clauses()[0].body().size() == 3);
  CHECK(print_program(p) == ":- red(X), edge(X,Y), red(Y).\n");
}

TEST_CASE("strong negation prints with a dash") {
  Clause c = parse_clause("-q(X,Y) :- not q(X,Y).");
  CHECK(c.head()->strongly_negated());
  CHECK(c.to_string() == "-q(X,Y) :- not q(X,Y).");
  Literal l = parse_literal("not -q(X,Y)");
  CHECK(l.naf());
  CHECK(l.atom().strongly_negated());
}

TEST_CASE("coloring theory round-trips verbatim") {
  const std::string text =
      "red(X) :- not green(X), not blue(X).\n"
      "green(X) :- not red(X), not blue(X).\n"
      "blue(X) :- not red(X), not green(X).\n"
      ":- red(X), edge(X,Y), red(Y).\n"
      ":- blue(X), edge(X,Y), blue(Y).\n"
      ":- green(X), edge(X,Y), green(Y).\n";
  CHECK(print_program(parse_program(text)) == text);
}

TEST_CASE("built-ins parse and print") {
  CHECK(parse_literal("member(X,[jet])").to_string() == "member(X,[jet])");
  CHECK(parse_literal("member(X,[a,b])").membership().list.size() == 2);
  CHECK(parse_literal("A > 2").to_string() == "A > 2");
  CHECK(parse_literal("X != Y").comparison().op == CompareOp::Ne);
  CHECK(parse_literal("R2 - R1 = C2 - C1").to_string() == "R2-R1 = C2-C1");
  CHECK(parse_literal("A <= -3").comparison().rhs.leaf().value() == -3);
  CHECK(parse_clause("p :- true.").body().empty());
}

TEST_CASE("syntax errors carry a location") {
  try {
    parse_program("p(a).\nq(X) :- p(X)\nr.");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
  }
  CHECK_THROWS_AS(parse_program("p(a"), ParseError);
  CHECK_THROWS_AS(parse_program("p(a) :- ."), ParseError);
  CHECK_THROWS_AS(parse_program("p(a) $ q."), ParseError);
}

TEST_CASE("arity mismatch is rejected") {
  CHECK_THROWS_AS(parse_program("p(a). p(a,b)."), ArityError);
  CHECK_NOTHROW(parse_program("p(a). -p(b)."));
}

TEST_CASE("substitution") {
  Clause c = parse_clause("fly(X) :- bird(X).");
  Substitution s{{Symbol::intern("X"), Term::constant("tweety")}};
  CHECK(apply_substitution(c, s).to_string() == "fly(tweety) :- bird(tweety).");
  CHECK(apply_substitution(c, {}) == c);
  Substitution id{{Symbol::intern("X"), Term::variable("X")}};
  CHECK(apply_substitution(c, id) == c);

  Clause q = parse_clause("q(R1,C1).");
  Substitution rc{{Symbol::intern("R1"), Term::number(2)}, {Symbol::intern("C1"), Term::number(1)}};
  CHECK(apply_substitution(q, rc).to_string() == "q(2,1).");
}

TEST_CASE("safety") {
  CHECK(parse_clause("p(X) :- q(X), not r(X).").is_safe());
  CHECK_FALSE(parse_clause("p(X) :- not r(X).").is_safe());
  CHECK(parse_clause("p(X) :- member(X,[a]).").is_safe());
  CHECK(parse_clause("p(Y) :- q(X), Y = X+1.").is_safe());
  CHECK_FALSE(parse_clause("p(Y) :- q(X), Y > X.").is_safe());
}

TEST_CASE("clause equivalence ignores renaming and body order") {
  CHECK(equivalent_clauses(parse_clause("p(X) :- q(X,Y), not r(Y)."), parse_clause("p(A) :- not r(B), q(A,B).")));
  CHECK_FALSE(equivalent_clauses(parse_clause("p(X) :- q(X,Y)."), parse_clause("p(X) :- q(Y,X).")));
  CHECK_FALSE(equivalent_clauses(parse_clause("p(X) :- q(X,Y)."), parse_clause("p(X) :- q(X,X).")));
  CHECK(equivalent_programs(parse_program("a. b :- a."), parse_program("b :- a. a.")));
}

namespace {

// Hand-rolled generator of random clauses over a small vocabulary.
Clause random_clause(std::mt19937_64& rng) {
  const char* preds[] = {"p", "q", "r"};
  const char* vars[] = {"X", "Y", "Z"};
  const char* consts[] = {"a", "b", "c"};
  std::uniform_int_distribution<int> three(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  auto term = [&] { return coin(rng) ? Term::variable(vars[three(rng)]) : Term::constant(consts[three(rng)]); };
  auto atom = [&](int i) { return Atom(preds[i], {term(), term()}, coin(rng) && coin(rng)); };
  std::vector<Literal> body;
  int n = three(rng) + 1;
  for (int i = 0; i < n; ++i) {
    if (three(rng) == 0) {
      body.emplace_back(Comparison{CompareOp::Ne, Expr(term()), Expr(term())});
    } else {
      body.emplace_back(atom(three(rng)), coin(rng) == 1);
    }
  }
  std::optional<Atom> head;
  if (three(rng) != 0) head = atom(0);
  return Clause(head, body);
}

}  // namespace

TEST_CASE("property: parse . print . parse is idempotent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Program p;
    for (int k = 0; k < 4; ++k) p.add(random_clause(rng));
    std::string once = print_program(p);
    Program back = parse_program(once);
    CHECK(back == p);
    CHECK(print_program(back) == once);
  }
}

TEST_CASE("property: substitution composition and groundness") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Clause c = random_clause(rng);
    Substitution s1{{Symbol::intern("X"), Term::variable("Y")}};
    Substitution s2{{Symbol::intern("Y"), Term::constant("a")}, {Symbol::intern("Z"), Term::number(3)}};
    Substitution composed{{Symbol::intern("X"), Term::constant("a")},
                          {Symbol::intern("Y"), Term::constant("a")},
                          {Symbol::intern("Z"), Term::number(3)}};
    CHECK(apply_substitution(apply_substitution(c, s1), s2) == apply_substitution(c, composed));
    CHECK(apply_substitution(c, composed).is_ground());
  }
}
