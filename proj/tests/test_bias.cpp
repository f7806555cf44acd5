#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "foldasp/bias.hpp"
#include "foldasp/parser.hpp"
#include "foldasp/task_io.hpp"

using namespace foldasp;

namespace {

LanguageBias bias_of(const std::string& modes) {
  return parse_task("#background\n#end\n" + modes).bias;
}

std::vector<std::string> texts(const std::vector<Refinement>& rs) {
  std::vector<std::string> out;
  for (const Refinement& r : rs) {
    std::string s;
    for (const Literal& l : r) s += (s.empty() ? "" : ", ") + l.to_string();
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("variable names") {
  CHECK(variable_name(0) == "X");
  CHECK(variable_name(3) == "W");
  CHECK(variable_name(4) == "V5");
  CHECK(variable_name(7) == "V8");
}

TEST_CASE("head atom from a mode") {
  LanguageBias b = bias_of("#modeh q(+row,+col).\n");
  CHECK(head_atom(b.head_modes[0]).to_string() == "q(X,Y)");
}

TEST_CASE("candidates follow mode order and skip the head itself") {
  LanguageBias b = bias_of("#modeh fly(+animal).\n#modeb bird(+animal).\n#modeb penguin(+animal).\n");
  Clause c(parse_atom("fly(X)"), {});
  CHECK(texts(candidate_literals(c, b, {})) == std::vector<std::string>{"bird(X)", "penguin(X)"});

  CandidateOptions naf;
  naf.naf = true;
  CHECK(texts(candidate_literals(c, b, {}, naf)) ==
        std::vector<std::string>{"not bird(X)", "not penguin(X)", "bird(X)", "penguin(X)"});

  Clause with_bird = refine(c, parse_literal("bird(X)"));
  CHECK(texts(candidate_literals(with_bird, b, {})) == std::vector<std::string>{"penguin(X)"});
}

TEST_CASE("output markers introduce fresh variables and types gate inputs") {
  LanguageBias b = bias_of("#modeh q(+row,+col).\n#modeb attack(+row,+col,-row,-col).\n#modeb on(+row).\n");
  Clause c(parse_atom("q(X,Y)"), {});
  auto cs = texts(candidate_literals(c, b, {}));
  CHECK(std::find(cs.begin(), cs.end(), "attack(X,Y,Z,W)") != cs.end());
  CHECK(std::find(cs.begin(), cs.end(), "on(X)") != cs.end());
  CHECK(std::find(cs.begin(), cs.end(), "on(Y)") == cs.end());
}

TEST_CASE("constant markers draw from the domain") {
  LanguageBias b = bias_of("#domain colour = {red,green}.\n#modeh c(+node).\n#modeb col(+node,#colour).\n");
  Clause c(parse_atom("c(X)"), {});
  CHECK(texts(candidate_literals(c, b, {})) == std::vector<std::string>{"col(X,red)", "col(X,green)"});
}

TEST_CASE("numeric thresholds come from the facts") {
  LanguageBias b = bias_of("#modeh good(+row).\n#modeb temp(+row,-num).\n#numeric temp/2.\n");
  Program facts = parse_program("temp(r1,375). temp(r2,401). temp(r3,375).");
  NumericPools pools = numeric_pools(facts, b);
  REQUIRE(pools.size() == 1);
  CHECK(pools.begin()->second == std::vector<std::int64_t>{375, 401});
  Clause c(parse_atom("good(X)"), {});
  CHECK(texts(candidate_literals(c, b, pools)) ==
        std::vector<std::string>{"temp(X,Y)", "temp(X,Y), Y > 375", "temp(X,Y), Y <= 375", "temp(X,Y), Y > 401",
                                 "temp(X,Y), Y <= 401"});
}

TEST_CASE("lookahead pairs consume the fresh variable") {
  LanguageBias b = bias_of("#modeh p(+a).\n#modeb e(+a,-a).\n#modeb r(+a).\n");
  CandidateOptions o;
  o.lookahead = true;
  auto cs = texts(candidate_literals(Clause(parse_atom("p(X)"), {}), b, {}, o));
  CHECK(std::find(cs.begin(), cs.end(), "e(X,Y), r(Y)") != cs.end());
  CHECK(std::find(cs.begin(), cs.end(), "e(X,Y), r(X)") == cs.end());
}

TEST_CASE("banned predicates and extras") {
  LanguageBias b = bias_of("#modeh fly(+animal).\n#modeb bird(+animal).\n#modeb cat(+animal).\n");
  b.banned.push_back({Symbol::intern("cat"), 1, false});
  b.extra_candidates.push_back(parse_literal("not cat(X)"));
  b.extra_candidates.push_back(parse_literal("not bird(X)"));
  Clause c(parse_atom("fly(X)"), {});
  CHECK(texts(candidate_literals(c, b, {})) == std::vector<std::string>{"bird(X)", "not bird(X)"});
  CandidateOptions o;
  o.extras = false;
  CHECK(texts(candidate_literals(c, b, {}, o)) == std::vector<std::string>{"bird(X)"});
}

TEST_CASE("refine rejects duplicates") {
  Clause c = parse_clause("fly(X) :- bird(X).");
  CHECK_THROWS_AS(refine(c, parse_literal("bird(X)")), std::invalid_argument);
  CHECK(refine(c, parse_literal("not penguin(X)")).to_string() == "fly(X) :- bird(X), not penguin(X).");
}

TEST_CASE("safety repair adds type literals") {
  LanguageBias b = bias_of("#modeh fly(+animal).\n#modeb penguin(+animal).\n");
  Clause c = parse_clause("fly(X) :- not penguin(X).");
  Clause safe = ensure_safety(c, b);
  CHECK(safe.to_string() == "fly(X) :- animal(X), not penguin(X).");
  CHECK(safe.is_safe());
  CHECK(strip_type_literals(safe, b) == c);
  CHECK(ensure_safety(parse_clause("fly(X) :- penguin(X)."), b).to_string() == "fly(X) :- penguin(X).");
  CHECK_THROWS_AS(ensure_safety(parse_clause("fly(X) :- not other(X, Y), penguin(X)."), b), UntypeableVariable);
}

TEST_CASE("property: every candidate keeps the clause within the bias") {
  LanguageBias b = bias_of("#modeh q(+row,+col).\n#modeb attack(+row,+col,-row,-col).\n#modeb row(+row).\n"
                           "#modeb col(+col).\n");
  std::vector<Clause> frontier{Clause(parse_atom("q(X,Y)"), {})};
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<Clause> next;
    for (const Clause& c : frontier) {
      for (const Refinement& r : candidate_literals(c, b, {})) {
        Clause d = refine(c, r);
        CHECK(d.body().size() == c.body().size() + r.size());
        CHECK(ensure_safety(d, b).is_safe());
        // No duplicate literal ever survives.
        for (std::size_t i = 0; i < d.body().size(); ++i)
          for (std::size_t j = i + 1; j < d.body().size(); ++j) CHECK_FALSE(d.body()[i] == d.body()[j]);
        if (next.size() < 40) next.push_back(d);
      }
    }
    frontier = std::move(next);
  }
}
