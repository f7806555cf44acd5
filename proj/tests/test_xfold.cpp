#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "foldasp/parser.hpp"
#include "foldasp/task_io.hpp"
#include "foldasp/xfold.hpp"
#include "oracle.hpp"

using namespace foldasp;

namespace {

XFoldTask task_file(const std::string& name) {
  return xfold_task(load_task(std::string(FOLDASP_DATA_DIR) + "/" + name));
}

Signature sig(const std::string& text) {
  Atom a = parse_atom(text);
  return Signature::of(a);
}

std::vector<Clause> stripped(const std::vector<Clause>& cs, const LanguageBias& b) {
  std::vector<Clause> out;
  for (const Clause& c : cs) out.push_back(strip_type_literals(c, b));
  return out;
}

bool same(const std::vector<Clause>& got, const std::string& expected) {
  Program p;
  for (const Clause& c : got) p.add(c);
  return equivalent_programs(p, parse_program(expected));
}

bool same(const Program& got, const std::string& expected, const LanguageBias& b) {
  return same(stripped(got.clauses(), b), expected);
}

PartialInterpretation example(const XFoldTask& t, const std::string& id) {
  for (const auto* list : {&t.pos, &t.neg})
    for (const auto& e : *list)
      if (e.id == id) return e;
  FAIL("no example " << id);
  return {};
}

bool has_entry(const std::vector<ExampleEntry>& es, const std::string& atom, bool naf = false) {
  return std::find(es.begin(), es.end(), ExampleEntry{parse_atom(atom), naf}) != es.end();
}

XFoldTask coloring_subset() {
  XFoldTask t = task_file("coloring.task");
  t.pos.resize(2);
  t.neg.resize(2);
  return t;
}

// Confusion counts of `feature(N)` against the labels of the red entries,
// read straight off the example sets.
oracle::Counts colour_counts(const XFoldTask& t, const std::string& feature) {
  oracle::Counts c;
  auto visit = [&](const PartialInterpretation& e) {
    auto holds = [&](const Atom& a) {
      Atom f = parse_atom(feature + "(" + a.args()[0].to_string() + ")");
      return has_entry(e.inc, f.to_string());
    };
    for (const auto& x : e.inc)
      if (std::string(x.atom.predicate().name()) == "red") (holds(x.atom) ? c.tp : c.fn) += 1;
    for (const auto& x : e.exc) {
      if (std::string(x.atom.predicate().name()) != "red") continue;
      if (x.naf) {
        (holds(x.atom) ? c.tp : c.fn) += 1;
      } else {
        (holds(x.atom) ? c.fp : c.tn) += 1;
      }
    }
  };
  for (const auto& e : t.pos) visit(e);
  for (const auto& e : t.neg) visit(e);
  return c;
}

std::set<std::vector<Atom>> projected_models(const Program& p, const std::vector<std::string>& preds) {
  std::set<std::vector<Atom>> out;
  for (const AnswerSet& m : answer_sets(p, 1000)) {
    std::vector<Atom> v;
    for (const Atom& a : m.atoms)
      if (!a.strongly_negated() &&
          std::find(preds.begin(), preds.end(), std::string(a.predicate().name())) != preds.end())
        v.push_back(a);
    out.insert(v);
  }
  return out;
}

}  // namespace

TEST_CASE("mcc against the direct formula") {
  CHECK(mcc({5, 5, 0, 0}) == doctest::Approx(1.0));
  CHECK(mcc({0, 0, 5, 5}) == doctest::Approx(-1.0));
  CHECK(mcc({3, 0, 0, 0}) == 0.0);
  CHECK(mcc({0, 2, 3, 7}) == doctest::Approx(oracle::mcc(0, 2, 3, 7)));
}

TEST_CASE("property: mcc stays in range and flips with the prediction") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> d(0, 20);
  for (int i = 0; i < 500; ++i) {
    ConfusionMatrix m{d(rng), d(rng), d(rng), d(rng)};
    const double v = mcc(m);
    CHECK(v >= -1.0 - 1e-12);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v == doctest::Approx(oracle::mcc(m.tp, m.tn, m.fp, m.fn)));
    ConfusionMatrix flipped{m.fn, m.fp, m.tn, m.tp};
    CHECK(mcc(flipped) == doctest::Approx(-v));
  }
}

TEST_CASE("feature confusion on the colouring examples") {
  XFoldTask t = coloring_subset();
  for (const std::string f : {"green", "blue"}) {
    ConfusionMatrix m = feature_confusion(t, sig("red(X)"), parse_literal(f + "(X)"));
    oracle::Counts want = colour_counts(t, f);
    CHECK(m.tp == want.tp);
    CHECK(m.tn == want.tn);
    CHECK(m.fp == want.fp);
    CHECK(m.fn == want.fn);
  }
  CHECK(mcc(feature_confusion(t, sig("red(X)"), parse_literal("green(X)"))) ==
        doctest::Approx(-0.529).epsilon(0.001));
  CHECK(mcc(feature_confusion(t, sig("red(X)"), parse_literal("blue(X)"))) == doctest::Approx(-0.683).epsilon(0.001));
}

TEST_CASE("feature selection appends negated features within the threshold") {
  XFoldTask t = coloring_subset();
  LanguageBias b = mcc_feature_selection(t, sig("red(X)"), 0.5);
  auto has = [&](const LanguageBias& x, const std::string& lit) {
    return std::find(x.extra_candidates.begin(), x.extra_candidates.end(), parse_literal(lit)) !=
           x.extra_candidates.end();
  };
  CHECK(has(b, "not green(X)"));
  CHECK(has(b, "not blue(X)"));
  LanguageBias strict = mcc_feature_selection(t, sig("red(X)"), 0.6);
  CHECK_FALSE(has(strict, "not green(X)"));
  CHECK(has(strict, "not blue(X)"));
}

TEST_CASE("partial score of a first party hypothesis") {
  XFoldTask t = task_file("party.task");
  std::vector<Clause> h{parse_clause("goesToParty(X) :- off(X).")};
  GainStats s = partial_score(h, example(t, "e1"), t, sig("goesToParty(X)"));
  CHECK(s.p0 == 2);
  CHECK(s.n0 == 3);
  CHECK(s.p1 == 2);
  CHECK(s.n1 == 1);
  GainStats e4 = partial_score(h, example(t, "e4"), t, sig("goesToParty(X)"));
  CHECK(e4.p1 == 2);
  CHECK(e4.n1 == 0);
  GainStats none = partial_score({}, example(t, "e1"), t, sig("goesToParty(X)"));
  CHECK(none.p1 == 0);
  CHECK(std::isinf(overall_score({}, t, sig("goesToParty(X)"))));
}

TEST_CASE("swapping examples negates the target") {
  XFoldTask t = task_file("party.task");
  XFoldTask s = swap_examples(t, sig("goesToParty(X)"));
  REQUIRE(s.targets.size() == 1);
  CHECK(s.targets[0] == sig("-goesToParty(X)"));
  PartialInterpretation e1 = example(s, "e1");
  for (const std::string a : {"goesToParty(p1)", "goesToParty(p2)", "-goesToParty(p3)", "-goesToParty(p4)",
                              "-goesToParty(p5)", "off(p1)", "works(p5)"})
    CHECK(has_entry(e1.inc, a));
  CHECK(has_entry(e1.exc, "-goesToParty(p1)"));
  CHECK(has_entry(e1.exc, "-goesToParty(p2)"));
  CHECK_FALSE(has_entry(e1.exc, "goesToParty(p3)"));
  XFoldTask back = swap_examples(s, sig("-goesToParty(X)"));
  CHECK(back.targets[0] == sig("goesToParty(X)"));
  // A second swap restores the original exclusions.
  CHECK(example(back, "e1").exc == example(t, "e1").exc);
}

TEST_CASE("contrapositive of generate rules") {
  CHECK(same(contrapositive(parse_clause("red(X) :- not green(X), not blue(X).")),
             "-red(X) :- green(X). -red(X) :- blue(X)."));
  CHECK(same(contrapositive(parse_clause("q(X,Y) :- not -q(X,Y).")), "-q(X,Y) :- -q(X,Y)."));
  CHECK_THROWS_AS(contrapositive(parse_clause("p(X) :- r(X), not s(X).")), NotApplicable);
  CHECK_THROWS_AS(contrapositive(parse_clause("p(a).")), NotApplicable);
  CHECK_THROWS_AS(contrapositive(parse_clause(":- not s(a).")), NotApplicable);
}

TEST_CASE("augmenting positives with negative examples") {
  XFoldTask t = task_file("coloring.task");
  t.neg.push_back({"plain", {{parse_atom("red(1)"), false}}, {{parse_atom("blue(4)"), false}}});
  XFoldTask a = augment_with_negatives(t);
  PartialInterpretation e1 = example(a, "e1");
  CHECK(has_entry(e1.inc, "-red(2)"));
  CHECK(has_entry(e1.inc, "-red(3)"));
  CHECK(has_entry(e1.exc, "-blue(4)"));
  CHECK_FALSE(has_entry(e1.inc, "-green(2)"));
  PartialInterpretation e2 = example(a, "e2");
  CHECK(e2.inc.size() == example(t, "e2").inc.size() + 2);
}

TEST_CASE("party") {
  XFoldTask t = task_file("party.task");
  XFoldResult r = xfold_run(t);
  CHECK(same(r.program,
             "goesToParty(X) :- off(X), not -goesToParty(X). -goesToParty(X) :- conflict(X,Y), goesToParty(Y).",
             t.bias));
  CHECK(r.constraints.empty());
  CHECK(r.verification.ok);
  CHECK_NOTHROW(xfold(t));
}

TEST_CASE("graph colouring") {
  XFoldTask t = task_file("coloring.task");
  XFoldResult r = xfold_run(t);
  CHECK(same(stripped(r.generate, t.bias),
             "red(X) :- not green(X), not blue(X). green(X) :- not blue(X), not red(X)."
             "blue(X) :- not green(X), not red(X)."));
  CHECK(same(r.constraints,
             ":- red(X), edge(X,Y), red(Y). :- green(X), edge(X,Y), green(Y). :- blue(X), edge(X,Y), blue(Y)."));
  CHECK(r.verification.ok);

  Program full = t.background;
  full.append(r.program);
  auto models = projected_models(full, {"red", "green", "blue"});
  const char* names[] = {"red", "green", "blue"};
  std::set<std::vector<Atom>> expected;
  for (const auto& c : oracle::colourings(4, {{0, 3}, {0, 2}, {1, 0}, {2, 1}, {3, 2}})) {
    std::vector<Atom> v;
    for (int n = 0; n < 4; ++n) v.push_back(parse_atom(std::string(names[c[n]]) + "(" + std::to_string(n + 1) + ")"));
    std::sort(v.begin(), v.end());
    expected.insert(v);
  }
  CHECK(models == expected);
}

TEST_CASE("four queens") {
  XFoldTask t = task_file("queens4.task");
  XFoldResult r = xfold_run(t);
  CHECK(same(stripped(r.generate, t.bias), "q(X,Y) :- not -q(X,Y). -q(X,Y) :- not q(X,Y)."));
  CHECK(same(r.constraints,
             ":- q(X,Y), attack_r(X,Y,Z,W). :- q(X,Y), attack_c(X,Y,Z,W). :- q(X,Y), attack_d(X,Y,Z,W)."));
  CHECK(r.verification.ok);

  Program full = t.background;
  full.append(r.program);
  std::set<std::vector<Atom>> expected;
  for (const auto& s : oracle::queens(4)) {
    std::vector<Atom> v;
    for (auto [row, col] : s) v.push_back(parse_atom("q(" + std::to_string(row) + "," + std::to_string(col) + ")"));
    std::sort(v.begin(), v.end());
    expected.insert(v);
  }
  CHECK(projected_models(full, {"q"}) == expected);
}

TEST_CASE("shifted constraints reject every unit they were learned from") {
  for (const std::string name : {"coloring.task", "queens4.task"}) {
    XFoldTask t = task_file(name);
    XFoldResult r = xfold_run(t);
    for (const Clause& c : r.constraints) {
      REQUIRE(c.is_constraint());
      // The first literal is the shifted target atom.
      CHECK(c.body().front().is_positive_atom());
      Program with = t.background;
      for (const Clause& g : r.generate) with.add(g);
      with.add(c);
      for (const auto& e : t.pos) CHECK(exists_extending(with, e));
    }
    for (const auto& e : t.neg) {
      Program full = t.background;
      full.append(r.program);
      CHECK_FALSE(exists_extending(full, e));
    }
  }
}

TEST_CASE("property: any subset of party examples is learned and extended") {
  XFoldTask all = task_file("party.task");
  for (unsigned mask = 1; mask < 16; ++mask) {
    XFoldTask t = all;
    t.pos.clear();
    for (unsigned i = 0; i < 4; ++i)
      if (mask & (1u << i)) t.pos.push_back(all.pos[i]);
    XFoldResult r = xfold_run(t);
    INFO("mask " << mask);
    CHECK(r.verification.ok);
    // Retired examples keep constraining later clauses: the full
    // hypothesis still extends each one.
    Program full = t.background;
    full.append(r.program);
    for (const auto& e : t.pos) CHECK(exists_extending(full, e));
  }
}

TEST_CASE("failed solution check names the example") {
  XFoldTask t = task_file("coloring.task");
  t.neg.push_back({"contradiction", {{parse_atom("red(1)"), false}}, {}});
  XFoldResult r = xfold_run(t);
  CHECK_FALSE(r.verification.ok);
  try {
    xfold(t);
    FAIL("expected a solution check error");
  } catch (const SolutionCheckError& e) {
    CHECK(e.example() == "contradiction");
  }
}

TEST_CASE("verification reports each failing example") {
  XFoldTask t = task_file("coloring.task");
  Verification v = verify_solution(t.background, parse_program("red(X) :- node(X)."), t.pos, t.neg);
  CHECK_FALSE(v.ok);
  CHECK(v.failures.size() == 6);
}

TEST_CASE("shifting a learned rule into a constraint keeps the answer sets") {
  XFoldTask t = task_file("coloring.task");
  Program generate = t.background;
  generate.append(parse_program("red(X) :- node(X), not green(X), not blue(X)."
                                "green(X) :- node(X), not blue(X), not red(X)."
                                "blue(X) :- node(X), not green(X), not red(X)."));
  Program shifted = generate;
  shifted.add(parse_clause(":- red(X), edge(X,Y), red(Y)."));
  Program rule = generate;
  rule.append(parse_program("-red(X) :- edge(X,Y), red(Y). :- red(X), -red(X)."));
  auto plain = [](const Program& p) {
    std::set<std::set<Atom>> out;
    for (const AnswerSet& m : answer_sets(p, 1000)) {
      std::set<Atom> s;
      for (const Atom& a : m.atoms)
        if (!a.strongly_negated()) s.insert(a);
      out.insert(s);
    }
    return out;
  };
  CHECK(plain(shifted) == plain(rule));
  CHECK(plain(shifted).size() < plain(generate).size());
}
