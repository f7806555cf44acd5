#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "foldasp/eval.hpp"
#include "foldasp/parser.hpp"

using namespace foldasp;

namespace {

const std::string kSchema =
    R"({"columns": {"a": "categorical", "t": "numeric", "label": "label"}, "target": "good"})";

std::string data_path(const std::string& name) { return std::string(FOLDASP_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("property: stratified folds partition each class evenly") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(0, 40);
  for (int i = 0; i < 200; ++i) {
    std::size_t p = size(rng), n = size(rng);
    if (p + n < 2) continue;
    std::size_t k = 2 + rng() % std::min<std::size_t>(9, p + n - 1);
    auto f = stratified_folds(p, n, k, rng());
    REQUIRE(f.size() == p + n);
    std::vector<std::size_t> pos(k), neg(k), all(k);
    for (std::size_t j = 0; j < f.size(); ++j) {
      REQUIRE(f[j] < k);
      (j < p ? pos : neg)[f[j]]++;
      all[f[j]]++;
    }
    for (const auto* v : {&pos, &neg, &all}) {
      auto [lo, hi] = std::minmax_element(v->begin(), v->end());
      CHECK(*hi - *lo <= 1);
    }
  }
}

TEST_CASE("fold assignment depends only on the seed") {
  CHECK(stratified_folds(13, 21, 10, 9) == stratified_folds(13, 21, 10, 9));
  CHECK(stratified_folds(13, 21, 10, 9) != stratified_folds(13, 21, 10, 10));
  CHECK_THROWS_AS(stratified_folds(3, 3, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(stratified_folds(3, 3, 7, 1), std::invalid_argument);
}

TEST_CASE("prediction reads the unique answer set") {
  Program facts = parse_program("bird(a). bird(b). penguin(b).");
  Program h = parse_program("fly(X) :- bird(X), not penguin(X).");
  CHECK(predict(facts, h, {parse_atom("fly(a)"), parse_atom("fly(b)")}) == std::vector<bool>{true, false});
  CHECK_THROWS_AS(predict(parse_program("p :- not q. q :- not p."), {}, {}), LearnerError);
}

TEST_CASE("acute-shaped data is classified perfectly") {
  for (const std::string schema : {"acute1.json", "acute2.json"}) {
    TabularData d = load_tabular(data_path("acute.csv"), data_path(schema));
    REQUIRE(d.rows == 34);
    EvalReport r = cross_validate(d);
    INFO(schema << "\n" << r.to_string());
    CHECK(r.fold_accuracy.size() == 10);
    CHECK(r.mean_accuracy == 1.0);
    for (double a : r.fold_accuracy) CHECK((a >= 0.0 && a <= 1.0));
  }
}

TEST_CASE("reports are reproducible") {
  TabularData d = load_tabular(data_path("acute.csv"), data_path("acute2.json"));
  EvalOptions o;
  o.seed = 77;
  o.folds = 5;
  CHECK(cross_validate(d, o).to_string() == cross_validate(d, o).to_string());
}

TEST_CASE("a constant label gives the trivial hypothesis") {
  TabularData no = load_tabular_text("a,t,label\nx,1,no\ny,2,no\nx,3,no\ny,4,no\n", kSchema);
  EvalOptions o;
  o.folds = 2;
  EvalReport r = cross_validate(no, o);
  CHECK(r.mean_accuracy == 1.0);
  CHECK(r.rule_count == std::vector<std::size_t>{0, 0});
  CHECK_FALSE(r.warnings.empty());

  TabularData yes = load_tabular_text("a,t,label\nx,1,yes\ny,2,yes\nx,3,yes\ny,4,yes\n", kSchema);
  CHECK(cross_validate(yes, o).mean_accuracy == 1.0);
}
