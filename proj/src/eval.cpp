#include "foldasp/eval.hpp"

#include <chrono>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "foldasp/error.hpp"

namespace foldasp {

std::vector<std::size_t> stratified_folds(std::size_t positives, std::size_t negatives, std::size_t k,
                                          std::uint64_t seed) {
  if (k < 2 || k > positives + negatives) {
    throw std::invalid_argument("fold count must be between 2 and the number of examples");
  }
  std::mt19937_64 rng(seed);
  auto shuffled = [&](std::size_t n, std::size_t offset) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), offset);
    for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
    return v;
  };
  std::vector<std::size_t> fold(positives + negatives);
  std::size_t next = 0;
  for (std::size_t i : shuffled(positives, 0)) fold[i] = next++ % k;
  for (std::size_t i : shuffled(negatives, positives)) fold[i] = next++ % k;
  return fold;
}

std::vector<bool> predict(const Program& facts, const Program& h, const std::vector<Atom>& examples) {
  Program p = facts;
  p.append(h);
  auto models = answer_sets(p, 2);
  if (models.size() != 1) {
    throw LearnerError("expected a unique answer set for prediction, found " + std::to_string(models.size()));
  }
  std::vector<bool> out;
  for (const Atom& a : examples) out.push_back(models.front().contains(a));
  return out;
}

namespace {

Program facts_about(const Program& facts, const std::set<Term>& rows) {
  Program out;
  for (const Clause& c : facts.clauses())
    if (c.head() && c.head()->arity() > 0 && rows.count(c.head()->args()[0])) out.add(c);
  return out;
}

}  // namespace

EvalReport cross_validate(const TabularData& data, const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Atom> all = data.pos;
  all.insert(all.end(), data.neg.begin(), data.neg.end());
  const auto assignment = stratified_folds(data.pos.size(), data.neg.size(), options.folds, options.seed);

  EvalReport r;
  r.seed = options.seed;
  for (std::size_t f = 0; f < options.folds; ++f) {
    std::vector<Atom> train_pos, train_neg, test;
    std::vector<bool> label;
    std::set<Term> train_rows, test_rows;
    for (std::size_t i = 0; i < all.size(); ++i) {
      const bool positive = i < data.pos.size();
      if (assignment[i] == f) {
        test.push_back(all[i]);
        label.push_back(positive);
        test_rows.insert(all[i].args()[0]);
      } else {
        (positive ? train_pos : train_neg).push_back(all[i]);
        train_rows.insert(all[i].args()[0]);
      }
    }
    const std::string name = "fold " + std::to_string(f + 1);
    if (train_pos.empty() || train_neg.empty()) r.warnings.push_back(name + ": training part has a single class");
    if (std::set<bool>(label.begin(), label.end()).size() < 2) {
      r.warnings.push_back(name + ": test part has a single class");
    }

    Program h;
    if (!train_pos.empty()) {
      Program learned =
          foldasp::fold(data.goal, facts_about(data.facts, train_rows), train_pos, train_neg, data.bias, options.fold)
              .program();
      for (const Clause& c : learned.clauses()) h.add(ensure_safety(c, data.bias));
    }
    r.rule_count.push_back(h.size());
    auto predicted = predict(facts_about(data.facts, test_rows), h, test);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i) correct += predicted[i] == label[i];
    r.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }
  r.mean_accuracy =
      std::accumulate(r.fold_accuracy.begin(), r.fold_accuracy.end(), 0.0) / static_cast<double>(options.folds);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string EvalReport::to_string() const {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << "seed " << seed << "\n";
  for (std::size_t i = 0; i < fold_accuracy.size(); ++i)
    out << "fold " << i + 1 << " accuracy " << fold_accuracy[i] << " rules " << rule_count[i] << "\n";
  out << "mean accuracy " << mean_accuracy << "\n";
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace foldasp
