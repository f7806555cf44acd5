#include "foldasp/fold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foldasp/error.hpp"

namespace foldasp {

double information_gain(const GainStats& s) {
  if (s.t == 0 || s.p1 == 0) return -std::numeric_limits<double>::infinity();
  const double p0 = static_cast<double>(s.p0);
  const double n0 = static_cast<double>(s.n0);
  const double p1 = static_cast<double>(s.p1);
  const double n1 = static_cast<double>(s.n1);
  return static_cast<double>(s.t) * (std::log2(p1 / (p1 + n1)) - std::log2(p0 / (p0 + n0)));
}

Program Hypothesis::program() const {
  Program p;
  for (const Clause& c : defaults) p.add(c);
  for (const Clause& c : abnormals) p.add(c);
  return p;
}

namespace {

FactIndex unique_model(const Program& p) {
  auto models = answer_sets(p, 2);
  if (models.size() != 1) {
    throw LearnerError("background knowledge must have exactly one stable model, found " +
                       std::string(models.empty() ? "none" : "several"));
  }
  return FactIndex(models.front().atoms);
}

std::vector<Atom> query_covers(const Clause& c, const std::vector<Atom>& examples, const FactIndex& m) {
  std::vector<Atom> out;
  const Atom& head = *c.head();
  for (const Atom& e : examples) {
    if (e.predicate() != head.predicate() || e.arity() != head.arity()) continue;
    Substitution s;
    bool ok = true;
    for (std::size_t i = 0; i < e.arity() && ok; ++i) {
      const Term& h = head.args()[i];
      if (h.is_variable()) {
        auto [it, inserted] = s.emplace(h.symbol(), e.args()[i]);
        if (!inserted && !(it->second == e.args()[i])) ok = false;
      } else if (!(h == e.args()[i])) {
        ok = false;
      }
    }
    if (ok && m.holds(c.body(), s)) out.push_back(e);
  }
  return out;
}

std::vector<Atom> minus(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  std::vector<Atom> out;
  for (const Atom& x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  return out;
}

}  // namespace

std::vector<Atom> covers(const Clause& c, const std::vector<Atom>& examples, const Program& b) {
  return query_covers(c, examples, unique_model(b));
}

Clause enumerate(const Clause& c, const std::vector<Atom>& positives) {
  const Atom& head = *c.head();
  if (head.arity() == 0) return c;
  std::vector<Term> list;
  for (const Atom& e : positives) {
    const Term& t = e.args()[0];
    if (std::find(list.begin(), list.end(), t) == list.end()) list.push_back(t);
  }
  std::vector<Literal> body = c.body();
  body.emplace_back(Membership{head.args()[0], std::move(list)});
  return c.with_body(std::move(body));
}

FoldLearner::FoldLearner(Program background, LanguageBias bias, FoldOptions options)
    : background_(std::move(background)), bias_(std::move(bias)), options_(options) {
  pools_ = numeric_pools(background_, bias_);
}

void FoldLearner::reset(const Atom& goal) {
  goal_ = goal;
  hyp_ = Hypothesis{};
  model_version_ = static_cast<std::size_t>(-1);
}

const FactIndex& FoldLearner::model() {
  if (model_version_ != hyp_.abnormals.size()) {
    Program p = background_;
    for (const Clause& c : hyp_.abnormals) p.add(c);
    model_ = unique_model(p);
    model_version_ = hyp_.abnormals.size();
  }
  return model_;
}

std::vector<Atom> FoldLearner::covered(const Clause& c, const std::vector<Atom>& examples) {
  return query_covers(c, examples, model());
}

Hypothesis FoldLearner::learn(const Atom& goal, const std::vector<Atom>& positives,
                              const std::vector<Atom>& negatives) {
  if (positives.empty()) throw LearnerError("FOLD needs at least one positive example");
  reset(goal);
  hyp_.defaults = fold(positives, negatives, 0);
  return hyp_;
}

std::vector<Clause> FoldLearner::fold(const std::vector<Atom>& positives, const std::vector<Atom>& negatives,
                                      std::size_t depth) {
  std::vector<Clause> found;
  std::vector<Atom> pos = positives;
  while (!pos.empty()) {
    Clause c(goal_, {});
    Clause best = specialize(c, pos, negatives, depth);
    std::vector<Atom> done = covered(best, pos);
    if (done.empty()) break;
    pos = minus(pos, done);
    found.push_back(std::move(best));
  }
  return found;
}

std::optional<FoldLearner::Choice> FoldLearner::add_best_literal(const Clause& c, const std::vector<Atom>& pos,
                                                                 const std::vector<Atom>& neg) {
  if (c.body().size() >= options_.max_clause_len) return std::nullopt;
  CandidateOptions copts;
  copts.naf = options_.naive_foil;
  const std::size_t p0 = covered(c, pos).size();
  const std::size_t n0 = covered(c, neg).size();
  std::optional<Choice> best;
  std::size_t best_n1 = 0;
  for (const Refinement& r : candidate_literals(c, bias_, pools_, copts)) {
    Clause next = refine(c, r);
    GainStats s;
    s.p0 = p0;
    s.n0 = n0;
    s.p1 = covered(next, pos).size();
    s.n1 = covered(next, neg).size();
    s.t = s.p1;
    double gain = information_gain(s);
    if (!best || gain > best->gain || (gain == best->gain && s.n1 < best_n1)) {
      best = Choice{r, gain};
      best_n1 = s.n1;
    }
  }
  return best;
}

Clause FoldLearner::specialize(const Clause& start, std::vector<Atom> pos, std::vector<Atom> neg, std::size_t depth) {
  Clause c = start;
  pos = covered(c, pos);
  neg = covered(c, neg);
  bool first = true;
  while (!neg.empty()) {
    auto choice = add_best_literal(c, pos, neg);
    const std::size_t before = neg.size();
    bool enumerated = false;
    if (choice && choice->gain > 0) {
      c = refine(c, choice->refinement);
    } else if (first || options_.naive_foil) {
      c = enumerate(c, pos);
      enumerated = true;
    } else {
      auto ex = exception(c, neg, pos, depth);
      if (ex) {
        c = *ex;
      } else {
        c = enumerate(c, pos);
        enumerated = true;
      }
    }
    first = false;
    pos = covered(c, pos);
    neg = covered(c, neg);
    if (enumerated && neg.size() >= before) break;
  }
  return c;
}

std::optional<Clause> FoldLearner::exception(const Clause& c_def, const std::vector<Atom>& pos,
                                             const std::vector<Atom>& neg, std::size_t depth) {
  if (depth >= options_.max_depth) return std::nullopt;
  auto choice = add_best_literal(c_def, pos, neg);
  if (!choice || !(choice->gain > 0)) return std::nullopt;
  std::vector<Clause> rules = fold(pos, neg, depth + 1);
  if (rules.empty()) return std::nullopt;
  const Atom& head = *c_def.head();
  Atom ab("ab" + std::to_string(hyp_.ab_counter++), head.args());
  for (const Clause& r : rules) hyp_.abnormals.push_back(r.with_head(ab));
  std::vector<Literal> body = c_def.body();
  body.emplace_back(ab, true);
  return c_def.with_body(std::move(body));
}

Hypothesis fold(const Atom& goal, const Program& background, const std::vector<Atom>& positives,
                const std::vector<Atom>& negatives, const LanguageBias& bias, const FoldOptions& options) {
  FoldLearner learner(background, bias, options);
  return learner.learn(goal, positives, negatives);
}

}  // namespace foldasp
