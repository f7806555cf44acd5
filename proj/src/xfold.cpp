#include "foldasp/xfold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace foldasp {

double mcc(const ConfusionMatrix& c) {
  const double tp = static_cast<double>(c.tp);
  const double tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

Signature negate(const Signature& s) { return {s.name, s.arity, !s.negated}; }

namespace {

enum class Mode { Interpretation, Shifted };

// One example as seen by the learner for the current target.
struct State {
  std::string id;
  std::vector<Atom> facts;
  std::vector<Atom> inc_targets;
  std::vector<Atom> pos;
  std::vector<Atom> neg;
};

struct Cover {
  std::vector<Atom> pos;
  std::vector<Atom> neg;
};

struct Learned {
  Clause core;
  Clause safe;
};

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

bool contains(const std::vector<Atom>& v, const Atom& a) { return std::find(v.begin(), v.end(), a) != v.end(); }

bool matches(const Atom& a, const Signature& s) { return Signature::of(a) == s; }

Atom target_head(const LanguageBias& bias, const Signature& target) {
  if (const ModeDeclaration* m = bias.head_mode(target)) {
    Atom a = head_atom(*m);
    return a.strongly_negated() == target.negated ? a : a.negated();
  }
  throw LearnerError("target " + target.to_string() + " has no head mode");
}

// Background without the rules for the target's predicate (either sign).
Program base_program(const Program& b, const Signature& target, Mode mode) {
  Program out;
  for (const Clause& c : b.clauses()) {
    if (c.head() && c.head()->predicate() == target.name && c.head()->arity() == target.arity) continue;
    if (mode == Mode::Shifted && c.is_constraint()) continue;
    out.add(c);
  }
  return out;
}

class Learner {
 public:
  Learner(Program base, LanguageBias bias, const XFoldOptions& options, Mode mode)
      : base_(std::move(base)), bias_(std::move(bias)), options_(options), mode_(mode) {
    pools_ = numeric_pools(base_, bias_);
  }

  std::vector<Learned> learn(std::vector<State> states, const Signature& target, std::vector<Signature> stack,
                             std::size_t depth) {
    std::vector<Learned> out;
    auto remaining = [&] {
      return std::any_of(states.begin(), states.end(), [](const State& s) { return !s.pos.empty(); });
    };
    while (remaining()) {
      std::vector<Learned> sub;
      Clause c = specialize(states, target, stack, sub, depth);
      bool progress = false;
      for (State& s : states) {
        if (s.pos.empty()) continue;
        Cover cov = cover(s, sub, c, s.pos, {});
        if (cov.pos.empty()) continue;
        progress = true;
        std::vector<Atom> left;
        for (const Atom& a : s.pos)
          if (!contains(cov.pos, a)) left.push_back(a);
        s.pos = std::move(left);
      }
      if (!progress) throw NoProgress("no clause for " + target.to_string() + " covers a remaining example atom");
      out.push_back({c, ensure_safety(c, bias_)});
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  Cover cover(const State& s, const std::vector<Learned>& sub, const Clause& c, const std::vector<Atom>& pos,
              const std::vector<Atom>& neg) {
    Program p = base_;
    for (const Atom& a : s.facts) p.add(Clause::fact(a));
    for (const Learned& l : sub) p.add(l.safe);
    p.add(ensure_safety(c, bias_));
    SolveOptions opts = options_.solve;
    opts.inject_consistency = false;
    opts.prefer_true = pos;
    opts.prefer_false = neg;
    for (const Atom& a : neg) opts.prefer_true.push_back(a.negated());
    for (const Atom& a : pos) opts.prefer_false.push_back(a.negated());
    Cover best;
    bool first = true;
    for (const AnswerSet& m : answer_sets(p, options_.model_cap, opts)) {
      Cover cur;
      for (const Atom& a : pos)
        if (m.contains(a)) cur.pos.push_back(a);
      for (const Atom& a : neg)
        if (m.contains(a)) cur.neg.push_back(a);
      auto score = [](const Cover& x) {
        return static_cast<long>(x.pos.size()) - static_cast<long>(x.neg.size());
      };
      if (first || score(cur) > score(best) || (score(cur) == score(best) && cur.neg.size() < best.neg.size())) {
        best = std::move(cur);
        first = false;
      }
    }
    return best;
  }

 private:
  struct Choice {
    Refinement refinement;
    double gain;
  };

  Clause specialize(const std::vector<State>& states, const Signature& target, const std::vector<Signature>& stack,
                    std::vector<Learned>& sub, std::size_t depth) {
    Clause c(target_head(bias_, target), {});
    std::vector<Cover> cur;
    auto recompute = [&] {
      cur.clear();
      for (const State& s : states) cur.push_back(cover(s, sub, c, s.pos, s.neg));
    };
    auto negatives = [&] {
      std::size_t n = 0;
      for (const Cover& x : cur) n += x.neg.size();
      return n;
    };
    recompute();
    while (negatives() > 0) {
      const std::size_t before = negatives();
      auto choice = best_refinement(states, sub, c, cur);
      if (choice && choice->gain > 0) {
        c = refine(c, choice->refinement);
        recompute();
        continue;
      }
      if (mode_ == Mode::Shifted) {
        throw NoProgress("no candidate separates the examples for " + target.to_string() + " at " + c.to_string());
      }
      Literal guard(c.head()->negated(), true);
      if (c.has_body_literal(guard)) throw NoProgress("examples for " + target.to_string() + " remain inseparable");
      const Signature complement = negate(target);
      if (std::find(stack.begin(), stack.end(), complement) == stack.end()) {
        if (depth >= options_.max_depth) throw NoProgress("nesting limit reached while learning " + target.to_string());
        std::vector<State> swapped;
        for (std::size_t i = 0; i < states.size(); ++i) {
          if (cur[i].neg.empty()) continue;
          State s;
          s.id = states[i].id;
          s.facts = states[i].facts;
          for (const Atom& a : states[i].inc_targets) push_unique(s.facts, a);
          for (const Atom& a : cur[i].neg) s.inc_targets.push_back(a.negated());
          s.pos = s.inc_targets;
          for (const Atom& a : states[i].inc_targets) s.neg.push_back(a.negated());
          swapped.push_back(std::move(s));
        }
        std::vector<Signature> deeper = stack;
        deeper.push_back(target);
        auto rules = learn(std::move(swapped), complement, deeper, depth + 1);
        if (rules.empty()) throw NoProgress("nothing learned for " + complement.to_string());
        sub.insert(sub.end(), rules.begin(), rules.end());
      }
      c = refine(c, guard);
      recompute();
      if (negatives() >= before) throw NoProgress("the complement of " + target.to_string() + " removes no negative");
    }
    return c;
  }

  std::optional<Choice> evaluate(const std::vector<State>& states, const std::vector<Learned>& sub, const Clause& c,
                                 const std::vector<Cover>& cur, const std::vector<Refinement>& candidates,
                                 std::optional<Choice> best, std::size_t& best_n1) {
    for (const Refinement& r : candidates) {
      Clause next = refine(c, r);
      GainStats total;
      try {
        for (std::size_t i = 0; i < states.size(); ++i) {
          if (cur[i].pos.empty() && cur[i].neg.empty()) continue;
          Cover cov = cover(states[i], sub, next, cur[i].pos, cur[i].neg);
          total += GainStats{cur[i].pos.size(), cur[i].neg.size(), cov.pos.size(), cov.neg.size(), cov.pos.size()};
        }
      } catch (const UntypeableVariable&) {
        continue;
      }
      const double gain = information_gain(total);
      if (!best || gain > best->gain || (gain == best->gain && total.n1 < best_n1)) {
        best = Choice{r, gain};
        best_n1 = total.n1;
      }
    }
    return best;
  }

  std::optional<Choice> best_refinement(const std::vector<State>& states, const std::vector<Learned>& sub,
                                        const Clause& c, const std::vector<Cover>& cur) {
    if (c.body().size() >= options_.max_clause_len) return std::nullopt;
    std::size_t best_n1 = 0;
    CandidateOptions copts;
    auto singles = candidate_literals(c, bias_, pools_, copts);
    auto best = evaluate(states, sub, c, cur, singles, std::nullopt, best_n1);
    if (mode_ == Mode::Shifted && (!best || !(best->gain > 0)) && c.body().size() + 2 <= options_.max_clause_len) {
      copts.lookahead = true;
      std::vector<Refinement> pairs;
      for (Refinement& r : candidate_literals(c, bias_, pools_, copts))
        if (std::find(singles.begin(), singles.end(), r) == singles.end()) pairs.push_back(std::move(r));
      best = evaluate(states, sub, c, cur, pairs, best, best_n1);
    }
    return best;
  }

  Program base_;
  LanguageBias bias_;
  XFoldOptions options_;
  Mode mode_;
  NumericPools pools_;
};

std::vector<Atom> inc_atoms(const PartialInterpretation& e) {
  std::vector<Atom> out;
  for (const ExampleEntry& x : e.inc) push_unique(out, x.atom);
  return out;
}

State make_state(const PartialInterpretation& e, const Signature& target) {
  State s;
  s.id = e.id;
  for (const ExampleEntry& x : e.inc) {
    if (matches(x.atom, target)) {
      push_unique(s.inc_targets, x.atom);
    } else {
      push_unique(s.facts, x.atom);
    }
  }
  for (const ExampleEntry& x : e.exc)
    if (!x.naf && matches(x.atom, target)) push_unique(s.neg, x.atom);
  s.pos = s.inc_targets;
  return s;
}

bool included(const PartialInterpretation& small, const PartialInterpretation& big) {
  auto atoms = inc_atoms(big);
  return std::all_of(small.inc.begin(), small.inc.end(), [&](const ExampleEntry& x) { return contains(atoms, x.atom); });
}

}  // namespace

GainStats partial_score(const std::vector<Clause>& h, const PartialInterpretation& e, const XFoldTask& task,
                        const Signature& target, const XFoldOptions& options) {
  State s = make_state(e, target);
  Program base = base_program(task.background, target, Mode::Interpretation);
  for (std::size_t i = 0; i + 1 < h.size(); ++i) base.add(ensure_safety(h[i], task.bias));
  GainStats g{s.pos.size(), s.neg.size(), 0, 0, 0};
  if (h.empty()) return g;
  Learner l(std::move(base), task.bias, options, Mode::Interpretation);
  Cover cov = l.cover(s, {}, h.back(), s.pos, s.neg);
  g.p1 = cov.pos.size();
  g.n1 = cov.neg.size();
  g.t = g.p1;
  return g;
}

double overall_score(const std::vector<Clause>& h, const XFoldTask& task, const Signature& target,
                     const XFoldOptions& options) {
  GainStats total;
  for (const PartialInterpretation& e : task.pos) total += partial_score(h, e, task, target, options);
  return information_gain(total);
}

XFoldTask swap_examples(const XFoldTask& task, const Signature& target) {
  XFoldTask out = task;
  auto swap_one = [&](PartialInterpretation& e) {
    std::vector<ExampleEntry> inc = e.inc;
    std::vector<ExampleEntry> exc;
    for (const ExampleEntry& x : e.inc)
      if (matches(x.atom, target)) push_unique(exc, ExampleEntry{x.atom.negated(), false});
    for (const ExampleEntry& x : e.exc) {
      if (!x.naf && matches(x.atom, target)) {
        push_unique(inc, ExampleEntry{x.atom.negated(), false});
      } else {
        push_unique(exc, x);
      }
    }
    e.inc = std::move(inc);
    e.exc = std::move(exc);
  };
  for (auto& e : out.pos) swap_one(e);
  for (auto& e : out.neg) swap_one(e);
  out.targets.clear();
  for (const Signature& t : task.targets) out.targets.push_back(t == target ? negate(t) : t);
  if (task.targets.empty()) out.targets.push_back(negate(target));
  return out;
}

ConfusionMatrix feature_confusion(const XFoldTask& task, const Signature& target, const Literal& feature) {
  ConfusionMatrix m;
  const Atom head = target_head(task.bias, target);
  const Program base = base_program(task.background, target, Mode::Interpretation);
  auto visit = [&](const PartialInterpretation& e) {
    std::vector<std::pair<Atom, bool>> units;
    Program p = base;
    for (const ExampleEntry& x : e.inc) {
      if (matches(x.atom, target)) {
        units.emplace_back(x.atom, true);
      } else {
        p.add(Clause::fact(x.atom));
      }
    }
    for (const ExampleEntry& x : e.exc)
      if (matches(x.atom, target)) units.emplace_back(x.atom, x.naf);
    if (units.empty()) return;
    auto models = answer_sets(p, 1);
    FactIndex facts = models.empty() ? FactIndex() : FactIndex(models.front().atoms);
    for (const auto& [atom, label] : units) {
      Substitution s;
      for (std::size_t i = 0; i < head.arity(); ++i)
        if (head.args()[i].is_variable()) s.emplace(head.args()[i].symbol(), atom.args()[i]);
      const bool predicted = !models.empty() && facts.holds({feature}, s);
      if (predicted && label) ++m.tp;
      if (predicted && !label) ++m.fp;
      if (!predicted && label) ++m.fn;
      if (!predicted && !label) ++m.tn;
    }
  };
  for (const auto& e : task.pos) visit(e);
  for (const auto& e : task.neg) visit(e);
  return m;
}

LanguageBias mcc_feature_selection(const XFoldTask& task, const Signature& target, double threshold) {
  LanguageBias out = task.bias;
  const Atom head = target_head(task.bias, target);
  std::vector<Symbol> head_vars;
  head.collect_variables(head_vars);
  CandidateOptions copts;
  copts.extras = false;
  for (const Refinement& r : candidate_literals(Clause(head, {}), task.bias, {}, copts)) {
    if (r.size() != 1 || !r[0].is_positive_atom()) continue;
    std::vector<Symbol> vars;
    r[0].collect_variables(vars);
    bool closed = std::all_of(vars.begin(), vars.end(), [&](Symbol v) {
      return std::find(head_vars.begin(), head_vars.end(), v) != head_vars.end();
    });
    if (!closed) continue;
    const double score = mcc(feature_confusion(task, target, r[0]));
    std::optional<Literal> add;
    if (score >= threshold) add = r[0];
    if (score <= -threshold) add = Literal(r[0].atom(), true);
    if (add) push_unique(out.extra_candidates, *add);
  }
  return out;
}

std::vector<Clause> xfold_learn_target(const XFoldTask& task, const Signature& target, const XFoldOptions& options) {
  std::vector<State> states;
  for (const auto& e : task.pos) states.push_back(make_state(e, target));
  Learner l(base_program(task.background, target, Mode::Interpretation), task.bias, options, Mode::Interpretation);
  std::vector<Clause> out;
  for (const Learned& r : l.learn(std::move(states), target, {}, 0)) out.push_back(r.safe);
  return out;
}

std::vector<Clause> contrapositive(const Clause& c) {
  if (!c.head() || c.body().empty()) throw NotApplicable("contrapositive needs a rule with a body: " + c.to_string());
  std::vector<Clause> out;
  for (const Literal& l : c.body()) {
    if (!l.is_atom() || !l.naf()) {
      throw NotApplicable("contrapositive applies to rules whose body is negated atoms only: " + c.to_string());
    }
    out.emplace_back(c.head()->negated(), std::vector<Literal>{Literal(l.atom(), false)});
  }
  return out;
}

XFoldTask augment_with_negatives(const XFoldTask& task) {
  XFoldTask out = task;
  for (auto& ep : out.pos) {
    for (const auto& en : task.neg) {
      if (!included(en, ep)) continue;
      for (const ExampleEntry& x : en.exc) {
        ExampleEntry add{x.atom.negated(), false};
        push_unique(x.naf ? ep.inc : ep.exc, add);
      }
    }
  }
  return out;
}

std::vector<Clause> learn_constraints(const XFoldTask& task, const Signature& target, const XFoldOptions& options) {
  LanguageBias bias = task.bias;
  bias.extra_candidates.clear();
  for (const Clause& c : task.background.clauses()) {
    if (!c.head() || c.head()->predicate() != target.name || c.head()->arity() != target.arity) continue;
    try {
      for (const Clause& k : contrapositive(strip_type_literals(c, bias)))
        for (const Literal& l : k.body()) push_unique(bias.banned, Signature::of(l.atom()));
    } catch (const NotApplicable&) {
    }
  }

  std::vector<State> states;
  std::vector<std::vector<Atom>> extra_neg(task.pos.size());
  for (const auto& en : task.neg) {
    bool attached = false;
    for (std::size_t i = 0; i < task.pos.size(); ++i) {
      if (!included(en, task.pos[i])) continue;
      attached = true;
      for (const ExampleEntry& x : en.exc)
        if (!x.naf && matches(x.atom, target)) push_unique(extra_neg[i], x.atom.negated());
    }
    if (!attached) continue;
    for (const ExampleEntry& x : en.exc) {
      if (!x.naf || !matches(x.atom, target)) continue;
      State s;
      s.id = en.id;
      s.facts = inc_atoms(en);
      push_unique(s.facts, x.atom);
      s.inc_targets = {x.atom.negated()};
      s.pos = s.inc_targets;
      states.push_back(std::move(s));
    }
  }
  if (states.empty()) return {};
  for (std::size_t i = 0; i < task.pos.size(); ++i) {
    State s;
    s.id = task.pos[i].id;
    s.facts = inc_atoms(task.pos[i]);
    for (const Atom& a : s.facts)
      if (matches(a, target)) s.neg.push_back(a.negated());
    for (const Atom& a : extra_neg[i]) push_unique(s.neg, a);
    if (!s.neg.empty()) states.push_back(std::move(s));
  }

  const Signature complement = negate(target);
  Learner l(base_program(task.background, target, Mode::Shifted), bias, options, Mode::Shifted);
  std::vector<Clause> out;
  for (const Learned& r : l.learn(std::move(states), complement, {}, 0)) {
    std::vector<Literal> body{Literal(r.core.head()->negated(), false)};
    body.insert(body.end(), r.core.body().begin(), r.core.body().end());
    out.push_back(Clause::constraint(std::move(body)));
  }
  return out;
}

Verification verify_solution(const Program& background, const Program& h, const std::vector<PartialInterpretation>& pos,
                             const std::vector<PartialInterpretation>& neg, const SolveOptions& options) {
  Verification v;
  Program full = background;
  full.append(h);
  for (const auto& e : pos) {
    if (!exists_extending(full, e, options)) {
      v.ok = false;
      v.failures.push_back("positive example " + e.id + " is not extended by any answer set");
    }
  }
  for (const auto& e : neg) {
    if (exists_extending(full, e, options)) {
      v.ok = false;
      v.failures.push_back("negative example " + e.id + " is extended by an answer set");
    }
  }
  return v;
}

XFoldResult xfold_run(const XFoldTask& task, const XFoldOptions& options) {
  std::vector<Signature> targets = task.targets;
  if (targets.empty())
    for (const auto& m : task.bias.head_modes) targets.push_back(m.signature());
  XFoldResult r;
  for (const Signature& t : targets) {
    XFoldTask tt = task;
    tt.bias = mcc_feature_selection(task, t, options.mcc_threshold);
    r.selected.push_back(tt.bias);
    auto rules = xfold_learn_target(tt, t, options);
    r.generate.insert(r.generate.end(), rules.begin(), rules.end());
  }
  if (!task.neg.empty()) {
    XFoldTask ct = task;
    for (const Clause& c : r.generate) ct.background.add(c);
    for (const Signature& t : targets) {
      auto cons = learn_constraints(ct, t, options);
      r.constraints.insert(r.constraints.end(), cons.begin(), cons.end());
    }
  }
  for (const Clause& c : r.generate) r.program.add(c);
  for (const Clause& c : r.constraints) r.program.add(c);
  r.verification = verify_solution(task.background, r.program, task.pos, task.neg, options.solve);
  return r;
}

Program xfold(const XFoldTask& task, const XFoldOptions& options) {
  XFoldResult r = xfold_run(task, options);
  if (!r.verification.ok) {
    const std::string& first = r.verification.failures.front();
    std::string id = first.substr(first.find("example ") + 8);
    id = id.substr(0, id.find(' '));
    throw SolutionCheckError("learned program fails the solution check: " + first, id);
  }
  return r.program;
}

}  // namespace foldasp
