#include "foldasp/engine.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "foldasp/error.hpp"

namespace foldasp {

namespace {

std::size_t signature_key(const Atom& a) {
  return (static_cast<std::size_t>(a.predicate().id()) << 9) ^ (a.arity() << 1) ^ (a.strongly_negated() ? 1 : 0);
}

bool is_bound(const Substitution& s, const Term& t) { return !t.is_variable() || s.count(t.symbol()); }

bool expr_bound(const Substitution& s, const Expr& e) {
  std::vector<Symbol> vars;
  e.collect_variables(vars);
  return std::all_of(vars.begin(), vars.end(), [&](Symbol v) { return s.count(v) != 0; });
}

bool unify(const Atom& pattern, const Atom& ground, Substitution& s) {
  const auto& pa = pattern.args();
  const auto& ga = ground.args();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const Term& p = pa[i];
    if (!p.is_variable()) {
      if (!(p == ga[i])) return false;
      continue;
    }
    auto it = s.find(p.symbol());
    if (it == s.end()) {
      s.emplace(p.symbol(), ga[i]);
    } else if (!(it->second == ga[i])) {
      return false;
    }
  }
  return true;
}

// Order in which a body is evaluated: positive atoms in body order, each
// built-in as soon as its variables are bound (or it can bind one).
struct JoinPlan {
  struct Step {
    bool is_atom;
    std::size_t literal;
    std::size_t ordinal;  // index among positive atoms, for atom steps
  };
  std::vector<Step> steps;
  std::size_t positive_atoms = 0;
};

bool builtin_ready(const Literal& l, const std::set<Symbol, SymbolTextLess>& bound) {
  std::vector<Symbol> vars;
  l.collect_variables(vars);
  std::size_t unbound = 0;
  for (Symbol v : vars) unbound += bound.count(v) ? 0 : 1;
  if (unbound == 0) return true;
  if (unbound > 1) return false;
  if (l.is_membership()) return l.membership().element.is_variable();
  const Comparison& c = l.comparison();
  if (c.op != CompareOp::Eq) return false;
  auto lone = [&](const Expr& e) {
    return e.op() == Expr::Op::Leaf && e.leaf().is_variable() && !bound.count(e.leaf().symbol());
  };
  return lone(c.lhs) || lone(c.rhs);
}

JoinPlan plan_join(const std::vector<Literal>& body, const std::vector<Symbol>& prebound) {
  JoinPlan plan;
  std::set<Symbol, SymbolTextLess> bound(prebound.begin(), prebound.end());
  std::vector<std::size_t> atoms;
  std::vector<std::size_t> builtins;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i].is_positive_atom()) atoms.push_back(i);
    if (body[i].is_builtin()) builtins.push_back(i);
  }
  plan.positive_atoms = atoms.size();
  std::size_t next_atom = 0;
  while (true) {
    bool placed = true;
    while (placed) {
      placed = false;
      for (auto it = builtins.begin(); it != builtins.end(); ++it) {
        if (!builtin_ready(body[*it], bound)) continue;
        plan.steps.push_back({false, *it, 0});
        std::vector<Symbol> vars;
        body[*it].collect_variables(vars);
        bound.insert(vars.begin(), vars.end());
        builtins.erase(it);
        placed = true;
        break;
      }
    }
    if (next_atom == atoms.size()) break;
    std::size_t li = atoms[next_atom];
    plan.steps.push_back({true, li, next_atom});
    ++next_atom;
    std::vector<Symbol> vars;
    body[li].collect_variables(vars);
    bound.insert(vars.begin(), vars.end());
  }
  if (!builtins.empty()) {
    std::vector<Symbol> vars;
    body[builtins.front()].collect_variables(vars);
    std::string name = vars.empty() ? "?" : std::string(vars.front().name());
    for (Symbol v : vars)
      if (!bound.count(v)) name = std::string(v.name());
    throw UnsafeClauseError("built-in literal " + body[builtins.front()].to_string() + " has unbound variable " + name,
                            name);
  }
  return plan;
}

// Evaluates a built-in step, possibly binding one variable. Returns false
// when the literal fails; may call `cont` several times for member/2.
template <class Cont>
bool eval_builtin(const Literal& l, Substitution& s, Cont&& cont) {
  if (l.is_membership()) {
    const Membership& m = l.membership();
    if (is_bound(s, m.element)) {
      Term e = m.element.is_variable() ? s.at(m.element.symbol()) : m.element;
      if (std::find(m.list.begin(), m.list.end(), e) == m.list.end()) return true;
      return cont(s);
    }
    for (const Term& t : m.list) {
      Substitution next = s;
      next.emplace(m.element.symbol(), t);
      if (!cont(next)) return false;
    }
    return true;
  }
  const Comparison& c = l.comparison();
  if (expr_bound(s, c.lhs) && expr_bound(s, c.rhs)) {
    Comparison g{c.op, c.lhs.substitute(s), c.rhs.substitute(s)};
    if (!g.holds()) return true;
    return cont(s);
  }
  const bool left_var = c.lhs.op() == Expr::Op::Leaf && c.lhs.leaf().is_variable() && !s.count(c.lhs.leaf().symbol());
  const Expr& var_side = left_var ? c.lhs : c.rhs;
  const Expr& val_side = left_var ? c.rhs : c.lhs;
  auto v = val_side.substitute(s).evaluate();
  if (!v) return true;
  Substitution next = s;
  next.emplace(var_side.leaf().symbol(), *v);
  return cont(next);
}

// Runs a plan. `candidates(ordinal, pattern)` yields the ground atoms to try
// for a positive atom step. Returns false if `visit` asked to stop.
template <class Candidates, class Visit>
bool run_join(const JoinPlan& plan, const std::vector<Literal>& body, std::size_t step, Substitution& s,
              Candidates& candidates, Visit& visit) {
  if (step == plan.steps.size()) return visit(s);
  const auto& st = plan.steps[step];
  const Literal& lit = body[st.literal];
  if (!st.is_atom) {
    return eval_builtin(lit, s, [&](Substitution& next) { return run_join(plan, body, step + 1, next, candidates, visit); });
  }
  const Atom& pattern = lit.atom();
  bool keep_going = true;
  candidates(st.ordinal, pattern, [&](const Atom& ground) {
    Substitution next = s;
    if (!unify(pattern, ground, next)) return true;
    keep_going = run_join(plan, body, step + 1, next, candidates, visit);
    return keep_going;
  });
  return keep_going;
}

std::string first_unsafe(const Clause& c) {
  auto vars = c.unsafe_variables();
  return vars.empty() ? std::string() : std::string(vars.front().name());
}

}  // namespace

// ---------------------------------------------------------------- tables

int AtomTable::intern(const Atom& a) {
  auto it = index_.find(a);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(atoms_.size());
  atoms_.push_back(a);
  index_.emplace(a, id);
  return id;
}

std::optional<int> AtomTable::find(const Atom& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool GroundProgram::has_naf() const {
  return std::any_of(rules.begin(), rules.end(), [](const GroundRule& r) { return !r.neg.empty(); });
}

Program GroundProgram::to_program() const {
  Program p;
  for (const GroundRule& r : rules) {
    std::optional<Atom> head;
    if (r.head) head = atoms.atom(*r.head);
    std::vector<Literal> body;
    for (int a : r.pos) body.emplace_back(atoms.atom(a), false);
    for (int a : r.neg) body.emplace_back(atoms.atom(a), true);
    p.add(Clause(std::move(head), std::move(body)));
  }
  return p;
}

std::vector<Atom> AnswerSet::restrict_to(Symbol predicate, std::size_t arity, bool negated) const {
  std::vector<Atom> out;
  for (const Atom& a : atoms)
    if (a.predicate() == predicate && a.arity() == arity && a.strongly_negated() == negated) out.push_back(a);
  return out;
}

std::string AnswerSet::to_string() const {
  std::string out;
  for (const Atom& a : atoms) {
    if (!out.empty()) out += ' ';
    out += a.to_string();
  }
  return out;
}

// ---------------------------------------------------------------- grounding

GroundProgram ground(const Program& p) {
  GroundProgram g;
  bool has_variables = false;
  std::vector<JoinPlan> plans;
  plans.reserve(p.size());
  for (const Clause& c : p.clauses()) {
    if (!c.is_ground()) has_variables = true;
    std::string bad = first_unsafe(c);
    if (!bad.empty()) throw UnsafeClauseError("unsafe variable " + bad + " in clause " + c.to_string(), bad);
    plans.push_back(plan_join(c.body(), {}));
  }
  if (has_variables && p.constants().empty()) {
    g.warnings.push_back("empty Herbrand universe: non-ground clauses have no instances");
  }

  struct Entry {
    Atom atom;
    int gen;
  };
  std::unordered_map<std::size_t, std::vector<Entry>> store;
  std::unordered_set<Atom> domain;
  struct Pending {
    std::optional<Atom> head;
    std::vector<Atom> pos;
    std::vector<Atom> neg;
  };
  std::vector<Pending> instances;

  auto emit = [&](const Clause& c, const Substitution& s, std::vector<Atom>& fresh) {
    Pending inst;
    if (c.head()) inst.head = c.head()->substitute(s);
    for (const Literal& l : c.body()) {
      if (!l.is_atom()) continue;
      Atom a = l.atom().substitute(s);
      (l.naf() ? inst.neg : inst.pos).push_back(std::move(a));
    }
    if (inst.head && !domain.count(*inst.head)) fresh.push_back(*inst.head);
    instances.push_back(std::move(inst));
  };

  int round = 0;
  std::vector<Atom> fresh;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (plans[i].positive_atoms != 0) continue;
    Substitution s;
    auto none = [](std::size_t, const Atom&, auto&&) {};
    auto visit = [&](const Substitution& b) {
      emit(p.clauses()[i], b, fresh);
      return true;
    };
    run_join(plans[i], p.clauses()[i].body(), 0, s, none, visit);
  }
  while (!fresh.empty()) {
    for (const Atom& a : fresh) {
      if (domain.insert(a).second) store[signature_key(a)].push_back({a, round});
    }
    fresh.clear();
    const int delta = round;
    ++round;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const JoinPlan& plan = plans[i];
      if (plan.positive_atoms == 0) continue;
      const Clause& c = p.clauses()[i];
      for (std::size_t d = 0; d < plan.positive_atoms; ++d) {
        auto candidates = [&](std::size_t ordinal, const Atom& pattern, auto&& fn) {
          auto it = store.find(signature_key(pattern));
          if (it == store.end()) return;
          const auto& entries = it->second;
          for (const Entry& e : entries) {
            bool ok = ordinal < d ? e.gen < delta : ordinal == d ? e.gen == delta : e.gen <= delta;
            if (ok && !fn(e.atom)) return;
          }
        };
        auto visit = [&](const Substitution& b) {
          emit(c, b, fresh);
          return true;
        };
        Substitution s;
        run_join(plan, c.body(), 0, s, candidates, visit);
      }
    }
  }

  std::set<std::tuple<int, std::vector<int>, std::vector<int>>> seen;
  // Number atoms in first-occurrence order over the instances.
  for (const Pending& inst : instances) {
    GroundRule r;
    if (inst.head) r.head = g.atoms.intern(*inst.head);
    for (const Atom& a : inst.pos) r.pos.push_back(g.atoms.intern(a));
    for (const Atom& a : inst.neg)
      if (domain.count(a)) r.neg.push_back(g.atoms.intern(a));
    std::sort(r.pos.begin(), r.pos.end());
    r.pos.erase(std::unique(r.pos.begin(), r.pos.end()), r.pos.end());
    std::sort(r.neg.begin(), r.neg.end());
    r.neg.erase(std::unique(r.neg.begin(), r.neg.end()), r.neg.end());
    if (!seen.emplace(r.head.value_or(-1), r.pos, r.neg).second) continue;
    g.rules.push_back(std::move(r));
  }
  return g;
}

// ---------------------------------------------------------------- reduct / least model

GroundProgram reduct(const GroundProgram& g, const std::set<Atom>& m) {
  GroundProgram out;
  out.atoms = g.atoms;
  for (const GroundRule& r : g.rules) {
    bool blocked = std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return m.count(g.atoms.atom(a)) != 0; });
    if (blocked) continue;
    out.rules.push_back({r.head, r.pos, {}});
  }
  return out;
}

namespace {

// Forward chaining over the rules accepted by `active`; returns a bitmap.
template <class Active>
std::vector<char> fixpoint(const GroundProgram& g, const std::vector<std::vector<int>>& occurs, Active&& active) {
  std::vector<char> in(g.atoms.size(), 0);
  std::vector<std::size_t> missing(g.rules.size());
  std::vector<int> queue;
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const GroundRule& r = g.rules[i];
    missing[i] = r.pos.size();
    if (r.head && missing[i] == 0 && active(r) && !in[*r.head]) {
      in[*r.head] = 1;
      queue.push_back(*r.head);
    }
  }
  while (!queue.empty()) {
    int a = queue.back();
    queue.pop_back();
    for (int ri : occurs[a]) {
      const GroundRule& r = g.rules[ri];
      if (--missing[ri] == 0 && r.head && active(r) && !in[*r.head]) {
        in[*r.head] = 1;
        queue.push_back(*r.head);
      }
    }
  }
  return in;
}

std::vector<std::vector<int>> occurrence_lists(const GroundProgram& g) {
  std::vector<std::vector<int>> occurs(g.atoms.size());
  for (std::size_t i = 0; i < g.rules.size(); ++i)
    for (int a : g.rules[i].pos) occurs[a].push_back(static_cast<int>(i));
  return occurs;
}

}  // namespace

std::set<Atom> least_model(const GroundProgram& g) {
  if (g.has_naf()) throw std::invalid_argument("least_model requires a program without default negation");
  auto in = fixpoint(g, occurrence_lists(g), [](const GroundRule&) { return true; });
  std::set<Atom> out;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i]) out.insert(g.atoms.atom(static_cast<int>(i)));
  return out;
}

// ---------------------------------------------------------------- search

namespace {

class Search {
 public:
  Search(const GroundProgram& g, std::size_t cap, const SolveOptions& options)
      : g_(g), cap_(cap), budget_(std::size_t{1} << std::min(options.budget_bits, 62u)) {
    occurs_ = occurrence_lists(g_);
    value_.assign(g_.atoms.size(), kUnknown);
    phase_.assign(g_.atoms.size(), 0);
    std::vector<char> is_naf(g_.atoms.size(), 0);
    for (const GroundRule& r : g_.rules) {
      for (int a : r.neg) is_naf[a] = 1;
      if (!r.head) constraints_.push_back(&r);
    }
    for (std::size_t i = 0; i < is_naf.size(); ++i)
      if (is_naf[i]) naf_.push_back(static_cast<int>(i));
    for (const Atom& a : options.prefer_true)
      if (auto id = g_.atoms.find(a)) phase_[*id] = 1;
    for (const Atom& a : options.prefer_false)
      if (auto id = g_.atoms.find(a)) phase_[*id] = 0;
  }

  std::vector<std::vector<int>> run() {
    branch();
    std::sort(models_.begin(), models_.end());
    return models_;
  }

 private:
  static constexpr signed char kUnknown = -1;

  bool propagate(std::vector<char>& lower) {
    while (true) {
      lower = fixpoint(g_, occurs_, [&](const GroundRule& r) {
        return std::all_of(r.neg.begin(), r.neg.end(), [&](int a) { return value_[a] == 0; });
      });
      auto upper = fixpoint(g_, occurs_, [&](const GroundRule& r) {
        return std::none_of(r.neg.begin(), r.neg.end(), [&](int a) { return value_[a] == 1; });
      });
      bool changed = false;
      for (int a : naf_) {
        if (lower[a]) {
          if (value_[a] == 0) return false;
          if (value_[a] == kUnknown) {
            assign(a, 1);
            changed = true;
          }
        } else if (!upper[a]) {
          if (value_[a] == 1) return false;
          if (value_[a] == kUnknown) {
            assign(a, 0);
            changed = true;
          }
        }
      }
      for (const GroundRule* c : constraints_) {
        if (!std::all_of(c->pos.begin(), c->pos.end(), [&](int a) { return lower[a] != 0; })) continue;
        int unknown = -1;
        std::size_t unknown_count = 0;
        bool satisfied = false;
        for (int a : c->neg) {
          if (value_[a] == 1) satisfied = true;
          if (value_[a] == kUnknown) {
            unknown = a;
            ++unknown_count;
          }
        }
        if (satisfied) continue;
        if (unknown_count == 0) return false;
        if (unknown_count == 1) {
          assign(unknown, 1);
          changed = true;
        }
      }
      if (!changed) return true;
    }
  }

  void assign(int a, signed char v) {
    value_[a] = v;
    trail_.push_back(a);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = kUnknown;
      trail_.pop_back();
    }
  }

  void branch() {
    if (models_.size() >= cap_) return;
    if (++nodes_ > budget_) {
      throw GuessSpaceExceeded("stable model search exceeded " + std::to_string(budget_) + " nodes");
    }
    std::size_t mark = trail_.size();
    std::vector<char> lower;
    if (!propagate(lower)) {
      undo(mark);
      return;
    }
    auto pick = std::find_if(naf_.begin(), naf_.end(), [&](int a) { return value_[a] == kUnknown; });
    if (pick == naf_.end()) {
      record(lower);
      undo(mark);
      return;
    }
    int a = *pick;
    signed char first = phase_[a];
    for (signed char v : {first, static_cast<signed char>(1 - first)}) {
      std::size_t inner = trail_.size();
      assign(a, v);
      branch();
      undo(inner);
      if (models_.size() >= cap_) break;
    }
    undo(mark);
  }

  void record(const std::vector<char>& lower) {
    std::vector<int> model;
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (lower[i]) model.push_back(static_cast<int>(i));
    // Self-check: the model must reproduce itself through its reduct.
    std::vector<char> in(lower.begin(), lower.end());
    auto check = fixpoint(g_, occurs_, [&](const GroundRule& r) {
      return std::none_of(r.neg.begin(), r.neg.end(), [&](int x) { return in[x] != 0; });
    });
    if (check != lower) throw std::logic_error("internal error: candidate is not a stable model");
    for (const GroundRule* c : constraints_) {
      bool body = std::all_of(c->pos.begin(), c->pos.end(), [&](int x) { return in[x] != 0; }) &&
                  std::none_of(c->neg.begin(), c->neg.end(), [&](int x) { return in[x] != 0; });
      if (body) return;
    }
    models_.push_back(std::move(model));
  }

  const GroundProgram& g_;
  std::size_t cap_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<std::vector<int>> occurs_;
  std::vector<int> naf_;
  std::vector<const GroundRule*> constraints_;
  std::vector<signed char> value_;
  std::vector<signed char> phase_;
  std::vector<int> trail_;
  std::vector<std::vector<int>> models_;
};

GroundProgram with_consistency(const GroundProgram& g) {
  GroundProgram out = g;
  for (std::size_t i = 0; i < g.atoms.size(); ++i) {
    const Atom& a = g.atoms.atom(static_cast<int>(i));
    if (!a.strongly_negated()) continue;
    if (auto pos = g.atoms.find(a.negated())) out.rules.push_back({std::nullopt, {*pos, static_cast<int>(i)}, {}});
  }
  return out;
}

}  // namespace

std::vector<AnswerSet> answer_sets(const GroundProgram& g, std::size_t cap, const SolveOptions& options) {
  if (cap == 0) throw std::invalid_argument("model cap must be positive");
  const GroundProgram prepared = options.inject_consistency ? with_consistency(g) : g;
  if (options.use_external && options.external) return options.external(prepared, cap);
  std::vector<std::vector<int>> models;
  try {
    models = Search(prepared, cap, options).run();
  } catch (const GuessSpaceExceeded&) {
    if (!options.external) throw;
    return options.external(prepared, cap);
  }
  std::vector<AnswerSet> out;
  out.reserve(models.size());
  for (const auto& m : models) {
    AnswerSet s;
    for (int a : m) s.atoms.insert(prepared.atoms.atom(a));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<AnswerSet> answer_sets(const Program& p, std::size_t cap, const SolveOptions& options) {
  return answer_sets(ground(p), cap, options);
}

// ---------------------------------------------------------------- examples

bool extends(const AnswerSet& a, const PartialInterpretation& e) {
  for (const ExampleEntry& x : e.inc)
    if (a.contains(x.atom) == x.naf) return false;
  for (const ExampleEntry& x : e.exc)
    if (a.contains(x.atom) != x.naf) return false;
  return true;
}

bool exists_extending(const Program& p, const PartialInterpretation& e, const SolveOptions& options) {
  Program q = p;
  for (const ExampleEntry& x : e.inc) q.add(Clause::constraint({Literal(x.atom, !x.naf)}));
  for (const ExampleEntry& x : e.exc) q.add(Clause::constraint({Literal(x.atom, x.naf)}));
  return !answer_sets(q, 1, options).empty();
}

// ---------------------------------------------------------------- queries

FactIndex::FactIndex(const std::set<Atom>& atoms) {
  for (const Atom& a : atoms) add(a);
}

void FactIndex::add(const Atom& a) {
  if (all_.insert(a).second) by_signature_[signature_key(a)].push_back(a);
}

void FactIndex::solve(const std::vector<Literal>& body, const Substitution& binding,
                      const std::function<bool(const Substitution&)>& visit) const {
  std::vector<Symbol> prebound;
  for (const auto& [v, t] : binding) prebound.push_back(v);
  JoinPlan plan = plan_join(body, prebound);
  auto candidates = [&](std::size_t, const Atom& pattern, auto&& fn) {
    auto it = by_signature_.find(signature_key(pattern));
    if (it == by_signature_.end()) return;
    for (const Atom& a : it->second)
      if (!fn(a)) return;
  };
  auto check = [&](const Substitution& s) {
    for (const Literal& l : body) {
      if (!l.is_atom() || !l.naf()) continue;
      Atom a = l.atom().substitute(s);
      if (!a.is_ground()) throw UnsafeClauseError("unbound variable under default negation in " + l.to_string(), "");
      if (all_.count(a)) return true;
    }
    return visit(s);
  };
  Substitution s = binding;
  run_join(plan, body, 0, s, candidates, check);
}

bool FactIndex::holds(const std::vector<Literal>& body, const Substitution& binding) const {
  bool found = false;
  solve(body, binding, [&](const Substitution&) {
    found = true;
    return false;
  });
  return found;
}

}  // namespace foldasp
