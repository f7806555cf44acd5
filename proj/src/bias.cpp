#include "foldasp/bias.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace foldasp {

std::string PlaceMarker::to_string() const {
  switch (kind) {
    case Kind::Input: return "+" + std::string(type.name());
    case Kind::Output: return "-" + std::string(type.name());
    case Kind::Constant: return "#" + std::string(type.name());
  }
  return "?";
}

std::string ModeDeclaration::to_string() const {
  std::string out = (negated ? "-" : "") + std::string(predicate.name());
  if (args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].to_string();
  }
  return out + ')';
}

const ModeDeclaration* LanguageBias::head_mode(const Signature& s) const {
  for (const auto& m : head_modes)
    if (m.predicate == s.name && m.args.size() == s.arity) return &m;
  return nullptr;
}

bool LanguageBias::is_banned(const Signature& s) const {
  return std::find(banned.begin(), banned.end(), s) != banned.end();
}

bool LanguageBias::is_type(Symbol name) const {
  auto in = [&](const std::vector<ModeDeclaration>& modes) {
    for (const auto& m : modes)
      for (const auto& a : m.args)
        if (a.kind != PlaceMarker::Kind::Constant && a.type == name) return true;
    return false;
  };
  return in(head_modes) || in(body_modes);
}

NumericPools numeric_pools(const Program& facts, const LanguageBias& bias) {
  NumericPools pools;
  for (const NumericSpec& spec : bias.numeric) {
    auto& pool = pools[{std::string(spec.predicate.name()), spec.position}];
    for (const Clause& c : facts.clauses()) {
      if (!c.is_fact() || c.head()->predicate() != spec.predicate || c.head()->arity() != spec.arity) continue;
      const Term& t = c.head()->args()[spec.position - 1];
      if (t.is_number()) pool.push_back(t.value());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  return pools;
}

std::string variable_name(std::size_t n) {
  static const char* first[] = {"X", "Y", "Z", "W"};
  if (n < 4) return first[n];
  return "V" + std::to_string(n + 1);
}

Atom head_atom(const ModeDeclaration& mode) {
  std::vector<Term> args;
  std::size_t next = 0;
  for (const PlaceMarker& m : mode.args) {
    (void)m;
    args.push_back(Term::variable(variable_name(next++)));
  }
  return Atom(mode.predicate, std::move(args), mode.negated);
}

namespace {

using TypeMap = std::unordered_map<Symbol, Symbol>;

// Modes that may describe an atom: body modes first, then head modes; the
// classical sign is ignored so that `-p` atoms borrow the types of `p`.
std::vector<const ModeDeclaration*> modes_for(const Atom& a, const LanguageBias& bias) {
  std::vector<const ModeDeclaration*> out;
  for (const auto* list : {&bias.body_modes, &bias.head_modes})
    for (const auto& m : *list)
      if (m.predicate == a.predicate() && m.args.size() == a.arity()) out.push_back(&m);
  return out;
}

void type_atom(const Atom& a, const LanguageBias& bias, TypeMap& types) {
  for (const ModeDeclaration* m : modes_for(a, bias)) {
    for (std::size_t i = 0; i < a.arity(); ++i) {
      const Term& t = a.args()[i];
      if (t.is_variable() && m->args[i].kind != PlaceMarker::Kind::Constant) types.emplace(t.symbol(), m->args[i].type);
    }
  }
}

TypeMap infer_types(const Clause& c, const LanguageBias& bias) {
  TypeMap types;
  if (c.head()) type_atom(*c.head(), bias, types);
  for (const Literal& l : c.body())
    if (l.is_atom()) type_atom(l.atom(), bias, types);
  return types;
}

class FreshNames {
 public:
  explicit FreshNames(const Clause& c) {
    for (Symbol v : c.variables()) used_.insert(std::string(v.name()));
  }
  Term next() {
    while (used_.count(variable_name(counter_))) ++counter_;
    std::string name = variable_name(counter_++);
    used_.insert(name);
    return Term::variable(name);
  }

 private:
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

struct Instantiation {
  Atom atom;
  std::vector<Symbol> fresh;
};

// All instantiations of `mode` against the variables already in the clause.
std::vector<Instantiation> instantiate(const ModeDeclaration& mode, const Clause& c, const TypeMap& types,
                                       const LanguageBias& bias) {
  std::vector<Symbol> vars = c.variables();
  std::vector<std::vector<Term>> choices(mode.args.size());
  for (std::size_t i = 0; i < mode.args.size(); ++i) {
    const PlaceMarker& pm = mode.args[i];
    if (pm.kind == PlaceMarker::Kind::Input) {
      for (Symbol v : vars) {
        auto it = types.find(v);
        if (it == types.end() || it->second == pm.type) choices[i].push_back(Term::variable(v));
      }
    } else if (pm.kind == PlaceMarker::Kind::Constant) {
      auto it = bias.domains.find(std::string(pm.type.name()));
      if (it != bias.domains.end()) choices[i] = it->second;
    }
  }
  std::vector<Instantiation> out;
  std::vector<Term> args(mode.args.size(), Term::number(0));
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == mode.args.size()) {
      FreshNames names(c);
      Instantiation inst{Atom(mode.predicate, args, mode.negated), {}};
      std::vector<Term> filled = args;
      for (std::size_t k = 0; k < mode.args.size(); ++k) {
        if (mode.args[k].kind != PlaceMarker::Kind::Output) continue;
        filled[k] = names.next();
        inst.fresh.push_back(filled[k].symbol());
      }
      inst.atom = Atom(mode.predicate, filled, mode.negated);
      out.push_back(std::move(inst));
      return;
    }
    if (mode.args[i].kind == PlaceMarker::Kind::Output) {
      self(self, i + 1);
      return;
    }
    for (const Term& t : choices[i]) {
      args[i] = t;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<const ModeDeclaration*> candidate_modes(const LanguageBias& bias) {
  std::vector<const ModeDeclaration*> out;
  std::vector<Signature> seen;
  for (const auto* list : {&bias.body_modes, &bias.head_modes}) {
    for (const auto& m : *list) {
      Signature s = m.signature();
      if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
      seen.push_back(s);
      out.push_back(&m);
    }
  }
  return out;
}

bool trivially_recursive(const Clause& c, const Atom& a) { return c.head() && *c.head() == a; }

const NumericSpec* numeric_spec(const LanguageBias& bias, const ModeDeclaration& m, std::size_t position) {
  for (const NumericSpec& s : bias.numeric)
    if (s.predicate == m.predicate && s.arity == m.args.size() && s.position == position) return &s;
  return nullptr;
}

}  // namespace

std::vector<Refinement> candidate_literals(const Clause& c, const LanguageBias& bias, const NumericPools& pools,
                                           const CandidateOptions& options) {
  const TypeMap types = infer_types(c, bias);
  std::vector<Refinement> naf;
  std::vector<Refinement> positive;
  std::vector<Refinement> numeric;
  std::vector<Refinement> pairs;
  std::vector<std::pair<Instantiation, const ModeDeclaration*>> singles;

  for (const ModeDeclaration* m : candidate_modes(bias)) {
    if (bias.is_banned(m->signature())) continue;
    for (Instantiation& inst : instantiate(*m, c, types, bias)) {
      if (trivially_recursive(c, inst.atom)) continue;
      Literal lit(inst.atom, false);
      if (inst.fresh.empty() && c.has_body_literal(lit)) continue;
      positive.push_back({lit});
      if (options.naf && inst.fresh.empty()) {
        Literal neg(inst.atom, true);
        if (!c.has_body_literal(neg)) naf.push_back({neg});
      }
      for (std::size_t k = 0; k < m->args.size(); ++k) {
        if (m->args[k].kind != PlaceMarker::Kind::Output || !numeric_spec(bias, *m, k + 1)) continue;
        auto pool = pools.find({std::string(m->predicate.name()), k + 1});
        if (pool == pools.end()) continue;
        const Term var = inst.atom.args()[k];
        for (std::int64_t theta : pool->second) {
          numeric.push_back({lit, Literal(Comparison{CompareOp::Gt, Expr(var), Expr(Term::number(theta))})});
          numeric.push_back({lit, Literal(Comparison{CompareOp::Le, Expr(var), Expr(Term::number(theta))})});
        }
      }
      if (!inst.fresh.empty()) singles.emplace_back(std::move(inst), m);
    }
  }

  if (options.lookahead) {
    for (const auto& [inst, mode] : singles) {
      Clause extended = refine(c, Literal(inst.atom));
      const TypeMap ext_types = infer_types(extended, bias);
      for (const ModeDeclaration* m : candidate_modes(bias)) {
        if (bias.is_banned(m->signature())) continue;
        for (const Instantiation& follow : instantiate(*m, extended, ext_types, bias)) {
          if (trivially_recursive(extended, follow.atom) || !follow.fresh.empty()) continue;
          std::vector<Symbol> used;
          follow.atom.collect_variables(used);
          bool consumes = std::any_of(used.begin(), used.end(), [&](Symbol v) {
            return std::find(inst.fresh.begin(), inst.fresh.end(), v) != inst.fresh.end();
          });
          if (!consumes || extended.has_body_literal(Literal(follow.atom))) continue;
          pairs.push_back({Literal(inst.atom), Literal(follow.atom)});
        }
      }
    }
  }

  std::vector<Refinement> out;
  out.insert(out.end(), naf.begin(), naf.end());
  out.insert(out.end(), positive.begin(), positive.end());
  out.insert(out.end(), numeric.begin(), numeric.end());
  out.insert(out.end(), pairs.begin(), pairs.end());
  if (options.extras) {
    for (const Literal& l : bias.extra_candidates) {
      if (c.has_body_literal(l)) continue;
      if (l.is_atom() && (bias.is_banned(Signature::of(l.atom())) || trivially_recursive(c, l.atom()))) continue;
      out.push_back({l});
    }
  }
  return out;
}

Clause refine(const Clause& c, const Refinement& r) {
  std::vector<Literal> body = c.body();
  for (const Literal& l : r) {
    if (std::find(body.begin(), body.end(), l) != body.end())
      throw std::invalid_argument("literal " + l.to_string() + " is already in the clause body");
    body.push_back(l);
  }
  return c.with_body(std::move(body));
}

Clause refine(const Clause& c, const Literal& l) { return refine(c, Refinement{l}); }

Clause ensure_safety(const Clause& c, const LanguageBias& bias) {
  auto unsafe = c.unsafe_variables();
  if (unsafe.empty()) return c;
  const TypeMap types = infer_types(c, bias);
  std::vector<Literal> body;
  for (Symbol v : unsafe) {
    auto it = types.find(v);
    if (it == types.end()) {
      throw UntypeableVariable("no mode declaration gives a type for variable " + std::string(v.name()) + " in " +
                               c.to_string());
    }
    body.emplace_back(Atom(it->second, {Term::variable(v)}), false);
  }
  body.insert(body.end(), c.body().begin(), c.body().end());
  return c.with_body(std::move(body));
}

Clause strip_type_literals(const Clause& c, const LanguageBias& bias) {
  std::vector<Literal> body;
  for (const Literal& l : c.body()) {
    if (l.is_positive_atom() && l.atom().arity() == 1 && !l.atom().strongly_negated() && bias.is_type(l.atom().predicate()) &&
        l.atom().args()[0].is_variable())
      continue;
    body.push_back(l);
  }
  return c.with_body(std::move(body));
}

}  // namespace foldasp
