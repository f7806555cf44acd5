#include "foldasp/logic.hpp"

#include <algorithm>
#include <sstream>

#include "foldasp/error.hpp"

namespace foldasp {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

void push_unique(std::vector<Symbol>& out, Symbol s) {
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

Term substitute_term(const Term& t, const Substitution& s) {
  if (!t.is_variable()) return t;
  auto it = s.find(t.symbol());
  return it == s.end() ? t : it->second;
}

}  // namespace

// ---------------------------------------------------------------- Term

std::string Term::to_string() const {
  if (kind_ == Kind::Number) return std::to_string(value_);
  return std::string(symbol_.name());
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.kind_ == Term::Kind::Number) return a.value_ <=> b.value_;
  if (a.symbol_ == b.symbol_) return std::strong_ordering::equal;
  return a.symbol_.name().compare(b.symbol_.name()) < 0 ? std::strong_ordering::less
                                                        : std::strong_ordering::greater;
}

std::size_t Term::hash() const {
  std::size_t h = static_cast<std::size_t>(kind_);
  h = mix(h, kind_ == Kind::Number ? std::hash<std::int64_t>{}(value_) : std::hash<Symbol>{}(symbol_));
  return h;
}

// ---------------------------------------------------------------- Expr

Expr::Expr(Op op, Expr lhs, Expr rhs)
    : op_(op),
      lhs_(std::make_shared<const Expr>(std::move(lhs))),
      rhs_(std::make_shared<const Expr>(std::move(rhs))) {}

bool Expr::is_ground() const {
  if (op_ == Op::Leaf) return leaf_.is_ground();
  return lhs_->is_ground() && rhs_->is_ground();
}

void Expr::collect_variables(std::vector<Symbol>& out) const {
  if (op_ == Op::Leaf) {
    if (leaf_.is_variable()) push_unique(out, leaf_.symbol());
    return;
  }
  lhs_->collect_variables(out);
  rhs_->collect_variables(out);
}

Expr Expr::substitute(const Substitution& s) const {
  if (op_ == Op::Leaf) return Expr(substitute_term(leaf_, s));
  return Expr(op_, lhs_->substitute(s), rhs_->substitute(s));
}

std::optional<Term> Expr::evaluate() const {
  if (op_ == Op::Leaf) {
    if (leaf_.is_variable()) return std::nullopt;
    return leaf_;
  }
  auto l = lhs_->evaluate();
  auto r = rhs_->evaluate();
  if (!l || !r || !l->is_number() || !r->is_number()) return std::nullopt;
  return Term::number(op_ == Op::Add ? l->value() + r->value() : l->value() - r->value());
}

std::string Expr::to_string() const {
  if (op_ == Op::Leaf) return leaf_.to_string();
  return lhs_->to_string() + (op_ == Op::Add ? "+" : "-") + rhs_->to_string();
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.op_ != b.op_) return false;
  if (a.op_ == Expr::Op::Leaf) return a.leaf_ == b.leaf_;
  return *a.lhs_ == *b.lhs_ && *a.rhs_ == *b.rhs_;
}

// ---------------------------------------------------------------- Atom

bool Atom::is_ground() const {
  return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_ground(); });
}

Atom Atom::substitute(const Substitution& s) const {
  std::vector<Term> args;
  args.reserve(args_.size());
  for (const Term& t : args_) args.push_back(substitute_term(t, s));
  return with_args(std::move(args));
}

void Atom::collect_variables(std::vector<Symbol>& out) const {
  for (const Term& t : args_)
    if (t.is_variable()) push_unique(out, t.symbol());
}

std::string Atom::to_string() const {
  std::string out = negated_ ? "-" : "";
  out += predicate_.name();
  if (!args_.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args_.size(); ++i) {
      if (i) out += ',';
      out += args_[i].to_string();
    }
    out += ')';
  }
  return out;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.predicate_ != b.predicate_) {
    return a.predicate_.name().compare(b.predicate_.name()) < 0 ? std::strong_ordering::less
                                                                : std::strong_ordering::greater;
  }
  if (a.negated_ != b.negated_) return a.negated_ <=> b.negated_;
  return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(), b.args_.begin(),
                                                b.args_.end());
}

std::size_t Atom::hash() const {
  std::size_t h = mix(std::hash<Symbol>{}(predicate_), negated_ ? 1 : 0);
  for (const Term& t : args_) h = mix(h, t.hash());
  return h;
}

std::string Signature::to_string() const {
  return (negated ? "-" : "") + std::string(name.name()) + "/" + std::to_string(arity);
}

bool SignatureLess::operator()(const Signature& a, const Signature& b) const {
  if (a.name != b.name) return a.name.name() < b.name.name();
  if (a.arity != b.arity) return a.arity < b.arity;
  return a.negated < b.negated;
}

// ---------------------------------------------------------------- built-ins

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

bool Comparison::holds() const {
  auto l = lhs.evaluate();
  auto r = rhs.evaluate();
  if (!l || !r) return false;
  auto c = *l <=> *r;
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return false;
}

// ---------------------------------------------------------------- Literal

bool Literal::is_ground() const {
  if (is_atom()) return atom().is_ground();
  if (is_comparison()) return comparison().lhs.is_ground() && comparison().rhs.is_ground();
  const auto& m = membership();
  return m.element.is_ground();
}

Literal Literal::substitute(const Substitution& s) const {
  if (is_atom()) return Literal(atom().substitute(s), naf_);
  if (is_comparison()) {
    const auto& c = comparison();
    return Literal(Comparison{c.op, c.lhs.substitute(s), c.rhs.substitute(s)});
  }
  const auto& m = membership();
  std::vector<Term> list;
  for (const Term& t : m.list) list.push_back(substitute_term(t, s));
  return Literal(Membership{substitute_term(m.element, s), std::move(list)});
}

void Literal::collect_variables(std::vector<Symbol>& out) const {
  if (is_atom()) {
    atom().collect_variables(out);
  } else if (is_comparison()) {
    comparison().lhs.collect_variables(out);
    comparison().rhs.collect_variables(out);
  } else {
    const auto& m = membership();
    if (m.element.is_variable()) push_unique(out, m.element.symbol());
    for (const Term& t : m.list)
      if (t.is_variable()) push_unique(out, t.symbol());
  }
}

std::string Literal::to_string() const {
  if (is_atom()) return (naf_ ? "not " : "") + atom().to_string();
  if (is_comparison()) {
    const auto& c = comparison();
    return c.lhs.to_string() + " " + std::string(foldasp::to_string(c.op)) + " " + c.rhs.to_string();
  }
  const auto& m = membership();
  std::string out = "member(" + m.element.to_string() + ",[";
  for (std::size_t i = 0; i < m.list.size(); ++i) {
    if (i) out += ',';
    out += m.list[i].to_string();
  }
  return out + "])";
}

// ---------------------------------------------------------------- Clause

Clause::Clause(std::optional<Atom> head, std::vector<Literal> body)
    : head_(std::move(head)), body_(std::move(body)) {}

bool Clause::is_ground() const {
  if (head_ && !head_->is_ground()) return false;
  return std::all_of(body_.begin(), body_.end(), [](const Literal& l) { return l.is_ground(); });
}

std::vector<Symbol> Clause::variables() const {
  std::vector<Symbol> out;
  if (head_) head_->collect_variables(out);
  for (const Literal& l : body_) l.collect_variables(out);
  return out;
}

std::vector<Symbol> Clause::unsafe_variables() const {
  std::vector<Symbol> bound;
  for (const Literal& l : body_) {
    if (l.is_positive_atom()) l.atom().collect_variables(bound);
    if (l.is_membership() && l.membership().element.is_variable())
      push_unique(bound, l.membership().element.symbol());
  }
  // Equalities may bind a variable from an already-bound expression.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Literal& l : body_) {
      if (!l.is_comparison() || l.comparison().op != CompareOp::Eq) continue;
      const auto& c = l.comparison();
      for (int side = 0; side < 2; ++side) {
        const Expr& target = side == 0 ? c.lhs : c.rhs;
        const Expr& source = side == 0 ? c.rhs : c.lhs;
        if (target.op() != Expr::Op::Leaf || !target.leaf().is_variable()) continue;
        if (std::find(bound.begin(), bound.end(), target.leaf().symbol()) != bound.end()) continue;
        std::vector<Symbol> vars;
        source.collect_variables(vars);
        bool ok = std::all_of(vars.begin(), vars.end(), [&](Symbol v) {
          return std::find(bound.begin(), bound.end(), v) != bound.end();
        });
        if (ok) {
          bound.push_back(target.leaf().symbol());
          changed = true;
        }
      }
    }
  }
  std::vector<Symbol> unsafe;
  for (Symbol v : variables())
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) unsafe.push_back(v);
  return unsafe;
}

bool Clause::has_body_literal(const Literal& l) const {
  return std::find(body_.begin(), body_.end(), l) != body_.end();
}

Clause Clause::substitute(const Substitution& s) const {
  std::optional<Atom> head;
  if (head_) head = head_->substitute(s);
  std::vector<Literal> body;
  body.reserve(body_.size());
  for (const Literal& l : body_) body.push_back(l.substitute(s));
  return Clause(std::move(head), std::move(body));
}

std::string Clause::to_string() const {
  std::string out;
  if (head_) out = head_->to_string();
  if (!body_.empty()) {
    out += head_ ? " :- " : ":- ";
    for (std::size_t i = 0; i < body_.size(); ++i) {
      if (i) out += ", ";
      out += body_[i].to_string();
    }
  }
  return out + ".";
}

// ---------------------------------------------------------------- Program

void Program::append(const Program& other) {
  clauses_.insert(clauses_.end(), other.clauses_.begin(), other.clauses_.end());
}

void Program::check_arities() const {
  std::unordered_map<Symbol, std::size_t> seen;
  auto check = [&](const Atom& a) {
    auto [it, inserted] = seen.emplace(a.predicate(), a.arity());
    if (!inserted && it->second != a.arity()) {
      throw ArityError("predicate " + std::string(a.predicate().name()) + " used with arity " +
                       std::to_string(it->second) + " and " + std::to_string(a.arity()));
    }
  };
  for (const Clause& c : clauses_) {
    if (c.head()) check(*c.head());
    for (const Literal& l : c.body())
      if (l.is_atom()) check(l.atom());
  }
}

std::vector<Term> Program::constants() const {
  std::vector<Term> out;
  auto add = [&](const Term& t) {
    if (t.is_ground()) out.push_back(t);
  };
  auto add_expr = [&](const Expr& e, auto&& self) -> void {
    if (e.op() == Expr::Op::Leaf) {
      add(e.leaf());
    } else {
      self(e.lhs(), self);
      self(e.rhs(), self);
    }
  };
  for (const Clause& c : clauses_) {
    if (c.head())
      for (const Term& t : c.head()->args()) add(t);
    for (const Literal& l : c.body()) {
      if (l.is_atom()) {
        for (const Term& t : l.atom().args()) add(t);
      } else if (l.is_comparison()) {
        add_expr(l.comparison().lhs, add_expr);
        add_expr(l.comparison().rhs, add_expr);
      } else {
        add(l.membership().element);
        for (const Term& t : l.membership().list) add(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Program::to_string() const { return print_program(*this); }

// ---------------------------------------------------------------- free functions

Clause apply_substitution(const Clause& c, const Substitution& s) { return c.substitute(s); }

std::string print_program(const Program& p) {
  std::string out;
  for (const Clause& c : p.clauses()) {
    out += c.to_string();
    out += '\n';
  }
  return out;
}

Clause canonical_variables(const Clause& c) {
  Substitution s;
  std::size_t i = 0;
  for (Symbol v : c.variables()) s.emplace(v, Term::variable("V" + std::to_string(i++)));
  return c.substitute(s);
}

namespace {

// Backtracking search for a variable bijection mapping a onto b, with the
// body compared as a multiset.
bool match_term(const Term& a, const Term& b, std::unordered_map<Symbol, Symbol>& fwd,
                std::unordered_map<Symbol, Symbol>& bwd) {
  if (a.is_variable() != b.is_variable()) return false;
  if (!a.is_variable()) return a == b;
  auto f = fwd.find(a.symbol());
  auto r = bwd.find(b.symbol());
  if (f != fwd.end() || r != bwd.end()) {
    return f != fwd.end() && r != bwd.end() && f->second == b.symbol() && r->second == a.symbol();
  }
  fwd.emplace(a.symbol(), b.symbol());
  bwd.emplace(b.symbol(), a.symbol());
  return true;
}

bool match_expr(const Expr& a, const Expr& b, std::unordered_map<Symbol, Symbol>& fwd,
                std::unordered_map<Symbol, Symbol>& bwd) {
  if (a.op() != b.op()) return false;
  if (a.op() == Expr::Op::Leaf) return match_term(a.leaf(), b.leaf(), fwd, bwd);
  return match_expr(a.lhs(), b.lhs(), fwd, bwd) && match_expr(a.rhs(), b.rhs(), fwd, bwd);
}

bool match_atom(const Atom& a, const Atom& b, std::unordered_map<Symbol, Symbol>& fwd,
                std::unordered_map<Symbol, Symbol>& bwd) {
  if (a.predicate() != b.predicate() || a.strongly_negated() != b.strongly_negated() ||
      a.arity() != b.arity())
    return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!match_term(a.args()[i], b.args()[i], fwd, bwd)) return false;
  return true;
}

bool match_literal(const Literal& a, const Literal& b, std::unordered_map<Symbol, Symbol>& fwd,
                   std::unordered_map<Symbol, Symbol>& bwd) {
  if (a.naf() != b.naf()) return false;
  if (a.is_atom() && b.is_atom()) return match_atom(a.atom(), b.atom(), fwd, bwd);
  if (a.is_comparison() && b.is_comparison()) {
    const auto& x = a.comparison();
    const auto& y = b.comparison();
    return x.op == y.op && match_expr(x.lhs, y.lhs, fwd, bwd) && match_expr(x.rhs, y.rhs, fwd, bwd);
  }
  if (a.is_membership() && b.is_membership()) {
    const auto& x = a.membership();
    const auto& y = b.membership();
    if (x.list.size() != y.list.size()) return false;
    if (!match_term(x.element, y.element, fwd, bwd)) return false;
    auto xl = x.list;
    auto yl = y.list;
    std::sort(xl.begin(), xl.end());
    std::sort(yl.begin(), yl.end());
    return xl == yl;
  }
  return false;
}

bool match_body(const std::vector<Literal>& a, const std::vector<Literal>& b, std::size_t i,
                std::vector<bool>& used, std::unordered_map<Symbol, Symbol>& fwd,
                std::unordered_map<Symbol, Symbol>& bwd) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    auto f = fwd;
    auto r = bwd;
    if (!match_literal(a[i], b[j], f, r)) continue;
    used[j] = true;
    if (match_body(a, b, i + 1, used, f, r)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool equivalent_clauses(const Clause& a, const Clause& b) {
  if (a.head().has_value() != b.head().has_value()) return false;
  if (a.body().size() != b.body().size()) return false;
  std::unordered_map<Symbol, Symbol> fwd;
  std::unordered_map<Symbol, Symbol> bwd;
  if (a.head() && !match_atom(*a.head(), *b.head(), fwd, bwd)) return false;
  std::vector<bool> used(b.body().size(), false);
  return match_body(a.body(), b.body(), 0, used, fwd, bwd);
}

bool equivalent_programs(const Program& a, const Program& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Clause& c : a.clauses()) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && equivalent_clauses(c, b.clauses()[j])) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace foldasp
