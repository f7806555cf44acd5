#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "foldasp/symbol.hpp"

namespace foldasp {

/// A variable, a constant symbol, or an integer.
class Term {
 public:
  enum class Kind : std::uint8_t { Number, Constant, Variable };

  static Term variable(std::string_view name) { return Term(Kind::Variable, Symbol::intern(name), 0); }
  static Term variable(Symbol name) { return Term(Kind::Variable, name, 0); }
  static Term constant(std::string_view name) { return Term(Kind::Constant, Symbol::intern(name), 0); }
  static Term constant(Symbol name) { return Term(Kind::Constant, name, 0); }
  static Term number(std::int64_t value) { return Term(Kind::Number, Symbol(), value); }

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  bool is_number() const { return kind_ == Kind::Number; }
  bool is_ground() const { return kind_ != Kind::Variable; }

  Symbol symbol() const { return symbol_; }
  std::int64_t value() const { return value_; }

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.symbol_ == b.symbol_ && a.value_ == b.value_;
  }
  /// Numbers before constants before variables; numbers by value, names by text.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  std::size_t hash() const;

 private:
  Term(Kind kind, Symbol symbol, std::int64_t value) : kind_(kind), symbol_(symbol), value_(value) {}

  Kind kind_;
  Symbol symbol_;
  std::int64_t value_;
};

using Substitution = std::unordered_map<Symbol, Term>;

/// Arithmetic expression inside a comparison literal: a term or `lhs (+|-) rhs`.
class Expr {
 public:
  enum class Op : std::uint8_t { Leaf, Add, Sub };

  Expr(Term leaf) : op_(Op::Leaf), leaf_(leaf) {}  // NOLINT: implicit by design of the dialect
  Expr(Op op, Expr lhs, Expr rhs);

  Op op() const { return op_; }
  const Term& leaf() const { return leaf_; }
  const Expr& lhs() const { return *lhs_; }
  const Expr& rhs() const { return *rhs_; }

  bool is_ground() const;
  void collect_variables(std::vector<Symbol>& out) const;
  Expr substitute(const Substitution& s) const;
  /// Evaluates a ground expression. Non-numeric operands of +/- yield nullopt.
  std::optional<Term> evaluate() const;
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  Op op_;
  Term leaf_ = Term::number(0);
  std::shared_ptr<const Expr> lhs_;
  std::shared_ptr<const Expr> rhs_;
};

class Atom {
 public:
  Atom() = default;
  Atom(Symbol predicate, std::vector<Term> args, bool strong_negation = false)
      : predicate_(predicate), args_(std::move(args)), negated_(strong_negation) {}
  Atom(std::string_view predicate, std::vector<Term> args, bool strong_negation = false)
      : Atom(Symbol::intern(predicate), std::move(args), strong_negation) {}

  Symbol predicate() const { return predicate_; }
  bool strongly_negated() const { return negated_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }

  bool is_ground() const;
  /// Same predicate and argument tuple with the classical sign flipped; -(-p) = p.
  Atom negated() const { return Atom(predicate_, args_, !negated_); }
  Atom with_args(std::vector<Term> args) const { return Atom(predicate_, std::move(args), negated_); }
  Atom substitute(const Substitution& s) const;
  void collect_variables(std::vector<Symbol>& out) const;
  std::string to_string() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate_ == b.predicate_ && a.negated_ == b.negated_ && a.args_ == b.args_;
  }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

  std::size_t hash() const;

 private:
  Symbol predicate_;
  std::vector<Term> args_;
  bool negated_ = false;
};

/// Predicate identity including the classical sign: `p/2` and `-p/2` differ.
struct Signature {
  Symbol name;
  std::size_t arity = 0;
  bool negated = false;

  static Signature of(const Atom& a) { return {a.predicate(), a.arity(), a.strongly_negated()}; }
  std::string to_string() const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SignatureLess {
  bool operator()(const Signature& a, const Signature& b) const;
};

enum class CompareOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);

struct Comparison {
  CompareOp op;
  Expr lhs;
  Expr rhs;

  /// Evaluates a ground comparison. Ordering compares numbers before constants.
  bool holds() const;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// `member(X,[c1,...,cn])`.
struct Membership {
  Term element;
  std::vector<Term> list;
  friend bool operator==(const Membership&, const Membership&) = default;
};

/// Body literal: an atom (optionally under default negation) or a built-in.
class Literal {
 public:
  Literal(Atom atom, bool naf = false) : data_(std::move(atom)), naf_(naf) {}  // NOLINT
  Literal(Comparison c) : data_(std::move(c)) {}                              // NOLINT
  Literal(Membership m) : data_(std::move(m)) {}                              // NOLINT

  static Literal positive(Atom a) { return Literal(std::move(a), false); }
  static Literal negative(Atom a) { return Literal(std::move(a), true); }

  bool is_atom() const { return std::holds_alternative<Atom>(data_); }
  bool is_comparison() const { return std::holds_alternative<Comparison>(data_); }
  bool is_membership() const { return std::holds_alternative<Membership>(data_); }
  bool is_builtin() const { return !is_atom(); }
  bool naf() const { return naf_; }
  /// Positive, non-built-in literal.
  bool is_positive_atom() const { return is_atom() && !naf_; }

  const Atom& atom() const { return std::get<Atom>(data_); }
  const Comparison& comparison() const { return std::get<Comparison>(data_); }
  const Membership& membership() const { return std::get<Membership>(data_); }

  bool is_ground() const;
  Literal substitute(const Substitution& s) const;
  void collect_variables(std::vector<Symbol>& out) const;
  std::string to_string() const;

  friend bool operator==(const Literal& a, const Literal& b) { return a.naf_ == b.naf_ && a.data_ == b.data_; }

 private:
  std::variant<Atom, Comparison, Membership> data_;
  bool naf_ = false;
};

class Clause {
 public:
  Clause() = default;
  Clause(std::optional<Atom> head, std::vector<Literal> body);

  static Clause fact(Atom head) { return Clause(std::move(head), {}); }
  static Clause constraint(std::vector<Literal> body) { return Clause(std::nullopt, std::move(body)); }

  const std::optional<Atom>& head() const { return head_; }
  const std::vector<Literal>& body() const { return body_; }
  bool is_constraint() const { return !head_.has_value(); }
  bool is_fact() const { return head_.has_value() && body_.empty(); }

  bool is_ground() const;
  /// Variables in first-occurrence order (head first).
  std::vector<Symbol> variables() const;
  /// Variables not bound by a positive atom, a membership test or an
  /// equality whose other side is bound.
  std::vector<Symbol> unsafe_variables() const;
  bool is_safe() const { return unsafe_variables().empty(); }
  bool has_body_literal(const Literal& l) const;

  Clause substitute(const Substitution& s) const;
  Clause with_body(std::vector<Literal> body) const { return Clause(head_, std::move(body)); }
  Clause with_head(std::optional<Atom> head) const { return Clause(std::move(head), body_); }
  std::string to_string() const;

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::optional<Atom> head_;
  std::vector<Literal> body_;
};

class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {}

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }

  void add(Clause c) { clauses_.push_back(std::move(c)); }
  void append(const Program& other);

  /// Throws ArityError when one predicate name is used with two arities.
  void check_arities() const;
  /// Constants and numbers occurring anywhere in the program, sorted.
  std::vector<Term> constants() const;
  std::string to_string() const;

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::vector<Clause> clauses_;
};

/// Replaces every variable in `s`'s domain throughout the clause.
Clause apply_substitution(const Clause& c, const Substitution& s);

/// Canonical text of a program: one clause per line.
std::string print_program(const Program& p);

/// Renames variables to V0, V1, ... in first-occurrence order so that clauses
/// equal up to variable renaming compare equal.
Clause canonical_variables(const Clause& c);

/// Clause equivalence up to variable renaming and body-literal order.
bool equivalent_clauses(const Clause& a, const Clause& b);

/// Program equivalence up to clause order, variable renaming and body order.
bool equivalent_programs(const Program& a, const Program& b);

}  // namespace foldasp

template <>
struct std::hash<foldasp::Term> {
  std::size_t operator()(const foldasp::Term& t) const noexcept { return t.hash(); }
};
template <>
struct std::hash<foldasp::Atom> {
  std::size_t operator()(const foldasp::Atom& a) const noexcept { return a.hash(); }
};
