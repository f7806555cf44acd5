#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "foldasp/logic.hpp"

namespace foldasp {

/// Ground atoms numbered in first-occurrence order.
class AtomTable {
 public:
  int intern(const Atom& a);
  std::optional<int> find(const Atom& a) const;
  const Atom& atom(int id) const { return atoms_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<Atom, int> index_;
};

/// `head :- pos, not neg.` over atom ids; no head means a constraint.
struct GroundRule {
  std::optional<int> head;
  std::vector<int> pos;
  std::vector<int> neg;

  friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

struct GroundProgram {
  AtomTable atoms;
  std::vector<GroundRule> rules;
  std::vector<std::string> warnings;

  bool has_naf() const;
  Program to_program() const;
};

/// A stable model. Atoms are kept sorted for printing and lookup.
struct AnswerSet {
  std::set<Atom> atoms;

  bool contains(const Atom& a) const { return atoms.count(a) != 0; }
  std::size_t size() const { return atoms.size(); }
  /// Atoms whose signature matches, in sorted order.
  std::vector<Atom> restrict_to(Symbol predicate, std::size_t arity, bool negated = false) const;
  std::string to_string() const;

  friend bool operator==(const AnswerSet&, const AnswerSet&) = default;
};

/// One inclusion/exclusion entry. In exc, a plain atom must be absent and a
/// `not a` entry must be present.
struct ExampleEntry {
  Atom atom;
  bool naf = false;

  std::string to_string() const { return (naf ? "not " : "") + atom.to_string(); }
  friend bool operator==(const ExampleEntry&, const ExampleEntry&) = default;
};

struct PartialInterpretation {
  std::string id;
  std::vector<ExampleEntry> inc;
  std::vector<ExampleEntry> exc;

  friend bool operator==(const PartialInterpretation&, const PartialInterpretation&) = default;
};

using ExternalSolver = std::function<std::vector<AnswerSet>(const GroundProgram&, std::size_t cap)>;

struct SolveOptions {
  /// Adds `:- p(t), -p(t)` for every complementary pair in the ground program.
  bool inject_consistency = true;
  /// The search aborts after 2^budget_bits branching nodes.
  unsigned budget_bits = 22;
  /// Phase tried first when branching on these atoms; default is false first.
  std::vector<Atom> prefer_true;
  std::vector<Atom> prefer_false;
  /// Used instead of the built-in search when `use_external` is set, or as a
  /// fallback when the built-in search exceeds its budget.
  ExternalSolver external;
  bool use_external = false;
};

/// Bottom-up instantiation over the atoms derivable while ignoring negation.
/// Built-ins are evaluated away; negated atoms that can never hold are dropped.
GroundProgram ground(const Program& p);

/// Gelfond-Lifschitz reduct with respect to `m`.
GroundProgram reduct(const GroundProgram& g, const std::set<Atom>& m);

/// Least model of a negation-free ground program. Constraints are ignored.
std::set<Atom> least_model(const GroundProgram& g);

std::vector<AnswerSet> answer_sets(const GroundProgram& g, std::size_t cap, const SolveOptions& options = {});
std::vector<AnswerSet> answer_sets(const Program& p, std::size_t cap, const SolveOptions& options = {});

bool extends(const AnswerSet& a, const PartialInterpretation& e);

/// Whether some stable model of `p` extends `e`; decided by solving `p`
/// plus one constraint per example entry.
bool exists_extending(const Program& p, const PartialInterpretation& e, const SolveOptions& options = {});

/// Ground atoms indexed by signature, answering conjunctive queries.
class FactIndex {
 public:
  FactIndex() = default;
  explicit FactIndex(const std::set<Atom>& atoms);

  void add(const Atom& a);
  bool contains(const Atom& a) const { return all_.count(a) != 0; }

  /// Calls `visit` for each substitution extending `binding` that satisfies
  /// every body literal (default negation read as absence). Returning false
  /// from `visit` stops the enumeration.
  void solve(const std::vector<Literal>& body, const Substitution& binding,
             const std::function<bool(const Substitution&)>& visit) const;
  bool holds(const std::vector<Literal>& body, const Substitution& binding) const;

 private:
  std::unordered_map<std::size_t, std::vector<Atom>> by_signature_;
  std::unordered_set<Atom> all_;
};

}  // namespace foldasp
