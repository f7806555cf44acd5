#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "foldasp/error.hpp"
#include "foldasp/logic.hpp"

namespace foldasp {

class UntypeableVariable : public Error {
 public:
  using Error::Error;
};

/// `+type` (existing variable), `-type` (fresh variable) or `#domain` (constant).
struct PlaceMarker {
  enum class Kind { Input, Output, Constant };
  Kind kind = Kind::Input;
  Symbol type;

  std::string to_string() const;
  friend bool operator==(const PlaceMarker&, const PlaceMarker&) = default;
};

struct ModeDeclaration {
  Symbol predicate;
  bool negated = false;
  std::vector<PlaceMarker> args;

  Signature signature() const { return {predicate, args.size(), negated}; }
  /// `p(+t,-u,#d)`, without the directive keyword.
  std::string to_string() const;
  friend bool operator==(const ModeDeclaration&, const ModeDeclaration&) = default;
};

/// Argument position (1-based) of a predicate eligible for threshold literals.
struct NumericSpec {
  Symbol predicate;
  std::size_t arity = 0;
  std::size_t position = 0;
  friend bool operator==(const NumericSpec&, const NumericSpec&) = default;
};

struct LanguageBias {
  std::vector<ModeDeclaration> head_modes;
  std::vector<ModeDeclaration> body_modes;
  std::vector<NumericSpec> numeric;
  std::map<std::string, std::vector<Term>> domains;
  /// Literals admitted by feature selection, over the head variables X, Y, ...
  std::vector<Literal> extra_candidates;
  /// Predicates removed from the candidate set (compared with their sign).
  std::vector<Signature> banned;

  const ModeDeclaration* head_mode(const Signature& s) const;
  bool is_banned(const Signature& s) const;
  /// Whether `name` is used as a +/- type in any mode.
  bool is_type(Symbol name) const;

  friend bool operator==(const LanguageBias&, const LanguageBias&) = default;
};

/// One refinement step: one literal, or a literal followed by a threshold
/// test or a lookahead partner.
using Refinement = std::vector<Literal>;

/// Distinct numeric values found in the background facts for each numeric spec.
using NumericPools = std::map<std::pair<std::string, std::size_t>, std::vector<std::int64_t>>;

NumericPools numeric_pools(const Program& facts, const LanguageBias& bias);

struct CandidateOptions {
  /// Also propose `not l` for every candidate without fresh variables,
  /// placed before the positive candidates.
  bool naf = false;
  /// Also propose pairs of a literal introducing fresh variables followed
  /// by a literal consuming one of them.
  bool lookahead = false;
  /// Include bias.extra_candidates.
  bool extras = true;
};

/// `goal(X,Y,...)` for a head mode, with variables named X, Y, Z, W, V5, ...
Atom head_atom(const ModeDeclaration& mode);

/// The n-th name in the sequence X, Y, Z, W, V5, V6, ...
std::string variable_name(std::size_t n);

std::vector<Refinement> candidate_literals(const Clause& c, const LanguageBias& bias, const NumericPools& pools,
                                           const CandidateOptions& options = {});

/// Appends the literals of `r`. Throws std::invalid_argument if any of them is
/// already in the body.
Clause refine(const Clause& c, const Refinement& r);
Clause refine(const Clause& c, const Literal& l);

/// Prepends a type literal for each variable that is not bound by a positive
/// body atom, using the mode markers to find its type.
Clause ensure_safety(const Clause& c, const LanguageBias& bias);

/// Removes positive unary type literals (as added by ensure_safety).
Clause strip_type_literals(const Clause& c, const LanguageBias& bias);

}  // namespace foldasp
