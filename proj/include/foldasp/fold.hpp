#pragma once

#include <cstddef>
#include <vector>

#include "foldasp/bias.hpp"
#include "foldasp/engine.hpp"
#include "foldasp/logic.hpp"

namespace foldasp {

/// Counts feeding the information-gain formula: p0/n0 before and p1/n1
/// after adding a literal; t is the number of positives still covered.
struct GainStats {
  std::size_t p0 = 0;
  std::size_t n0 = 0;
  std::size_t p1 = 0;
  std::size_t n1 = 0;
  std::size_t t = 0;

  GainStats& operator+=(const GainStats& o) {
    p0 += o.p0;
    n0 += o.n0;
    p1 += o.p1;
    n1 += o.n1;
    t += o.t;
    return *this;
  }
  friend bool operator==(const GainStats&, const GainStats&) = default;
};

/// t * (log2(p1/(p1+n1)) - log2(p0/(p0+n0))), or -infinity when t or p1 is 0.
double information_gain(const GainStats& s);

struct Hypothesis {
  std::vector<Clause> defaults;
  std::vector<Clause> abnormals;
  int ab_counter = 0;

  Program program() const;
};

struct FoldOptions {
  std::size_t max_clause_len = 6;
  /// Plain FOIL: negated candidates allowed, no exception learning.
  bool naive_foil = false;
  std::size_t max_depth = 10;
};

/// Examples (ground goal atoms) whose query `body(c)` succeeds in the unique
/// stable model of `b`.
std::vector<Atom> covers(const Clause& c, const std::vector<Atom>& examples, const Program& b);

/// `head(c) :- body(c), member(X,[...])` over the first head argument of the
/// given examples.
Clause enumerate(const Clause& c, const std::vector<Atom>& positives);

class FoldLearner {
 public:
  FoldLearner(Program background, LanguageBias bias, FoldOptions options = {});

  /// Learns a definition of `goal` covering every positive and no negative.
  Hypothesis learn(const Atom& goal, const std::vector<Atom>& positives, const std::vector<Atom>& negatives);

  // The steps below are public so they can be exercised on their own; they
  // operate on the state of the current `learn` call.
  Clause specialize(const Clause& c, std::vector<Atom> pos, std::vector<Atom> neg, std::size_t depth);
  std::optional<Clause> exception(const Clause& c_def, const std::vector<Atom>& pos, const std::vector<Atom>& neg,
                                  std::size_t depth);
  std::vector<Atom> covered(const Clause& c, const std::vector<Atom>& examples);
  const Hypothesis& hypothesis() const { return hyp_; }
  void reset(const Atom& goal);

 private:
  struct Choice {
    Refinement refinement;
    double gain;
  };

  std::vector<Clause> fold(const std::vector<Atom>& pos, const std::vector<Atom>& neg, std::size_t depth);
  std::optional<Choice> add_best_literal(const Clause& c, const std::vector<Atom>& pos, const std::vector<Atom>& neg);
  const FactIndex& model();

  Program background_;
  LanguageBias bias_;
  FoldOptions options_;
  NumericPools pools_;
  Atom goal_;
  Hypothesis hyp_;
  FactIndex model_;
  std::size_t model_version_ = static_cast<std::size_t>(-1);
};

Hypothesis fold(const Atom& goal, const Program& background, const std::vector<Atom>& positives,
                const std::vector<Atom>& negatives, const LanguageBias& bias, const FoldOptions& options = {});

}  // namespace foldasp
