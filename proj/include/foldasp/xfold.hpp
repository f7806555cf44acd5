#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "foldasp/bias.hpp"
#include "foldasp/engine.hpp"
#include "foldasp/error.hpp"
#include "foldasp/fold.hpp"
#include "foldasp/logic.hpp"

namespace foldasp {

class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Neither a refinement nor a swap made any progress.
class NoProgress : public LearnerError {
 public:
  using LearnerError::LearnerError;
};

class SolutionCheckError : public LearnerError {
 public:
  SolutionCheckError(const std::string& message, std::string example)
      : LearnerError(message), example_(std::move(example)) {}
  const std::string& example() const { return example_; }

 private:
  std::string example_;
};

struct XFoldTask {
  Program background;
  LanguageBias bias;
  std::vector<PartialInterpretation> pos;
  std::vector<PartialInterpretation> neg;
  /// Learned in this order; defaults to the head modes.
  std::vector<Signature> targets;
};

struct XFoldOptions {
  double mcc_threshold = 0.5;
  /// Models enumerated per example when scoring.
  std::size_t model_cap = 64;
  std::size_t max_clause_len = 6;
  std::size_t max_depth = 10;
  /// Engine settings for scoring and verification (budget, external solver).
  SolveOptions solve;
};

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Matthews correlation coefficient; 0 when a marginal is empty.
double mcc(const ConfusionMatrix& c);

/// `-p` for `p` and `p` for `-p`.
Signature negate(const Signature& s);

/// Stats of `h` on one example for `target`: p0/n0 count the target atoms in
/// inc/exc, p1/n1 those found in the best answer set of
/// background (without target rules) + non-target inc facts + h.
GainStats partial_score(const std::vector<Clause>& h, const PartialInterpretation& e, const XFoldTask& task,
                        const Signature& target, const XFoldOptions& options = {});

/// Information gain of the pooled partial scores over the positive examples.
double overall_score(const std::vector<Clause>& h, const XFoldTask& task, const Signature& target,
                     const XFoldOptions& options = {});

/// Restores the inc target atoms, adds their complements to exc, moves the
/// complements of exc target atoms into inc and renames the target.
XFoldTask swap_examples(const XFoldTask& task, const Signature& target);

/// Confusion matrix of `feature` (over the head variables) against the
/// target labels of every example entry.
ConfusionMatrix feature_confusion(const XFoldTask& task, const Signature& target, const Literal& feature);

/// The task's bias with literals (or their negations) whose MCC reaches the
/// threshold appended to extra_candidates.
LanguageBias mcc_feature_selection(const XFoldTask& task, const Signature& target, double threshold = 0.5);

/// Rules defining `target` (and the complement rules learned for it).
std::vector<Clause> xfold_learn_target(const XFoldTask& task, const Signature& target,
                                       const XFoldOptions& options = {});

/// `h :- not b1, ..., not bk` gives `-h :- b1`, ..., `-h :- bk`.
std::vector<Clause> contrapositive(const Clause& c);

/// For every (e+, e-) with e-.inc within e+.inc: `not p` exclusions of e-
/// add `-p` to e+.inc, plain exclusions add `-p` to e+.exc.
XFoldTask augment_with_negatives(const XFoldTask& task);

/// Constraints `:- p(...), body` for `target` = p, learned as rules for -p.
/// The background is expected to contain the generate rules.
std::vector<Clause> learn_constraints(const XFoldTask& task, const Signature& target,
                                      const XFoldOptions& options = {});

struct Verification {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Every positive extended by some answer set of background + h, no
/// negative extended by any.
Verification verify_solution(const Program& background, const Program& h, const std::vector<PartialInterpretation>& pos,
                             const std::vector<PartialInterpretation>& neg, const SolveOptions& options = {});

struct XFoldResult {
  Program program;
  std::vector<Clause> generate;
  std::vector<Clause> constraints;
  std::vector<LanguageBias> selected;
  Verification verification;
};

/// Generate part for every target, then the test part. Does not throw on a
/// failed verification; see `xfold` for that.
XFoldResult xfold_run(const XFoldTask& task, const XFoldOptions& options = {});

/// Throws SolutionCheckError naming the first offending example.
Program xfold(const XFoldTask& task, const XFoldOptions& options = {});

}  // namespace foldasp
