#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foldasp/fold.hpp"
#include "foldasp/task_io.hpp"

namespace foldasp {

struct EvalOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  FoldOptions fold;
};

struct EvalReport {
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  /// Learned clauses (defaults plus abnormal rules) per fold.
  std::vector<std::size_t> rule_count;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  /// Folds whose training or test part holds a single class.
  std::vector<std::string> warnings;

  std::string to_string() const;
};

/// Fold index of every example (positives first, then negatives); each class
/// is shuffled with the seed and dealt round-robin.
std::vector<std::size_t> stratified_folds(std::size_t positives, std::size_t negatives, std::size_t k,
                                          std::uint64_t seed);

/// Target atoms entailed by the unique answer set of facts + h.
std::vector<bool> predict(const Program& facts, const Program& h, const std::vector<Atom>& examples);

/// k-fold cross-validation of FOLD on a tabular dataset.
EvalReport cross_validate(const TabularData& data, const EvalOptions& options = {});

}  // namespace foldasp
