#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "foldasp/bias.hpp"
#include "foldasp/engine.hpp"
#include "foldasp/logic.hpp"
#include "foldasp/xfold.hpp"

namespace foldasp {

/// Background knowledge, bias and examples of one learning task.
///
/// Examples come in two shapes: plain atoms (`#pos fly(tweety).`), used by
/// FOLD, and partial interpretations (`#pos e1 inc {...} exc {...}`), used
/// by XFOLD.
struct TaskFile {
  Program background;
  LanguageBias bias;
  std::vector<PartialInterpretation> pos;
  std::vector<PartialInterpretation> neg;
  std::vector<Atom> pos_atoms;
  std::vector<Atom> neg_atoms;
  std::vector<Signature> targets;
  std::map<std::string, std::string> config;

  bool has_atom_examples() const { return !pos_atoms.empty() || !neg_atoms.empty(); }
  bool has_interpretations() const { return !pos.empty() || !neg.empty(); }
  /// Declared targets, or the head modes in order when none are declared.
  std::vector<Signature> target_signatures() const;
  std::string config_or(const std::string& key, const std::string& fallback) const;

  friend bool operator==(const TaskFile&, const TaskFile&) = default;
};

TaskFile parse_task(std::string_view text);
/// The partial-interpretation view of a task.
XFoldTask xfold_task(const TaskFile& t);
TaskFile load_task(const std::string& path);
std::string serialize_task(const TaskFile& task);

struct TabularData {
  Program facts;
  std::vector<Atom> pos;
  std::vector<Atom> neg;
  LanguageBias bias;
  Atom goal;
  std::size_t rows = 0;
};

/// Reads a delimiter-separated file with a header row. `schema_json` maps
/// columns to categorical | numeric | label | ignore, names the positive
/// label value, the target predicate, an optional fixed-point scale and an
/// optional delimiter.
TabularData load_tabular_text(std::string_view csv, std::string_view schema_json);
TabularData load_tabular(const std::string& csv_path, const std::string& schema_path);

void export_program(const Program& p, const std::string& path);

std::string read_file(const std::string& path);

/// Ground program in conventional ASP text syntax, one rule per line.
std::string to_solver_text(const GroundProgram& g);

/// Models from solver output of the form `Answer: N` followed by a line of
/// atoms.
std::vector<AnswerSet> parse_solver_output(std::string_view output);

/// Runs an external solver. `command` may contain `{models}` and `{file}`;
/// when `{file}` is absent the program path is appended.
std::vector<AnswerSet> external_answer_sets(const GroundProgram& g, std::size_t cap,
                                            const std::string& command = "clingo {models} {file}");
std::vector<AnswerSet> external_answer_sets(const Program& p, std::size_t cap,
                                            const std::string& command = "clingo {models} {file}");

ExternalSolver make_external_solver(const std::string& command);

/// Empty when the external solver and the built-in engine agree; otherwise a
/// description of the first disagreement.
std::string cross_check(const Program& p, std::size_t cap, const std::string& command);

}  // namespace foldasp
