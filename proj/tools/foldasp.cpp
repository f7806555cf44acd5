#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "foldasp/error.hpp"
#include "foldasp/eval.hpp"
#include "foldasp/fold.hpp"
#include "foldasp/parser.hpp"
#include "foldasp/task_io.hpp"
#include "foldasp/xfold.hpp"

using namespace foldasp;

namespace {

constexpr int kLearnerFailure = 1;
constexpr int kInputFailure = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct SolverFlags {
  std::string solver = "builtin";
  std::string command = "clingo {models} {file}";

  SolveOptions options() const {
    SolveOptions o;
    if (solver == "external") {
      o.external = make_external_solver(command);
      o.use_external = true;
    }
    return o;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& s) {
  cmd->add_option("--solver", s.solver, "builtin or external")->check(CLI::IsMember({"builtin", "external"}));
  cmd->add_option("--solver-cmd", s.command, "external solver command; {models} and {file} are substituted");
}

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw IoError("cannot write " + out);
  f << text;
  if (!f) throw IoError("cannot write " + out);
}

struct LearnFlags {
  std::string task;
  std::string algo;
  std::optional<std::size_t> max_clause_len;
  std::optional<double> mcc_threshold;
  std::optional<std::size_t> model_cap;
  std::string out;
  SolverFlags solver;
};

template <typename T>
T config_value(const TaskFile& t, const std::string& key, std::optional<T> flag, T fallback) {
  if (flag) return *flag;
  std::string v = t.config_or(key, "");
  if (v.empty()) return fallback;
  try {
    if constexpr (std::is_same_v<T, double>) {
      return std::stod(v);
    } else {
      return static_cast<T>(std::stoull(v));
    }
  } catch (const std::exception&) {
    throw UsageError("bad value for #config " + key + ": " + v);
  }
}

int learn_fold(const TaskFile& t, const LearnFlags& f, bool naive) {
  FoldOptions o;
  o.max_clause_len = config_value<std::size_t>(t, "max_clause_len", f.max_clause_len, o.max_clause_len);
  o.naive_foil = naive;
  const auto targets = t.target_signatures();
  const ModeDeclaration* mode = t.bias.head_mode(targets.front());
  if (!mode) throw LearnerError("no head mode for " + targets.front().to_string());
  if (naive) std::cout << "% mode: foil-naive (negated literals allowed, no exceptions learned)\n";
  Program h = fold(head_atom(*mode), t.background, t.pos_atoms, t.neg_atoms, t.bias, o).program();
  write_or_print(h.to_string(), f.out);

  // Coverage is checked the way the learner sees it: each goal clause as a
  // query against the background plus the abnormality rules.
  Program ctx = t.background;
  std::vector<Clause> goal_clauses;
  for (const Clause& c : h.clauses()) {
    if (c.head() && c.head()->predicate() == mode->predicate) {
      goal_clauses.push_back(c);
    } else {
      ctx.add(c);
    }
  }
  std::set<Atom> pos_hit, neg_hit;
  for (const Clause& c : goal_clauses) {
    for (const Atom& a : covers(c, t.pos_atoms, ctx)) pos_hit.insert(a);
    for (const Atom& a : covers(c, t.neg_atoms, ctx)) neg_hit.insert(a);
  }
  std::vector<std::string> failures;
  for (const Atom& a : t.pos_atoms)
    if (!pos_hit.count(a)) failures.push_back("positive " + a.to_string() + " not covered");
  for (const Atom& a : t.neg_atoms)
    if (neg_hit.count(a)) failures.push_back("negative " + a.to_string() + " covered");
  for (const auto& s : failures) std::cout << "% " << s << "\n";
  std::cout << "% verification " << (failures.empty() ? "PASS" : "FAIL") << "\n";
  return failures.empty() ? 0 : kLearnerFailure;
}

int learn_xfold(const TaskFile& t, const LearnFlags& f) {
  XFoldOptions o;
  o.max_clause_len = config_value<std::size_t>(t, "max_clause_len", f.max_clause_len, o.max_clause_len);
  o.mcc_threshold = config_value<double>(t, "mcc_threshold", f.mcc_threshold, o.mcc_threshold);
  o.model_cap = config_value<std::size_t>(t, "model_cap", f.model_cap, o.model_cap);
  o.solve = f.solver.options();
  XFoldResult r = xfold_run(xfold_task(t), o);
  write_or_print(r.program.to_string(), f.out);
  for (const auto& s : r.verification.failures) std::cout << "% " << s << "\n";
  std::cout << "% verification " << (r.verification.ok ? "PASS" : "FAIL") << "\n";
  return r.verification.ok ? 0 : kLearnerFailure;
}

int cmd_learn(const LearnFlags& f) {
  TaskFile t = load_task(f.task);
  std::string algo = f.algo;
  if (algo.empty()) algo = t.has_interpretations() ? "xfold" : "fold";
  if (algo == "xfold") {
    if (!t.has_interpretations()) throw LearnerError("xfold needs partial-interpretation examples");
    return learn_xfold(t, f);
  }
  if (!t.has_atom_examples()) throw LearnerError(algo + " needs atom examples");
  return learn_fold(t, f, algo == "foil-naive");
}

struct SolveFlags {
  std::vector<std::string> inputs;
  std::size_t models = 0;
  std::string format = "plain";
  std::vector<std::string> filter;
  SolverFlags solver;
};

int cmd_solve(const SolveFlags& f) {
  Program p;
  for (const std::string& path : f.inputs) {
    if (std::filesystem::path(path).extension() == ".task") {
      p.append(load_task(path).background);
    } else {
      p.append(parse_program(read_file(path)));
    }
  }
  std::vector<Signature> keep;
  for (const std::string& s : f.filter) {
    auto slash = s.rfind('/');
    if (slash == std::string::npos) throw UsageError("filter must look like pred/arity: " + s);
    bool neg = !s.empty() && s[0] == '-';
    std::string name = s.substr(neg ? 1 : 0, slash - (neg ? 1 : 0));
    std::size_t arity = 0;
    try {
      arity = std::stoul(s.substr(slash + 1));
    } catch (const std::exception&) {
      throw UsageError("filter must look like pred/arity: " + s);
    }
    keep.push_back({Symbol::intern(name), arity, neg});
  }
  const std::size_t cap = f.models == 0 ? static_cast<std::size_t>(-1) : f.models;
  auto models = answer_sets(p, cap, f.solver.options());
  std::size_t n = 0;
  for (const AnswerSet& m : models) {
    std::string line;
    for (const Atom& a : m.atoms) {
      if (!keep.empty() && std::find(keep.begin(), keep.end(), Signature::of(a)) == keep.end()) continue;
      line += (line.empty() ? "" : " ") + a.to_string();
    }
    if (f.format == "clingo") std::cout << "Answer: " << ++n << "\n";
    std::cout << line << "\n";
  }
  if (f.format == "clingo") std::cout << (models.empty() ? "UNSATISFIABLE" : "SATISFIABLE") << "\n";
  return 0;
}

struct EvalFlags {
  std::string csv;
  std::string schema;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::size_t max_clause_len = 6;
};

int cmd_eval(const EvalFlags& f) {
  TabularData d = load_tabular(f.csv, f.schema);
  EvalOptions o;
  o.folds = f.folds;
  o.seed = f.seed;
  o.fold.max_clause_len = f.max_clause_len;
  if (o.folds < 2 || o.folds > d.pos.size() + d.neg.size()) {
    throw UsageError("--folds must be between 2 and the number of rows (" + std::to_string(d.rows) + ")");
  }
  EvalReport r = cross_validate(d, o);
  std::cout << r.to_string();
  std::cerr << "seconds " << r.seconds << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn answer set programs from examples"};
  app.require_subcommand(1);

  LearnFlags learn;
  auto* l = app.add_subcommand("learn", "learn a hypothesis from a task file");
  l->add_option("task", learn.task, "task file")->required();
  l->add_option("--algo", learn.algo, "fold, xfold or foil-naive (default: from the example shape)")
      ->check(CLI::IsMember({"fold", "xfold", "foil-naive"}));
  l->add_flag_callback("--foil-naive", [&] { learn.algo = "foil-naive"; }, "same as --algo foil-naive");
  l->add_option("--max-clause-len", learn.max_clause_len, "body literal limit");
  l->add_option("--mcc-threshold", learn.mcc_threshold, "feature selection threshold on |MCC|");
  l->add_option("--model-cap", learn.model_cap, "answer sets enumerated per example while scoring");
  l->add_option("--out", learn.out, "write the program here instead of stdout");
  add_solver_flags(l, learn.solver);

  SolveFlags solve;
  auto* s = app.add_subcommand("solve", "print the answer sets of programs and task backgrounds");
  s->add_option("inputs", solve.inputs, "program files; .task files contribute their background")->required();
  s->add_option("--models", solve.models, "stop after N models (0 = all)");
  s->add_option("--format", solve.format, "plain or clingo")->check(CLI::IsMember({"plain", "clingo"}));
  s->add_option("--filter", solve.filter, "only print atoms of pred/arity (repeatable)");
  add_solver_flags(s, solve.solver);

  EvalFlags eval;
  auto* e = app.add_subcommand("eval", "cross-validate FOLD on a tabular dataset");
  e->add_option("csv", eval.csv, "data file")->required();
  e->add_option("schema", eval.schema, "JSON schema")->required();
  e->add_option("--folds", eval.folds, "number of folds");
  e->add_option("--seed", eval.seed, "shuffle seed");
  e->add_option("--max-clause-len", eval.max_clause_len, "body literal limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : kInputFailure;
  }

  try {
    if (*l) return cmd_learn(learn);
    if (*s) return cmd_solve(solve);
    if (*e) return cmd_eval(eval);
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputFailure;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputFailure;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputFailure;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kLearnerFailure;
  }
  return 0;
}
