#include "foldasp/task_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "foldasp/error.hpp"
#include "foldasp/parser.hpp"
#include "json.hpp"

namespace foldasp {

namespace {

bool is_directive(const Token& t, std::string_view name) { return t.kind == Token::Kind::Directive && t.text == name; }

PlaceMarker parse_marker(Parser& p) {
  PlaceMarker m;
  if (p.accept_symbol("+")) {
    m.kind = PlaceMarker::Kind::Input;
  } else if (p.accept_symbol("-")) {
    m.kind = PlaceMarker::Kind::Output;
  } else if (p.peek().kind == Token::Kind::Directive) {
    Token d = p.next();
    m.kind = PlaceMarker::Kind::Constant;
    m.type = Symbol::intern(d.text.substr(1));
    return m;
  } else {
    p.fail("expected +type, -type or #domain");
  }
  m.type = Symbol::intern(p.expect_identifier());
  return m;
}

ModeDeclaration parse_mode(Parser& p) {
  ModeDeclaration m;
  m.negated = p.accept_symbol("-");
  m.predicate = Symbol::intern(p.expect_identifier());
  if (p.accept_symbol("(")) {
    do {
      m.args.push_back(parse_marker(p));
    } while (p.accept_symbol(","));
    p.expect_symbol(")");
  }
  p.expect_symbol(".");
  return m;
}

std::size_t parse_count(Parser& p) {
  if (p.peek().kind != Token::Kind::Number) p.fail("expected a number");
  return static_cast<std::size_t>(std::stoull(p.next().text));
}

std::vector<ExampleEntry> parse_entries(Parser& p, bool allow_naf) {
  std::vector<ExampleEntry> out;
  p.expect_symbol("{");
  while (!p.accept_symbol("}")) {
    ExampleEntry e;
    if (p.peek().is(Token::Kind::Identifier, "not") &&
        (p.peek(1).kind == Token::Kind::Identifier || p.peek(1).is_symbol("-"))) {
      if (!allow_naf) p.fail("'not' entries are only allowed in exclusions");
      p.next();
      e.naf = true;
    }
    e.atom = p.parse_atom();
    if (!e.atom.is_ground()) p.fail("example entries must be ground");
    if (!p.accept_symbol(".")) p.accept_symbol(",");
    out.push_back(std::move(e));
  }
  return out;
}

std::string parse_config_value(Parser& p) {
  std::string value;
  const Token& t = p.peek();
  if (t.kind == Token::Kind::Number) {
    Token n = p.next();
    value = n.text;
    const Token& dot = p.peek();
    const Token& frac = p.peek(1);
    if (dot.is_symbol(".") && frac.kind == Token::Kind::Number && frac.line == dot.line &&
        frac.column == dot.column + 1 && dot.line == n.line && dot.column == n.column + n.text.size()) {
      p.next();
      value += "." + p.next().text;
    }
  } else if (t.kind == Token::Kind::Identifier) {
    value = p.next().text;
  } else {
    p.fail("expected a configuration value");
  }
  p.expect_symbol(".");
  return value;
}

void collect_predicates(const Program& p, std::vector<std::pair<Symbol, std::size_t>>& out) {
  for (const Clause& c : p.clauses()) {
    if (c.head()) out.emplace_back(c.head()->predicate(), c.head()->arity());
    for (const Literal& l : c.body())
      if (l.is_atom()) out.emplace_back(l.atom().predicate(), l.atom().arity());
  }
}

void validate(const TaskFile& t) {
  if (t.bias.head_modes.empty()) throw ParseError("task declares no #modeh", 1, 1);
  std::vector<std::pair<Symbol, std::size_t>> known;
  collect_predicates(t.background, known);
  for (const auto* modes : {&t.bias.head_modes, &t.bias.body_modes})
    for (const auto& m : *modes) known.emplace_back(m.predicate, m.args.size());
  auto check = [&](const Atom& a, const std::string& where) {
    auto key = std::make_pair(a.predicate(), a.arity());
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error("unknown predicate " + std::string(a.predicate().name()) + "/" + std::to_string(a.arity()) +
                  " in example " + where);
    }
  };
  for (const auto* list : {&t.pos, &t.neg}) {
    for (const auto& e : *list) {
      for (const auto& x : e.inc) check(x.atom, e.id);
      for (const auto& x : e.exc) check(x.atom, e.id);
    }
  }
  for (const auto* list : {&t.pos_atoms, &t.neg_atoms})
    for (const Atom& a : *list) check(a, a.to_string());
  for (const Signature& s : t.targets) {
    if (!t.bias.head_mode(s)) throw Error("target " + s.to_string() + " has no #modeh declaration");
  }
  Program all = t.background;
  t.background.check_arities();
  (void)all;
}

}  // namespace

std::vector<Signature> TaskFile::target_signatures() const {
  if (!targets.empty()) return targets;
  std::vector<Signature> out;
  for (const auto& m : bias.head_modes) out.push_back(m.signature());
  return out;
}

std::string TaskFile::config_or(const std::string& key, const std::string& fallback) const {
  auto it = config.find(key);
  return it == config.end() ? fallback : it->second;
}

TaskFile parse_task(std::string_view text) {
  TaskFile t;
  Parser p(text);
  std::size_t auto_id = 0;
  while (!p.at_end()) {
    const Token d = p.peek();
    if (d.kind != Token::Kind::Directive) p.fail("expected a directive");
    p.next();
    if (d.text == "#background") {
      t.background.append(p.parse_clauses());
      if (!is_directive(p.peek(), "#end")) p.fail("expected #end");
      p.next();
    } else if (d.text == "#modeh") {
      t.bias.head_modes.push_back(parse_mode(p));
    } else if (d.text == "#modeb") {
      t.bias.body_modes.push_back(parse_mode(p));
    } else if (d.text == "#numeric") {
      NumericSpec s;
      s.predicate = Symbol::intern(p.expect_identifier());
      p.expect_symbol("/");
      s.position = parse_count(p);
      p.expect_symbol(".");
      for (const auto* modes : {&t.bias.body_modes, &t.bias.head_modes})
        for (const auto& m : *modes)
          if (m.predicate == s.predicate) s.arity = m.args.size();
      if (s.arity == 0) p.fail_at(d, "#numeric must follow the mode declaring " + std::string(s.predicate.name()));
      if (s.position == 0 || s.position > s.arity) p.fail_at(d, "#numeric position out of range");
      t.bias.numeric.push_back(s);
    } else if (d.text == "#domain") {
      std::string name = p.expect_identifier();
      p.expect_symbol("=");
      p.expect_symbol("{");
      std::vector<Term> values;
      if (!p.peek().is_symbol("}")) {
        do {
          values.push_back(p.parse_term());
        } while (p.accept_symbol(","));
      }
      p.expect_symbol("}");
      p.expect_symbol(".");
      t.bias.domains[name] = std::move(values);
    } else if (d.text == "#target") {
      Signature s;
      s.negated = p.accept_symbol("-");
      s.name = Symbol::intern(p.expect_identifier());
      p.expect_symbol("/");
      s.arity = parse_count(p);
      p.expect_symbol(".");
      t.targets.push_back(s);
    } else if (d.text == "#config") {
      std::string key = p.expect_identifier();
      p.expect_symbol("=");
      t.config[key] = parse_config_value(p);
    } else if (d.text == "#pos" || d.text == "#neg") {
      const bool positive = d.text == "#pos";
      const bool interpretation =
          (p.peek().kind == Token::Kind::Identifier &&
           (p.peek(1).is(Token::Kind::Identifier, "inc") || p.peek(1).is(Token::Kind::Identifier, "exc"))) ||
          ((p.peek().is(Token::Kind::Identifier, "inc") || p.peek().is(Token::Kind::Identifier, "exc")) &&
           p.peek(1).is_symbol("{"));
      if (!interpretation) {
        Atom a = p.parse_atom();
        if (!a.is_ground()) p.fail_at(d, "example atoms must be ground");
        p.expect_symbol(".");
        (positive ? t.pos_atoms : t.neg_atoms).push_back(std::move(a));
        continue;
      }
      PartialInterpretation e;
      if (!p.peek(1).is_symbol("{")) {
        e.id = p.expect_identifier();
      } else {
        e.id = (positive ? "p" : "n") + std::to_string(++auto_id);
      }
      bool seen_inc = false;
      bool seen_exc = false;
      while (p.peek().is(Token::Kind::Identifier, "inc") || p.peek().is(Token::Kind::Identifier, "exc")) {
        bool inc = p.next().text == "inc";
        if ((inc && seen_inc) || (!inc && seen_exc)) p.fail("duplicate section in example " + e.id);
        (inc ? seen_inc : seen_exc) = true;
        auto entries = parse_entries(p, !inc);
        (inc ? e.inc : e.exc) = std::move(entries);
      }
      (positive ? t.pos : t.neg).push_back(std::move(e));
    } else {
      p.fail_at(d, "unknown directive " + d.text);
    }
  }
  validate(t);
  return t;
}

XFoldTask xfold_task(const TaskFile& t) { return {t.background, t.bias, t.pos, t.neg, t.targets}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TaskFile load_task(const std::string& path) { return parse_task(read_file(path)); }

std::string serialize_task(const TaskFile& t) {
  std::ostringstream out;
  out << "#background\n" << print_program(t.background) << "#end\n";
  for (const auto& [name, values] : t.bias.domains) {
    out << "#domain " << name << " = {";
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i].to_string();
    out << "}.\n";
  }
  for (const auto& m : t.bias.head_modes) out << "#modeh " << m.to_string() << ".\n";
  for (const auto& m : t.bias.body_modes) out << "#modeb " << m.to_string() << ".\n";
  for (const auto& s : t.bias.numeric) out << "#numeric " << s.predicate.name() << "/" << s.position << ".\n";
  for (const auto& s : t.targets) out << "#target " << s.to_string() << ".\n";
  for (const auto& [k, v] : t.config) out << "#config " << k << " = " << v << ".\n";
  for (const Atom& a : t.pos_atoms) out << "#pos " << a.to_string() << ".\n";
  for (const Atom& a : t.neg_atoms) out << "#neg " << a.to_string() << ".\n";
  auto entries = [&](const std::vector<ExampleEntry>& es) {
    out << "{";
    for (const auto& e : es) out << " " << e.to_string() << ".";
    out << " }";
  };
  for (const auto* list : {&t.pos, &t.neg}) {
    for (const auto& e : *list) {
      out << (list == &t.pos ? "#pos " : "#neg ") << e.id << " inc ";
      entries(e.inc);
      out << " exc ";
      entries(e.exc);
      out << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------- tabular

namespace {

std::vector<std::string> split_row(std::string_view line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  for (auto& s : cells) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return cells;
}

std::string identifier(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out += static_cast<char>(std::tolower(u));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty() || !std::islower(static_cast<unsigned char>(out.front()))) out = "v" + out;
  return out;
}

}  // namespace

TabularData load_tabular_text(std::string_view csv, std::string_view schema_json) {
  nlohmann::json schema;
  try {
    schema = nlohmann::json::parse(schema_json);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("invalid schema: ") + e.what());
  }
  const std::string delim = schema.value("delimiter", std::string(","));
  if (delim.size() != 1) throw IoError("delimiter must be a single character");
  const double scale = schema.value("scale", 1.0);
  const std::string positive = schema.value("positive", std::string("yes"));
  if (!schema.contains("columns") || !schema["columns"].is_object()) throw IoError("schema needs a columns object");

  std::vector<std::string> lines;
  {
    std::string line;
    std::istringstream in{std::string(csv)};
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(line);
    }
  }
  if (lines.empty()) throw IoError("tabular file has no header");
  const std::vector<std::string> header = split_row(lines.front(), delim[0]);

  enum class Kind { Categorical, Numeric, Label, Ignore };
  std::vector<Kind> kinds;
  std::size_t label = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string k = schema["columns"].value(header[i], std::string("ignore"));
    if (k == "categorical") {
      kinds.push_back(Kind::Categorical);
    } else if (k == "numeric") {
      kinds.push_back(Kind::Numeric);
    } else if (k == "label") {
      if (label != header.size()) throw IoError("schema declares more than one label column");
      label = i;
      kinds.push_back(Kind::Label);
    } else if (k == "ignore") {
      kinds.push_back(Kind::Ignore);
    } else {
      throw IoError("unknown column kind '" + k + "' for column " + header[i]);
    }
  }
  if (label == header.size()) throw IoError("schema declares no label column");

  TabularData data;
  const std::string target = identifier(schema.value("target", header[label]));
  const Symbol row_type = Symbol::intern("row");
  ModeDeclaration head;
  head.predicate = Symbol::intern(target);
  head.args = {{PlaceMarker::Kind::Input, row_type}};
  data.bias.head_modes.push_back(head);
  data.goal = head_atom(head);

  std::vector<std::string> seen_modes;
  auto add_mode = [&](const std::string& pred, bool numeric) {
    if (std::find(seen_modes.begin(), seen_modes.end(), pred) != seen_modes.end()) return;
    seen_modes.push_back(pred);
    ModeDeclaration m;
    m.predicate = Symbol::intern(pred);
    m.args.push_back({PlaceMarker::Kind::Input, row_type});
    if (numeric) {
      m.args.push_back({PlaceMarker::Kind::Output, Symbol::intern("num")});
      data.bias.numeric.push_back({m.predicate, 2, 2});
    }
    data.bias.body_modes.push_back(m);
  };

  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split_row(lines[r], delim[0]);
    if (cells.size() != header.size()) {
      throw IoError("row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(header.size()));
    }
    const Term id = Term::constant("r" + std::to_string(r));
    data.facts.add(Clause::fact(Atom(row_type, {id})));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& v = cells[i];
      switch (kinds[i]) {
        case Kind::Categorical: {
          if (v.empty() || v == "?") break;
          std::string pred = identifier(header[i]) + "_" + identifier(v);
          add_mode(pred, false);
          data.facts.add(Clause::fact(Atom(pred, {id})));
          break;
        }
        case Kind::Numeric: {
          if (v.empty() || v == "?") break;
          char* end = nullptr;
          double x = std::strtod(v.c_str(), &end);
          if (end == v.c_str() || *end != '\0') {
            throw IoError("row " + std::to_string(r + 1) + ": cannot parse '" + v + "' as a number in column " +
                          header[i]);
          }
          std::string pred = identifier(header[i]);
          add_mode(pred, true);
          data.facts.add(Clause::fact(Atom(pred, {id, Term::number(std::llround(x * scale))})));
          break;
        }
        case Kind::Label:
          (v == positive ? data.pos : data.neg).push_back(Atom(target, {id}));
          break;
        case Kind::Ignore: break;
      }
    }
    ++data.rows;
  }
  return data;
}

TabularData load_tabular(const std::string& csv_path, const std::string& schema_path) {
  return load_tabular_text(read_file(csv_path), read_file(schema_path));
}

void export_program(const Program& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << print_program(p);
  if (!out) throw IoError("failed writing " + path);
}

// ---------------------------------------------------------------- external solver

std::string to_solver_text(const GroundProgram& g) {
  std::string out;
  for (const GroundRule& r : g.rules) {
    if (r.head) out += g.atoms.atom(*r.head).to_string();
    if (!r.pos.empty() || !r.neg.empty()) {
      out += r.head ? " :- " : ":- ";
      bool first = true;
      for (int a : r.pos) {
        out += (first ? "" : ", ") + g.atoms.atom(a).to_string();
        first = false;
      }
      for (int a : r.neg) {
        out += (first ? "not " : ", not ") + g.atoms.atom(a).to_string();
        first = false;
      }
    }
    out += ".\n";
  }
  // Keep every atom in the solver's signature so that output is comparable.
  return out;
}

std::vector<AnswerSet> parse_solver_output(std::string_view output) {
  std::vector<AnswerSet> models;
  std::istringstream in{std::string(output)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("Answer:", 0) != 0) continue;
    std::string atoms;
    if (!std::getline(in, atoms)) throw Error("solver output ends after '" + line + "'");
    AnswerSet m;
    std::istringstream words(atoms);
    std::string w;
    while (words >> w) {
      try {
        m.atoms.insert(parse_atom(w));
      } catch (const ParseError& e) {
        throw Error("cannot parse solver atom '" + w + "': " + e.what());
      }
    }
    models.push_back(std::move(m));
  }
  return models;
}

std::vector<AnswerSet> external_answer_sets(const GroundProgram& g, std::size_t cap, const std::string& command) {
  namespace fs = std::filesystem;
  std::random_device rd;
  fs::path file = fs::temp_directory_path() / ("foldasp-" + std::to_string(rd()) + ".lp");
  {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    out << to_solver_text(g);
  }
  std::string cmd = command;
  auto replace = [&](const std::string& key, const std::string& value) {
    bool found = false;
    for (std::size_t at = cmd.find(key); at != std::string::npos; at = cmd.find(key, at + value.size())) {
      cmd.replace(at, key.size(), value);
      found = true;
    }
    return found;
  };
  replace("{models}", std::to_string(cap));
  if (!replace("{file}", "'" + file.string() + "'")) cmd += " '" + file.string() + "'";
  cmd += " 2>/dev/null";

  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    fs::remove(file);
    throw IoError("cannot start external solver: " + command);
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  int status = pclose(pipe);
  fs::remove(file);
  // Conventional solvers exit with 10/20/30 on success; 127 means not found.
  if (status == -1 || (WIFEXITED(status) && WEXITSTATUS(status) == 127)) {
    throw IoError("external solver could not be run: " + command);
  }
  auto models = parse_solver_output(output);
  if (models.empty() && output.find("UNSATISFIABLE") == std::string::npos &&
      output.find("SATISFIABLE") == std::string::npos) {
    throw Error("external solver produced no recognizable output");
  }
  std::sort(models.begin(), models.end(), [](const AnswerSet& a, const AnswerSet& b) { return a.atoms < b.atoms; });
  if (models.size() > cap) models.resize(cap);
  return models;
}

std::vector<AnswerSet> external_answer_sets(const Program& p, std::size_t cap, const std::string& command) {
  SolveOptions opts;
  GroundProgram g = ground(p);
  // Injected consistency constraints are part of the program handed over.
  opts.use_external = true;
  opts.external = [&](const GroundProgram& prepared, std::size_t c) { return external_answer_sets(prepared, c, command); };
  return answer_sets(g, cap, opts);
}

ExternalSolver make_external_solver(const std::string& command) {
  return [command](const GroundProgram& g, std::size_t cap) { return external_answer_sets(g, cap, command); };
}

std::string cross_check(const Program& p, std::size_t cap, const std::string& command) {
  auto builtin = answer_sets(p, cap);
  auto external = external_answer_sets(p, cap, command);
  auto key = [](std::vector<AnswerSet> v) {
    std::sort(v.begin(), v.end(), [](const AnswerSet& a, const AnswerSet& b) { return a.atoms < b.atoms; });
    return v;
  };
  builtin = key(builtin);
  external = key(external);
  if (builtin == external) return {};
  std::ostringstream msg;
  msg << "built-in engine found " << builtin.size() << " model(s), external solver " << external.size();
  for (const auto& m : builtin)
    if (std::find(external.begin(), external.end(), m) == external.end()) {
      msg << "; only built-in: {" << m.to_string() << "}";
      break;
    }
  for (const auto& m : external)
    if (std::find(builtin.begin(), builtin.end(), m) == builtin.end()) {
      msg << "; only external: {" << m.to_string() << "}";
      break;
    }
  return msg.str();
}

}  // namespace foldasp
