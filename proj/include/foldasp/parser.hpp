#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "foldasp/logic.hpp"

namespace foldasp {

struct Token {
  enum class Kind { Identifier, Variable, Number, Symbol, Directive, End };

  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  bool is_symbol(std::string_view t) const { return is(Kind::Symbol, t); }
};

/// Splits program / task text into tokens. `%` starts a line comment;
/// `#name` is a single directive token.
std::vector<Token> tokenize(std::string_view text);

/// Recursive-descent reader over a token stream. Task-file parsing drives
/// the same reader, so the clause grammar lives in exactly one place.
class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool accept_symbol(std::string_view s);
  void expect_symbol(std::string_view s);
  std::string expect_identifier();
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& where, const std::string& message) const;

  Term parse_term();
  Atom parse_atom();
  Literal parse_literal();
  /// Clause terminated by `.`; a body of `true` is the empty body.
  Clause parse_clause();
  /// Clauses up to end of input or the first directive token.
  Program parse_clauses();

 private:
  Expr parse_expr();
  std::vector<Term> parse_args();

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Parses a full program and checks predicate arities.
Program parse_program(std::string_view text);
Clause parse_clause(std::string_view text);
Atom parse_atom(std::string_view text);
Literal parse_literal(std::string_view text);

}  // namespace foldasp
