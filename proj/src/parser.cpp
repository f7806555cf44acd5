#include "foldasp/parser.hpp"

#include <cctype>
#include <charconv>

#include "foldasp/error.hpp"

namespace foldasp {

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::optional<CompareOp> compare_op(const Token& t) {
  if (t.kind != Token::Kind::Symbol) return std::nullopt;
  if (t.text == "=") return CompareOp::Eq;
  if (t.text == "!=") return CompareOp::Ne;
  if (t.text == "<") return CompareOp::Lt;
  if (t.text == "<=") return CompareOp::Le;
  if (t.text == ">") return CompareOp::Gt;
  if (t.text == ">=") return CompareOp::Ge;
  return std::nullopt;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    std::size_t start = i;
    if (std::islower(static_cast<unsigned char>(c))) {
      while (i < text.size() && ident_char(text[i])) advance(1);
      tok.kind = Token::Kind::Identifier;
    } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() && ident_char(text[i])) advance(1);
      tok.kind = Token::Kind::Variable;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance(1);
      tok.kind = Token::Kind::Number;
    } else if (c == '#') {
      advance(1);
      while (i < text.size() && ident_char(text[i])) advance(1);
      tok.kind = Token::Kind::Directive;
      if (i - start == 1) throw ParseError("empty directive", tok.line, tok.column);
    } else {
      static constexpr std::string_view two[] = {":-", "!=", "<=", ">="};
      std::size_t len = 1;
      for (auto t : two)
        if (text.substr(i, 2) == t) len = 2;
      static constexpr std::string_view singles = "().,[]{}=<>+-/;";
      if (len == 1 && singles.find(c) == std::string_view::npos) {
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance(len);
      tok.kind = Token::Kind::Symbol;
    }
    tok.text = std::string(text.substr(start, i - start));
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const Token& Parser::peek(std::size_t ahead) const {
  std::size_t at = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[at];
}

Token Parser::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool Parser::accept_symbol(std::string_view s) {
  if (!peek().is_symbol(s)) return false;
  next();
  return true;
}

void Parser::expect_symbol(std::string_view s) {
  if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
}

std::string Parser::expect_identifier() {
  if (peek().kind != Token::Kind::Identifier) fail("expected identifier");
  return next().text;
}

void Parser::fail(const std::string& message) const { fail_at(peek(), message); }

void Parser::fail_at(const Token& where, const std::string& message) const {
  std::string found = where.kind == Token::Kind::End ? "end of input" : "'" + where.text + "'";
  throw ParseError(message + ", found " + found, where.line, where.column);
}

Term Parser::parse_term() {
  const Token& t = peek();
  switch (t.kind) {
    case Token::Kind::Identifier: return Term::constant(next().text);
    case Token::Kind::Variable: return Term::variable(next().text);
    case Token::Kind::Number: {
      Token n = next();
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
      if (ec != std::errc()) fail_at(n, "integer out of range");
      return Term::number(v);
    }
    case Token::Kind::Symbol:
      if (t.text == "-" && peek(1).kind == Token::Kind::Number) {
        next();
        Term n = parse_term();
        return Term::number(-n.value());
      }
      break;
    default: break;
  }
  fail("expected term");
}

std::vector<Term> Parser::parse_args() {
  std::vector<Term> args;
  if (!accept_symbol("(")) return args;
  do {
    args.push_back(parse_term());
  } while (accept_symbol(","));
  expect_symbol(")");
  return args;
}

Atom Parser::parse_atom() {
  bool negated = accept_symbol("-");
  std::string name = expect_identifier();
  return Atom(name, parse_args(), negated);
}

Expr Parser::parse_expr() {
  Expr e = Expr(parse_term());
  while (peek().is_symbol("+") || peek().is_symbol("-")) {
    Expr::Op op = next().text == "+" ? Expr::Op::Add : Expr::Op::Sub;
    e = Expr(op, std::move(e), Expr(parse_term()));
  }
  return e;
}

Literal Parser::parse_literal() {
  const Token& t = peek();
  if (t.is(Token::Kind::Identifier, "not") &&
      (peek(1).kind == Token::Kind::Identifier || peek(1).is_symbol("-"))) {
    next();
    return Literal(parse_atom(), true);
  }
  if (t.is_symbol("-") && peek(1).kind == Token::Kind::Identifier) return Literal(parse_atom());
  if (t.is(Token::Kind::Identifier, "member") && peek(1).is_symbol("(")) {
    next();
    next();
    Term element = parse_term();
    expect_symbol(",");
    expect_symbol("[");
    std::vector<Term> list;
    if (!peek().is_symbol("]")) {
      do {
        list.push_back(parse_term());
      } while (accept_symbol(","));
    }
    expect_symbol("]");
    expect_symbol(")");
    return Literal(Membership{element, std::move(list)});
  }
  if (t.kind == Token::Kind::Identifier && peek(1).is_symbol("(")) return Literal(parse_atom());
  if (t.kind == Token::Kind::Identifier && !compare_op(peek(1)) && !peek(1).is_symbol("+") &&
      !peek(1).is_symbol("-")) {
    return Literal(parse_atom());
  }
  Expr lhs = parse_expr();
  auto op = compare_op(peek());
  if (!op) fail("expected comparison operator");
  next();
  Expr rhs = parse_expr();
  return Literal(Comparison{*op, std::move(lhs), std::move(rhs)});
}

Clause Parser::parse_clause() {
  std::optional<Atom> head;
  if (!peek().is_symbol(":-")) head = parse_atom();
  std::vector<Literal> body;
  if (accept_symbol(":-")) {
    if (peek().is(Token::Kind::Identifier, "true") && peek(1).is_symbol(".")) {
      next();
    } else {
      do {
        body.push_back(parse_literal());
      } while (accept_symbol(","));
    }
    if (!head && body.empty()) fail("constraint with empty body");
  }
  expect_symbol(".");
  return Clause(std::move(head), std::move(body));
}

Program Parser::parse_clauses() {
  Program p;
  while (!at_end() && peek().kind != Token::Kind::Directive) p.add(parse_clause());
  return p;
}

Program parse_program(std::string_view text) {
  Parser parser(text);
  Program p = parser.parse_clauses();
  if (!parser.at_end()) parser.fail("unexpected directive in program");
  p.check_arities();
  return p;
}

Clause parse_clause(std::string_view text) {
  Parser parser(text);
  Clause c = parser.parse_clause();
  if (!parser.at_end()) parser.fail("trailing input");
  return c;
}

Atom parse_atom(std::string_view text) {
  Parser parser(text);
  Atom a = parser.parse_atom();
  if (!parser.at_end()) parser.fail("trailing input");
  return a;
}

Literal parse_literal(std::string_view text) {
  Parser parser(text);
  Literal l = parser.parse_literal();
  if (!parser.at_end()) parser.fail("trailing input");
  return l;
}

}  // namespace foldasp
