#include "hyb/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace hyb {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

enum class Tok { ident, number, keyword, symbol, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double number = 0.0;
  std::uint32_t line = 1, column = 1, end_line = 1, end_column = 1;
};

bool is_keyword(std::string_view s) {
  static constexpr std::string_view kws[] = {"if", "then", "else", "while", "for", "until", "wait", "true", "false"};
  for (auto k : kws)
    if (k == s) return true;
  return false;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::ident: return "identifier '" + t.text + "'";
    case Tok::number: return "number " + t.text;
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.end_line = line_;
        t.end_column = col_;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = is_keyword(t.text) ? Tok::keyword : Tok::ident;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number(t);
      } else {
        lex_symbol(t);
      }
      t.end_line = line_;
      t.end_column = col_;
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool digit_at(std::size_t i) const { return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i])); }

  void lex_number(Token& t) {
    const std::size_t start = pos_;
    if (src_[pos_] == '-') advance();
    while (digit_at(pos_)) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (digit_at(pos_)) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (digit_at(look)) {
        while (pos_ < look) advance();
        while (digit_at(pos_)) advance();
      }
    }
    t.kind = Tok::number;
    t.text = std::string(src_.substr(start, pos_ - start));
    const char* first = t.text.data();
    if (*first == '-') {
      auto [p, ec] = std::from_chars(first + 1, first + t.text.size(), t.number);
      if (ec != std::errc{} || p != first + t.text.size()) throw ParseError("malformed number " + t.text, t.line, t.column);
      t.number = -t.number;
    } else {
      auto [p, ec] = std::from_chars(first, first + t.text.size(), t.number);
      if (ec != std::errc{} || p != first + t.text.size()) throw ParseError("malformed number " + t.text, t.line, t.column);
    }
  }

  void lex_symbol(Token& t) {
    static constexpr std::string_view two[] = {":=", "<=", ">=", "&&", "||"};
    t.kind = Tok::symbol;
    const std::string_view rest = src_.substr(pos_);
    for (auto s : two) {
      if (rest.substr(0, 2) == s) {
        t.text = std::string(s);
        advance();
        advance();
        return;
      }
    }
    const char c = src_[pos_];
    switch (c) {
      case '\'': case '=': case ',': case ';': case '{': case '}': case '[': case ']':
      case '(': case ')': case '+': case '*': case '!':
        t.text = std::string(1, c);
        advance();
        return;
      case '<':
      case '>':
        throw ParseError(std::string("strict comparison '") + c + "' is not supported; use '" + c + "='", line_, col_,
                         {"'<='", "'>='"});
      case '-':
        throw ParseError("there is no subtraction; write a sum with a negative coefficient, e.g. x + -1*y", line_, col_,
                         {"number"});
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, VariableSet vars) : toks_(std::move(toks)), vars_(std::move(vars)) {}

  ProgPtr program(bool top_level) {
    std::vector<ProgPtr> parts;
    parts.push_back(stmt());
    while (is_sym(";")) {
      next();
      if (top_level ? peek().kind == Tok::end : is_sym("}")) break;
      parts.push_back(stmt());
    }
    if (top_level && peek().kind != Tok::end) fail({"';'", "end of input"});
    return make_sequence(parts);
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    last_ = &t;
    return t;
  }
  bool is_sym(std::string_view s) const { return peek().kind == Tok::symbol && peek().text == s; }
  bool is_kw(std::string_view s) const { return peek().kind == Tok::keyword && peek().text == s; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string message = "expected " + join_expected(expected) + " but found " + describe(t);
    throw ParseError(std::move(message), t.line, t.column, std::move(expected));
  }

  void expect_sym(std::string_view s) {
    if (!is_sym(s)) fail({"'" + std::string(s) + "'"});
    next();
  }
  void expect_kw(std::string_view s) {
    if (!is_kw(s)) fail({"'" + std::string(s) + "'"});
    next();
  }

  SourceSpan from(const Token& start) const {
    return SourceSpan{start.line, start.column, last_ ? last_->end_line : start.end_line,
                      last_ ? last_->end_column : start.end_column};
  }

  Var variable(const Token& t) { return *vars_.find(t.text); }

  ProgPtr stmt() {
    const Token start = peek();
    if (is_kw("wait")) {
      next();
      auto dur = lterm();
      return make_atomic(desugar_wait(dur, vars_), from(start));
    }
    if (is_kw("if")) {
      next();
      auto cond = bexpr();
      expect_kw("then");
      expect_sym("{");
      auto p = program(false);
      expect_sym("}");
      expect_kw("else");
      expect_sym("{");
      auto q = program(false);
      expect_sym("}");
      return make_ite(cond, p, q, from(start));
    }
    if (is_kw("while")) {
      next();
      auto cond = bexpr();
      expect_sym("{");
      auto body = program(false);
      expect_sym("}");
      return make_while(cond, body, from(start));
    }
    if (peek().kind != Tok::ident) fail({"identifier", "'wait'", "'if'", "'while'"});
    if (peek(1).kind == Tok::symbol && peek(1).text == ":=") {
      Var x = variable(next());
      next();
      auto rhs = lterm();
      return make_atomic(Assign{x, rhs}, from(start));
    }
    if (peek(1).kind == Tok::symbol && peek(1).text == "'") return differential(start);
    pos_ += 1;
    fail({"':='", "'''"});
  }

  ProgPtr differential(const Token& start) {
    std::vector<Equation> eqs;
    for (;;) {
      if (peek().kind != Tok::ident) fail({"identifier"});
      Var x = variable(next());
      expect_sym("'");
      expect_sym("=");
      eqs.emplace_back(x, lterm());
      if (!is_sym(",")) break;
      next();
    }
    if (is_kw("for")) {
      next();
      auto dur = lterm();
      return make_atomic(DiffFor{std::move(eqs), dur}, from(start));
    }
    if (is_kw("until")) {
      next();
      expect_sym("[");
      if (peek().kind != Tok::number) fail({"number"});
      const Token eps_tok = next();
      expect_sym("]");
      auto psi = bexpr();
      try {
        return desugar_until(std::move(eqs), eps_tok.number, psi, from(start));
      } catch (const NonPositiveEpsilon& e) {
        throw ParseError(e.what(), eps_tok.line, eps_tok.column);
      }
    }
    fail({"','", "'for'", "'until'"});
  }

  LTermPtr term() {
    const Token start = peek();
    if (peek().kind == Tok::number) {
      const double r = next().number;
      if (is_sym("*")) {
        next();
        if (peek().kind != Tok::ident) fail({"identifier"});
        Var x = variable(next());
        return lscaled(r, x, from(start));
      }
      return lconst(r, from(start));
    }
    if (peek().kind == Tok::ident) {
      Var x = variable(next());
      return lscaled(1.0, x, from(start));
    }
    fail({"number", "identifier"});
  }

  LTermPtr lterm() {
    const Token start = peek();
    auto acc = term();
    while (is_sym("+")) {
      next();
      auto rhs = term();
      acc = lsum(acc, rhs, from(start));
    }
    return acc;
  }

  BExprPtr bexpr() {
    const Token start = peek();
    auto acc = conjunction();
    while (is_sym("||")) {
      next();
      auto rhs = conjunction();
      acc = bor(acc, rhs, from(start));
    }
    return acc;
  }

  BExprPtr conjunction() {
    const Token start = peek();
    auto acc = unary();
    while (is_sym("&&")) {
      next();
      auto rhs = unary();
      acc = band(acc, rhs, from(start));
    }
    return acc;
  }

  BExprPtr unary() {
    const Token start = peek();
    if (is_sym("!")) {
      next();
      auto arg = unary();
      return bnot(arg, from(start));
    }
    if (is_kw("true")) {
      next();
      return btrue(from(start));
    }
    if (is_kw("false")) {
      next();
      return bfalse(from(start));
    }
    if (is_sym("(")) {
      next();
      auto inner = bexpr();
      expect_sym(")");
      return inner;
    }
    if (peek().kind != Tok::number && peek().kind != Tok::ident) {
      fail({"'!'", "'('", "'true'", "'false'", "number", "identifier"});
    }
    auto lhs = lterm();
    if (is_sym("<=") || is_sym(">=")) {
      const bool leq = next().text == "<=";
      auto rhs = lterm();
      return leq ? bleq(lhs, rhs, from(start)) : bgeq(lhs, rhs, from(start));
    }
    fail({"'+'", "'<='", "'>='"});
  }

  std::vector<Token> toks_;
  VariableSet vars_;
  std::size_t pos_ = 0;
  const Token* last_ = nullptr;
};

}  // namespace

ParseError::ParseError(std::string message, std::uint32_t line, std::uint32_t column, std::vector<std::string> expected)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(std::move(message)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Program parse(std::string_view source) {
  auto toks = Lexer(source).run();
  VariableSet vars;
  for (const auto& t : toks)
    if (t.kind == Tok::ident) vars.intern(t.text);
  if (toks.front().kind == Tok::end) throw ParseError("empty program", toks.front().line, toks.front().column, {"statement"});
  Parser parser(std::move(toks), vars);
  ProgPtr root = parser.program(true);
  auto diags = well_formed(*root, vars);
  if (!diags.empty()) throw ParseError(diags.front().message, diags.front().span.line, diags.front().span.column);
  return Program{root, vars};
}

Program parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace hyb
