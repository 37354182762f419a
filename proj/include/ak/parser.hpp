/**
 * parser.hpp
 *
 * Recursive-descent parser and serializers for the textual DSL.
 *
 *   domain     := { statement }
 *   statement  := "initially" literal "."
 *               | "executable" IDENT [ "if" literals ] "."
 *               | IDENT "causes" literal [ "if" literals ] "."
 *               | IDENT "determines" IDENT "."
 *   plan       := item { ";" item }
 *   item       := "[]" | IDENT | "case" branch { branch } "endcase"
 *   branch     := literals "->" plan "."
 *   triple     := set plan "{" ( "KW" literal | [ literals ] ) "}" [ "." ]
 *   query      := "knows" goal "after" plan [ "." ]
 *               | "kwhether" literal "after" plan [ "." ]
 *   set        := "{" [ literals ] "}"
 *   goal       := set | literals
 *   literals   := literal { "," literal }
 *   literal    := { "~" } IDENT
 *   IDENT      := [a-z][a-zA-Z0-9_]*
 *
 * Whitespace and "//" line comments are ignored.
 */

#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ak/domain.hpp"
#include "ak/judgment.hpp"
#include "ak/literal.hpp"
#include "ak/plan.hpp"
#include "ak/result.hpp"

namespace ak {

/// 1-based line and column of the first offending character.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
  /// Byte offset into the input; never past its end.
  std::size_t offset = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
  enum class Kind {
    kSyntax,
    kUnknownKeyword,
    kEmptyPrecondition,
    kEmptyCase,
    kInconsistentGuard,
    kInconsistentSet,
    kTooDeep,
  };

  Kind kind = Kind::kSyntax;
  std::string message;
  SourceSpan span;

  /// "line:column: message"
  std::string str() const {
    return std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message;
  }
};

inline const char* to_string(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::kSyntax:
      return "SyntaxError";
    case ParseError::Kind::kUnknownKeyword:
      return "UnknownKeyword";
    case ParseError::Kind::kEmptyPrecondition:
      return "EmptyPrecondition";
    case ParseError::Kind::kEmptyCase:
      return "EmptyCase";
    case ParseError::Kind::kInconsistentGuard:
      return "InconsistentGuard";
    case ParseError::Kind::kInconsistentSet:
      return "InconsistentSet";
    case ParseError::Kind::kTooDeep:
      return "TooDeep";
  }
  return "?";
}

/// Contents of a query file: a triple or a knowledge query.
using QueryFile = std::variant<Judgment, Query>;

namespace detail {

enum class Tok { kIdent, kKeyword, kKW, kTilde, kComma, kDot, kSemi, kArrow, kLBrace, kRBrace, kEmptyPlan, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
  std::size_t length;
};

inline bool is_keyword(std::string_view s) {
  static constexpr std::string_view kKeywords[] = {"initially", "causes", "if",       "executable", "determines",
                                                   "case",      "endcase", "knows",   "kwhether",   "after"};
  for (auto k : kKeywords)
    if (k == s) return true;
  return false;
}

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::kIdent:
      return "identifier";
    case Tok::kKeyword:
      return "keyword";
    case Tok::kKW:
      return "'KW'";
    case Tok::kTilde:
      return "'~'";
    case Tok::kComma:
      return "','";
    case Tok::kDot:
      return "'.'";
    case Tok::kSemi:
      return "';'";
    case Tok::kArrow:
      return "'->'";
    case Tok::kLBrace:
      return "'{'";
    case Tok::kRBrace:
      return "'}'";
    case Tok::kEmptyPlan:
      return "'[]'";
    case Tok::kEnd:
      return "end of input";
  }
  return "?";
}

class Parser {
 public:
  static constexpr std::size_t kMaxDepth = 200;

  explicit Parser(std::string_view text) : text_(text) {}

  Result<std::vector<Proposition>, ParseError> domain() {
    if (!lex()) return unexpected(error_);
    std::vector<Proposition> props;
    while (peek().kind != Tok::kEnd) {
      auto prop = statement();
      if (!prop) return unexpected(error_);
      props.push_back(std::move(*prop));
    }
    return props;
  }

  Result<Plan, ParseError> whole_plan() {
    if (!lex()) return unexpected(error_);
    auto c = plan(0);
    if (!c) return unexpected(error_);
    accept(Tok::kDot);
    if (!expect_end()) return unexpected(error_);
    return normalize(*c);
  }

  Result<LiteralSet, ParseError> whole_literal_set() {
    if (!lex()) return unexpected(error_);
    std::optional<LiteralSet> xs;
    if (peek().kind == Tok::kLBrace) {
      xs = braced_set();
    } else if (peek().kind == Tok::kEnd) {
      xs = LiteralSet();
    } else {
      const std::size_t start = peek().offset;
      xs = literals();
      if (xs && !xs->consistent()) {
        fail_at(ParseError::Kind::kInconsistentSet, start, peek().offset - start,
                "literal set " + xs->str() + " is inconsistent");
        return unexpected(error_);
      }
    }
    if (!xs || !expect_end()) return unexpected(error_);
    return *xs;
  }

  Result<Literal, ParseError> whole_literal() {
    if (!lex()) return unexpected(error_);
    auto p = literal();
    if (!p || !expect_end()) return unexpected(error_);
    return *p;
  }

  Result<Judgment, ParseError> whole_triple() {
    if (!lex()) return unexpected(error_);
    auto j = triple();
    if (!j) return unexpected(error_);
    accept(Tok::kDot);
    if (!expect_end()) return unexpected(error_);
    return *j;
  }

  Result<QueryFile, ParseError> whole_query_file() {
    if (!lex()) return unexpected(error_);
    std::optional<QueryFile> out;
    if (peek().kind == Tok::kLBrace) {
      if (auto j = triple()) out = std::move(*j);
    } else if (auto q = query()) {
      out = std::move(*q);
    }
    if (!out) return unexpected(error_);
    accept(Tok::kDot);
    if (!expect_end()) return unexpected(error_);
    return *out;
  }

 private:
  // ---------------------------------------------------------------- lexing

  bool lex() {
    std::size_t i = 0;
    const std::size_t n = text_.size();
    auto push = [&](Tok k, std::size_t start, std::size_t len) {
      tokens_.push_back({k, std::string(text_.substr(start, len)), start, len});
    };
    while (i < n) {
      const unsigned char ch = static_cast<unsigned char>(text_[i]);
      if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        ++i;
      } else if (ch == '/' && i + 1 < n && text_[i + 1] == '/') {
        while (i < n && text_[i] != '\n') ++i;
      } else if (std::islower(ch)) {
        std::size_t j = i + 1;
        while (j < n && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        std::string_view word = text_.substr(i, j - i);
        push(is_keyword(word) ? Tok::kKeyword : Tok::kIdent, i, j - i);
        i = j;
      } else if (std::isupper(ch)) {
        std::size_t j = i + 1;
        while (j < n && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        if (text_.substr(i, j - i) != "KW") {
          return fail_at(ParseError::Kind::kSyntax, i, j - i,
                         "identifiers must start with a lowercase letter: '" + std::string(text_.substr(i, j - i)) +
                             "'");
        }
        push(Tok::kKW, i, j - i);
        i = j;
      } else if (ch == '[') {
        std::size_t j = i + 1;
        while (j < n && (text_[j] == ' ' || text_[j] == '\t')) ++j;
        if (j >= n || text_[j] != ']') return fail_at(ParseError::Kind::kSyntax, i, 1, "expected ']' after '['");
        push(Tok::kEmptyPlan, i, j + 1 - i);
        i = j + 1;
      } else if (ch == '-') {
        if (i + 1 >= n || text_[i + 1] != '>') return fail_at(ParseError::Kind::kSyntax, i, 1, "expected '->'");
        push(Tok::kArrow, i, 2);
        i += 2;
      } else {
        Tok k;
        switch (ch) {
          case '~':
            k = Tok::kTilde;
            break;
          case ',':
            k = Tok::kComma;
            break;
          case '.':
            k = Tok::kDot;
            break;
          case ';':
            k = Tok::kSemi;
            break;
          case '{':
            k = Tok::kLBrace;
            break;
          case '}':
            k = Tok::kRBrace;
            break;
          default: {
            std::string shown = std::isprint(ch) ? std::string(1, static_cast<char>(ch)) : "\\x" + hex(ch);
            return fail_at(ParseError::Kind::kSyntax, i, 1, "unexpected character '" + shown + "'");
          }
        }
        push(k, i, 1);
        ++i;
      }
    }
    tokens_.push_back({Tok::kEnd, "", n, 0});
    return true;
  }

  static std::string hex(unsigned char ch) {
    static const char* kHex = "0123456789abcdef";
    return {kHex[ch >> 4], kHex[ch & 0xF]};
  }

  // --------------------------------------------------------------- helpers

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }

  bool accept_keyword(std::string_view kw) {
    if (peek().kind != Tok::kKeyword || peek().text != kw) return false;
    next();
    return true;
  }

  bool is_keyword_token(std::string_view kw) const { return peek().kind == Tok::kKeyword && peek().text == kw; }

  SourceSpan span_at(std::size_t offset, std::size_t length) const {
    SourceSpan s;
    s.offset = std::min(offset, text_.size());
    s.length = length;
    for (std::size_t i = 0; i < s.offset; ++i) {
      if (text_[i] == '\n') {
        ++s.line;
        s.column = 1;
      } else {
        ++s.column;
      }
    }
    return s;
  }

  bool fail_at(ParseError::Kind kind, std::size_t offset, std::size_t length, std::string msg) {
    error_ = {kind, std::move(msg), span_at(offset, length)};
    return false;
  }

  bool fail(ParseError::Kind kind, const Token& t, std::string msg) {
    return fail_at(kind, t.offset, t.length, std::move(msg));
  }

  bool unexpected_token(const std::string& wanted) {
    const Token& t = peek();
    std::string got = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    return fail(ParseError::Kind::kSyntax, t, "expected " + wanted + ", found " + got);
  }

  bool expect(Tok k) {
    if (accept(k)) return true;
    return unexpected_token(describe(k));
  }

  bool expect_keyword(std::string_view kw) {
    if (accept_keyword(kw)) return true;
    return unexpected_token("'" + std::string(kw) + "'");
  }

  bool expect_end() {
    if (peek().kind == Tok::kEnd) return true;
    return unexpected_token("end of input");
  }

  std::optional<std::string> identifier(const char* what) {
    if (peek().kind != Tok::kIdent) {
      unexpected_token(what);
      return std::nullopt;
    }
    return next().text;
  }

  // ---------------------------------------------------------- productions

  std::optional<Literal> literal() {
    bool positive = true;
    while (accept(Tok::kTilde)) positive = !positive;
    auto name = identifier("fluent literal");
    if (!name) return std::nullopt;
    return Literal(std::move(*name), positive);
  }

  std::optional<LiteralSet> literals() {
    std::vector<Literal> out;
    do {
      auto p = literal();
      if (!p) return std::nullopt;
      out.push_back(std::move(*p));
    } while (accept(Tok::kComma));
    return LiteralSet(std::move(out));
  }

  /// "{" [literals] "}", required to be consistent.
  std::optional<LiteralSet> braced_set() {
    const std::size_t start = peek().offset;
    if (!expect(Tok::kLBrace)) return std::nullopt;
    LiteralSet xs;
    if (peek().kind != Tok::kRBrace) {
      auto ls = literals();
      if (!ls) return std::nullopt;
      xs = std::move(*ls);
    }
    const Token& close = peek();
    if (!expect(Tok::kRBrace)) return std::nullopt;
    if (!xs.consistent()) {
      fail_at(ParseError::Kind::kInconsistentSet, start, close.offset + 1 - start,
              "literal set " + xs.str() + " is inconsistent");
      return std::nullopt;
    }
    return xs;
  }

  std::optional<LiteralSet> precondition() {
    if (!accept_keyword("if")) return LiteralSet();
    if (peek().kind == Tok::kDot || peek().kind == Tok::kEnd) {
      fail(ParseError::Kind::kEmptyPrecondition, peek(), "empty precondition list after 'if'");
      return std::nullopt;
    }
    return literals();
  }

  std::optional<Proposition> statement() {
    std::optional<Proposition> out;
    if (accept_keyword("initially")) {
      auto p = literal();
      if (!p) return std::nullopt;
      out = Initially{std::move(*p)};
    } else if (accept_keyword("executable")) {
      auto a = identifier("action name");
      if (!a) return std::nullopt;
      auto pre = precondition();
      if (!pre) return std::nullopt;
      out = Executable{std::move(*a), std::move(*pre)};
    } else if (peek().kind == Tok::kIdent) {
      std::string a = next().text;
      if (accept_keyword("causes")) {
        auto p = literal();
        if (!p) return std::nullopt;
        auto pre = precondition();
        if (!pre) return std::nullopt;
        out = Effect{std::move(a), std::move(*p), std::move(*pre)};
      } else if (accept_keyword("determines")) {
        if (peek().kind == Tok::kTilde) {
          fail(ParseError::Kind::kSyntax, peek(), "'determines' takes a fluent name, not a literal");
          return std::nullopt;
        }
        auto f = identifier("fluent name");
        if (!f) return std::nullopt;
        out = Determines{std::move(a), std::move(*f)};
      } else if (peek().kind == Tok::kIdent || peek().kind == Tok::kKeyword) {
        fail(ParseError::Kind::kUnknownKeyword, peek(),
             "unknown keyword '" + peek().text + "' (expected 'causes' or 'determines')");
        return std::nullopt;
      } else {
        unexpected_token("'causes' or 'determines'");
        return std::nullopt;
      }
    } else {
      if (peek().kind == Tok::kKeyword) {
        fail(ParseError::Kind::kUnknownKeyword, peek(), "keyword '" + peek().text + "' cannot start a proposition");
      } else {
        unexpected_token("a proposition");
      }
      return std::nullopt;
    }
    if (!expect(Tok::kDot)) return std::nullopt;
    return out;
  }

  std::optional<Plan> plan(std::size_t depth) {
    if (depth > kMaxDepth) {
      fail(ParseError::Kind::kTooDeep, peek(), "case plans nested too deeply");
      return std::nullopt;
    }
    std::vector<Plan> items;
    do {
      auto c = item(depth);
      if (!c) return std::nullopt;
      items.push_back(std::move(*c));
    } while (accept(Tok::kSemi));
    Plan out;
    for (auto it = items.rbegin(); it != items.rend(); ++it) out = out.is_empty() ? *it : Plan::seq(*it, out);
    return out;
  }

  std::optional<Plan> item(std::size_t depth) {
    if (accept(Tok::kEmptyPlan)) return Plan::empty();
    if (peek().kind == Tok::kIdent) return Plan::action(next().text);
    if (!is_keyword_token("case")) {
      unexpected_token("a plan ('[]', an action, or 'case')");
      return std::nullopt;
    }
    const Token& case_tok = next();
    if (is_keyword_token("endcase")) {
      fail(ParseError::Kind::kEmptyCase, case_tok, "case plan needs at least one branch");
      return std::nullopt;
    }
    std::vector<LiteralSet> guards;
    std::vector<Plan> bodies;
    do {
      const std::size_t start = peek().offset;
      auto g = literals();
      if (!g) return std::nullopt;
      if (!g->consistent()) {
        fail_at(ParseError::Kind::kInconsistentGuard, start, peek().offset - start,
                "guard " + g->str() + " is inconsistent");
        return std::nullopt;
      }
      if (!expect(Tok::kArrow)) return std::nullopt;
      auto body = plan(depth + 1);
      if (!body) return std::nullopt;
      if (!expect(Tok::kDot)) return std::nullopt;
      guards.push_back(std::move(*g));
      bodies.push_back(std::move(*body));
    } while (!accept_keyword("endcase"));
    return Plan::make_case(std::move(guards), std::move(bodies));
  }

  std::optional<Judgment> triple() {
    auto x = braced_set();
    if (!x) return std::nullopt;
    auto c = plan(0);
    if (!c) return std::nullopt;
    const std::size_t start = peek().offset;
    if (!expect(Tok::kLBrace)) return std::nullopt;
    if (accept(Tok::kKW)) {
      auto p = literal();
      if (!p || !expect(Tok::kRBrace)) return std::nullopt;
      return Judgment::knows_whether(std::move(*x), normalize(*c), std::move(*p));
    }
    LiteralSet y;
    if (peek().kind != Tok::kRBrace) {
      auto ls = literals();
      if (!ls) return std::nullopt;
      y = std::move(*ls);
    }
    const Token& close = peek();
    if (!expect(Tok::kRBrace)) return std::nullopt;
    if (!y.consistent()) {
      fail_at(ParseError::Kind::kInconsistentSet, start, close.offset + 1 - start,
              "literal set " + y.str() + " is inconsistent");
      return std::nullopt;
    }
    return Judgment::knows(std::move(*x), normalize(*c), std::move(y));
  }

  std::optional<Query> query() {
    Query q;
    if (accept_keyword("knows")) {
      q.kind = Query::Kind::kKnows;
      const std::size_t start = peek().offset;
      std::optional<LiteralSet> goal = peek().kind == Tok::kLBrace ? braced_set() : literals();
      if (!goal) return std::nullopt;
      if (!goal->consistent()) {
        fail_at(ParseError::Kind::kInconsistentSet, start, peek().offset - start,
                "goal " + goal->str() + " is inconsistent");
        return std::nullopt;
      }
      q.goal = std::move(*goal);
    } else if (accept_keyword("kwhether")) {
      q.kind = Query::Kind::kKwhether;
      auto p = literal();
      if (!p) return std::nullopt;
      q.literal = std::move(*p);
    } else {
      unexpected_token("a triple '{...}', 'knows' or 'kwhether'");
      return std::nullopt;
    }
    if (!expect_keyword("after")) return std::nullopt;
    auto c = plan(0);
    if (!c) return std::nullopt;
    q.plan = normalize(*c);
    return q;
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseError error_;
};

}  // namespace detail

inline Result<std::vector<Proposition>, ParseError> parse_domain(std::string_view text) {
  return detail::Parser(text).domain();
}

/// The returned plan is normalized.
inline Result<Plan, ParseError> parse_plan(std::string_view text) { return detail::Parser(text).whole_plan(); }

/// Accepts "{a, ~b}", "a, ~b", or an empty string.
inline Result<LiteralSet, ParseError> parse_literal_set(std::string_view text) {
  return detail::Parser(text).whole_literal_set();
}

inline Result<Literal, ParseError> parse_literal(std::string_view text) {
  return detail::Parser(text).whole_literal();
}

inline Result<Judgment, ParseError> parse_triple(std::string_view text) {
  return detail::Parser(text).whole_triple();
}

/// A triple or a "knows"/"kwhether" query.
inline Result<QueryFile, ParseError> parse_query_file(std::string_view text) {
  return detail::Parser(text).whole_query_file();
}

/// One proposition per line, in the given order.
inline std::string serialize_domain(const std::vector<Proposition>& props) {
  std::string out;
  for (const auto& p : props) out += to_string(p) + "\n";
  return out;
}

inline std::string serialize_plan(const Plan& c) { return to_string(c); }

inline std::string serialize_triple(const Judgment& j) { return to_string(j); }

inline std::string serialize_query(const Query& q) { return to_string(q); }

}  // namespace ak
