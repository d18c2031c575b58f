#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dho/errors.hpp"
#include "dho/rational.hpp"
#include "dho/weyl.hpp"

namespace dho {

// Recursive-descent evaluator for operator expressions over the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' nonneg-int)?
//   atom   := literal | identifier | '(' expr ')'
// Identifiers: y, p, i, hbar, m, omega, lambda; the parameters substitute
// their exact rational config values. Juxtaposition is not multiplication
// and there is no division operator — division by constants is written as
// rational literals, e.g. "(1/2)". Products evaluate directly in the Weyl
// algebra, so the result is always canonical normal-ordered form.

namespace detail {

enum class TokenKind { Number, Identifier, Plus, Minus, Star, Caret, LParen, RParen, End };

inline const char* token_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Number: return "literal";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Caret: return "'^'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

struct Token {
  TokenKind kind = TokenKind::End;
  std::size_t offset = 0;
  std::string text;
  Rational value;  // Number only
};

class OperatorLexer {
 public:
  explicit OperatorLexer(std::string_view text) : text_(text) { advance(); }

  const Token& current() const { return token_; }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    token_ = Token{};
    token_.offset = pos_;
    if (pos_ >= text_.size()) {
      token_.kind = TokenKind::End;
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': token_.kind = TokenKind::Plus; ++pos_; return;
      case '-': token_.kind = TokenKind::Minus; ++pos_; return;
      case '*': token_.kind = TokenKind::Star; ++pos_; return;
      case '^': token_.kind = TokenKind::Caret; ++pos_; return;
      case '(': token_.kind = TokenKind::LParen; ++pos_; return;
      case ')': token_.kind = TokenKind::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      token_.kind = TokenKind::Identifier;
      token_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    throw ParseError(pos_, {"literal", "identifier", "'('"},
                     std::string("unexpected character '") + c + "' at byte " +
                         std::to_string(pos_));
  }

 private:
  // integer, integer '/' integer, or decimal with optional exponent; the
  // '/' of a rational literal must follow the digits immediately.
  void lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '/' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      digits();
    } else {
      if (pos_ < text_.size() && text_[pos_] == '.' && pos_ + 1 < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        ++pos_;
        digits();
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t mark = pos_ + 1;
        if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
        if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
          pos_ = mark;
          digits();
        }
      }
    }
    token_.kind = TokenKind::Number;
    token_.text = std::string(text_.substr(start, pos_ - start));
    token_.value = Rational::parse(token_.text);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token token_;
};

class OperatorParser {
 public:
  OperatorParser(std::string_view text, const SymbolicParams& params)
      : lexer_(text), params_(params) {}

  OperatorPoly run() {
    OperatorPoly result = expr();
    if (lexer_.current().kind != TokenKind::End)
      throw ParseError(lexer_.current().offset, {"'+'", "'-'", "'*'", "'^'", "end of input"},
                       unexpected_message({"end of input"}));
    return result;
  }

 private:
  OperatorPoly expr() {
    OperatorPoly acc = term();
    while (true) {
      const TokenKind kind = lexer_.current().kind;
      if (kind == TokenKind::Plus) {
        lexer_.advance();
        acc += term();
      } else if (kind == TokenKind::Minus) {
        lexer_.advance();
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  OperatorPoly term() {
    OperatorPoly acc = factor();
    while (lexer_.current().kind == TokenKind::Star) {
      lexer_.advance();
      acc = normal_order_mul(acc, factor(), params_.hbar);
    }
    return acc;
  }

  OperatorPoly factor() {
    OperatorPoly base = atom();
    if (lexer_.current().kind != TokenKind::Caret) return base;
    lexer_.advance();
    const Token& tok = lexer_.current();
    if (tok.kind == TokenKind::Minus) throw NegativeExponentError(tok.offset);
    // the exponent must be a plain digit string, not a rational or decimal
    if (tok.kind != TokenKind::Number ||
        tok.text.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(tok.offset, {"non-negative integer literal"},
                       unexpected_message({"non-negative integer literal"}));
    const long long e = tok.value.num();
    if (e > OperatorPoly::kMaxExponent)
      throw std::overflow_error("exponent " + std::to_string(e) + " exceeds the cap of " +
                                std::to_string(OperatorPoly::kMaxExponent));
    lexer_.advance();
    OperatorPoly acc = OperatorPoly::constant(Rational(1));
    for (long long k = 0; k < e; ++k) acc = normal_order_mul(acc, base, params_.hbar);
    return acc;
  }

  OperatorPoly atom() {
    const Token tok = lexer_.current();
    switch (tok.kind) {
      case TokenKind::Number:
        lexer_.advance();
        return OperatorPoly::constant(tok.value);
      case TokenKind::Identifier: {
        lexer_.advance();
        if (tok.text == "y") return OperatorPoly::y();
        if (tok.text == "p") return OperatorPoly::p();
        if (tok.text == "i") return OperatorPoly::constant(RationalComplex::i());
        if (tok.text == "hbar") return OperatorPoly::constant(params_.hbar);
        if (tok.text == "m") return OperatorPoly::constant(params_.m);
        if (tok.text == "omega") return OperatorPoly::constant(params_.omega);
        if (tok.text == "lambda") return OperatorPoly::constant(params_.lambda);
        throw UnknownIdentifierError(tok.offset, tok.text);
      }
      case TokenKind::LParen: {
        lexer_.advance();
        OperatorPoly inner = expr();
        if (lexer_.current().kind != TokenKind::RParen)
          throw ParseError(lexer_.current().offset, {"')'"}, unexpected_message({"')'"}));
        lexer_.advance();
        return inner;
      }
      default:
        throw ParseError(tok.offset, {"literal", "identifier", "'('"},
                         unexpected_message({"literal", "identifier", "'('"}));
    }
  }

  std::string unexpected_message(const std::vector<std::string>& expected) const {
    std::string msg = "syntax error at byte " + std::to_string(lexer_.current().offset) +
                      ": got " + token_name(lexer_.current().kind) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i)
      msg += (i ? " | " : "") + expected[i];
    return msg;
  }

  OperatorLexer lexer_;
  SymbolicParams params_;
};

}  // namespace detail

inline OperatorPoly parse_operator(std::string_view text, const SymbolicParams& params) {
  if (text.empty()) throw ParseError(0, {"literal", "identifier", "'('"}, "empty expression");
  return detail::OperatorParser(text, params).run();
}

}  // namespace dho
