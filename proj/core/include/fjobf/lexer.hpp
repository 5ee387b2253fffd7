#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fjobf/common.hpp"

namespace fjobf {

enum class Tok {
  Ident,
  Int,
  String,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, punctuation, or decoded string literal
  std::int64_t ival = 0;
  Pos pos;
};

// Shared tokenizer for the .ssafj and .fjl formats. Accepts `//` and `/* */`
// comments. Multi-character punctuation: -> => ==
std::vector<Token> tokenize(std::string_view text);

// Cursor over a token vector with the small helpers both parsers need.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Tok::End; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const;
  bool is_ident(std::size_t ahead = 0) const { return peek(ahead).kind == Tok::Ident; }
  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const;

  bool accept_punct(std::string_view p);
  bool accept_keyword(std::string_view kw);
  const Token& expect_punct(std::string_view p);
  const Token& expect_keyword(std::string_view kw);
  std::string expect_ident(std::string_view what = "identifier");

  [[noreturn]] void fail(const std::string& msg) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const;

  std::size_t mark() const { return i_; }
  void reset(std::size_t m) { i_ = m; }
  const Token& previous() const { return toks_[i_ == 0 ? 0 : i_ - 1]; }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

std::string describe(const Token& t);

}  // namespace fjobf
