#include "fjobf/lexer.hpp"

#include <cctype>

namespace fjobf {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::DuplicateLabel: return "duplicate-label";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Eval: return "eval";
    case ErrorKind::Unbound: return "unbound";
    case ErrorKind::MissingPhiOperand: return "missing-phi-operand";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::Translate: return "translate";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

std::string Error::format(ErrorKind kind, const std::string& msg, Pos pos) {
  std::string out = error_kind_name(kind);
  out += " error";
  if (pos.line > 0) out += " at " + std::to_string(pos.line) + ":" + std::to_string(pos.col);
  out += ": " + msg;
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      Pos start{line, col};
      advance(2);
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
      if (i + 1 >= text.size()) throw Error(ErrorKind::Syntax, "unterminated comment", start);
      advance(2);
      continue;
    }
    Token t;
    t.pos = {line, col};
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc) || c == '_' || c == '$') {
      std::size_t j = i;
      while (j < text.size()) {
        unsigned char d = static_cast<unsigned char>(text[j]);
        if (std::isalnum(d) || text[j] == '_' || text[j] == '$') ++j;
        else break;
      }
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(uc)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(text.substr(i, j - i));
      try {
        t.ival = std::stoll(t.text);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Syntax, "integer literal out of range", t.pos);
      }
      advance(j - i);
    } else if (c == '"') {
      advance(1);
      std::string s;
      while (true) {
        if (i >= text.size() || text[i] == '\n')
          throw Error(ErrorKind::Syntax, "unterminated string literal", t.pos);
        char d = text[i];
        if (d == '"') {
          advance(1);
          break;
        }
        if (d == '\\' && i + 1 < text.size()) {
          char e = text[i + 1];
          switch (e) {
            case 'n': s += '\n'; break;
            case 't': s += '\t'; break;
            case '"': s += '"'; break;
            case '\\': s += '\\'; break;
            default: throw Error(ErrorKind::Syntax, std::string("unknown escape \\") + e, {line, col});
          }
          advance(2);
          continue;
        }
        s += d;
        advance(1);
      }
      t.kind = Tok::String;
      t.text = std::move(s);
    } else {
      static const char* multi[] = {"->", "=>", "=="};
      bool matched = false;
      for (const char* m : multi) {
        if (text.substr(i, 2) == m) {
          t.kind = Tok::Punct;
          t.text = m;
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static const std::string single = "{}();,:.=+-<>*";
        if (single.find(c) == std::string::npos)
          throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", t.pos);
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string literal";
    case Tok::Int: return "'" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t j = i_ + ahead;
  if (j >= toks_.size()) return toks_.back();
  return toks_[j];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (i_ < toks_.size() - 1) ++i_;
  return t;
}

bool TokenStream::is_punct(std::string_view p, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Tok::Punct && t.text == p;
}

bool TokenStream::is_keyword(std::string_view kw, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Tok::Ident && t.text == kw;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view kw) {
  if (!is_keyword(kw)) return false;
  next();
  return true;
}

const Token& TokenStream::expect_punct(std::string_view p) {
  if (!is_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()));
  return next();
}

const Token& TokenStream::expect_keyword(std::string_view kw) {
  if (!is_keyword(kw)) fail("expected '" + std::string(kw) + "' but found " + describe(peek()));
  return next();
}

std::string TokenStream::expect_ident(std::string_view what) {
  if (!is_ident()) fail("expected " + std::string(what) + " but found " + describe(peek()));
  return next().text;
}

void TokenStream::fail(const std::string& msg) const { fail_at(peek(), msg); }

void TokenStream::fail_at(const Token& t, const std::string& msg) const {
  throw Error(ErrorKind::Syntax, msg, t.pos);
}

}  // namespace fjobf
