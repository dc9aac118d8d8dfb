#include "bindlab/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace bindlab {

ParseError::ParseError(int line_, int col_, const std::string& what_)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                         std::to_string(col_) + ": " + what_),
      line(line_),
      col(col_) {}

namespace {

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col, msg); }

  bool eof() const { return pos >= src.size(); }
  char peek() const { return src[pos]; }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_space() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string symbol() {
    std::string out;
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"') break;
      out += c;
      advance();
    }
    if (out.empty()) fail("expected a symbol");
    return out;
  }

  std::string quoted() {
    expect('"');
    std::string out;
    while (true) {
      if (eof()) fail("unterminated string");
      char c = peek();
      advance();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        out += peek();
        advance();
      } else {
        out += c;
      }
    }
    return out;
  }
};

Term parse_one(Lexer& lx);

Term parse_list(Lexer& lx) {
  int at_line = lx.line, at_col = lx.col;
  lx.expect('(');
  lx.skip_space();
  std::string head = lx.symbol();
  lx.skip_space();

  auto atom = [&](auto ctor) {
    Term t = ctor(lx.quoted());
    lx.skip_space();
    lx.expect(')');
    return t;
  };
  auto rest = [&]() {
    std::vector<Term> parts;
    while (!lx.eof() && lx.peek() != ')') {
      parts.push_back(parse_one(lx));
      lx.skip_space();
    }
    lx.expect(')');
    return parts;
  };
  auto fixed = [&](std::size_t n, const char* what) {
    std::vector<Term> parts = rest();
    if (parts.size() != n) throw ParseError(at_line, at_col, std::string(what) + ": wrong arity");
    return parts;
  };

  try {
    if (head == "name") return atom(name);
    if (head == "tag") return atom(tag);
    if (head == "nonce") return atom(nonce);
    if (head == "pms") return atom(pms);
    if (head == "dh-exp") return atom(dh_exp);
    if (head == "pubk") return atom(pubk);
    if (head == "privk") return atom(privk);
    if (head == "dh-pub") {
      auto p = fixed(1, "dh-pub");
      return dh_pub(p[0]);
    }
    if (head == "dh-shared") {
      auto p = fixed(2, "dh-shared");
      return dh_shared(p[0], p[1]);
    }
    if (head == "symkey") {
      auto p = fixed(1, "symkey");
      return symkey(p[0]);
    }
    if (head == "cat") return cat(rest());
    if (head == "hash") return hash_of(rest());
    if (head == "senc") {
      auto p = fixed(2, "senc");
      return senc(p[0], p[1]);
    }
    if (head == "aenc") {
      auto p = fixed(2, "aenc");
      return aenc(p[0], p[1]);
    }
    if (head == "sig") {
      auto p = fixed(2, "sig");
      return sig(p[0], p[1]);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(at_line, at_col, e.what());
  }
  throw ParseError(at_line, at_col, "unknown head '" + head + "'");
}

Term parse_one(Lexer& lx) {
  lx.skip_space();
  if (lx.eof()) lx.fail("unexpected end of input");
  if (lx.peek() != '(') lx.fail("expected '('");
  return parse_list(lx);
}

}  // namespace

Term parse_term(std::string_view src) {
  Lexer lx{src};
  Term t = parse_one(lx);
  lx.skip_space();
  if (!lx.eof()) lx.fail("trailing input after term");
  return t;
}

std::vector<Term> parse_terms(std::string_view src) {
  Lexer lx{src};
  std::vector<Term> out;
  lx.skip_space();
  while (!lx.eof()) {
    out.push_back(parse_one(lx));
    lx.skip_space();
  }
  return out;
}

}  // namespace bindlab
