#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bindlab/term.hpp"

namespace bindlab {

struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& what);
  int line;
  int col;
};

// Parses exactly one term from the canonical s-expression syntax, e.g.
// (senc (symkey (hash (tag "cwk") (nonce "n1"))) (name "alice")).
// Trailing non-whitespace input is an error.
Term parse_term(std::string_view src);

// Parses a whitespace-separated sequence of terms (knowledge-base files).
// Lines starting with ';' are comments.
std::vector<Term> parse_terms(std::string_view src);

}  // namespace bindlab
