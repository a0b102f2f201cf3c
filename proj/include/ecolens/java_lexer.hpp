#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ecolens::java {

enum class TokenKind : std::uint8_t {
  Identifier,  // includes keywords; callers test the spelling
  String,      // string literal or text block; text holds the raw spelling
  Char,
  Int,
  Long,
  Float,
  Double,
  Punct,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
};

class LexError : public std::runtime_error {
 public:
  LexError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Tokenizes Java source. Comments are dropped. Multi-character operators
/// are emitted as single-character punctuation except `...`, `::` and `->`,
/// so `>>` closing nested generics arrives as two `>` tokens.
/// Throws LexError on unterminated comments or literals.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word) noexcept;

}  // namespace ecolens::java
