#include "ecolens/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ecolens::java {

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",  "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",  "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",  "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",    "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",      "void",      "volatile",
    "while",    "true",       "false",     "null"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else if (starts("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (starts("/*")) {
        block_comment();
      } else if (starts("\"\"\"")) {
        out.push_back(text_block());
      } else if (c == '"') {
        out.push_back(quoted('"', TokenKind::String));
      } else if (c == '\'') {
        out.push_back(quoted('\'', TokenKind::Char));
      } else if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                                     std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        out.push_back(number());
      } else if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        out.push_back({TokenKind::Identifier, std::string(src_.substr(start, pos_ - start)), line_});
      } else {
        for (std::string_view op : {"...", "::", "->"}) {
          if (starts(op)) {
            out.push_back({TokenKind::Punct, std::string(op), line_});
            pos_ += op.size();
            goto next;
          }
        }
        out.push_back({TokenKind::Punct, std::string(1, static_cast<char>(c)), line_});
        ++pos_;
      next:;
      }
    }
    return out;
  }

 private:
  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void block_comment() {
    std::size_t start_line = line_;
    pos_ += 2;
    while (pos_ < src_.size() && !starts("*/")) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= src_.size()) throw LexError("unterminated block comment", start_line);
    pos_ += 2;
  }

  Token text_block() {
    std::size_t start = pos_;
    std::size_t start_line = line_;
    pos_ += 3;
    while (pos_ < src_.size() && !starts("\"\"\"")) {
      if (src_[pos_] == '\\') ++pos_;
      else if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= src_.size()) throw LexError("unterminated text block", start_line);
    pos_ += 3;
    return {TokenKind::String, std::string(src_.substr(start, pos_ - start)), start_line};
  }

  Token quoted(char quote, TokenKind kind) {
    std::size_t start = pos_++;
    while (pos_ < src_.size() && src_[pos_] != quote) {
      if (src_[pos_] == '\n') throw LexError("unterminated literal", line_);
      if (src_[pos_] == '\\') ++pos_;
      ++pos_;
    }
    if (pos_ >= src_.size()) throw LexError("unterminated literal", line_);
    ++pos_;
    return {kind, std::string(src_.substr(start, pos_ - start)), line_};
  }

  Token number() {
    std::size_t start = pos_;
    bool hex = starts("0x") || starts("0X");
    bool bin = starts("0b") || starts("0B");
    bool floating = false;
    if (hex || bin) pos_ += 2;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isxdigit(static_cast<unsigned char>(c)) || c == '_') {
        if (!hex && (c == 'e' || c == 'E')) {
          floating = true;
          ++pos_;
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
          continue;
        }
        if (!hex && (c == 'd' || c == 'D' || c == 'f' || c == 'F')) break;
        ++pos_;
      } else if (c == '.' && !hex && !starts("...")) {
        floating = true;
        ++pos_;
      } else if (hex && (c == 'p' || c == 'P')) {
        floating = true;
        ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      } else {
        break;
      }
    }
    TokenKind kind = floating ? TokenKind::Double : TokenKind::Int;
    if (pos_ < src_.size()) {
      char s = src_[pos_];
      if (s == 'l' || s == 'L') {
        kind = TokenKind::Long;
        ++pos_;
      } else if (s == 'f' || s == 'F') {
        kind = TokenKind::Float;
        ++pos_;
      } else if (s == 'd' || s == 'D') {
        kind = TokenKind::Double;
        ++pos_;
      }
    }
    return {kind, std::string(src_.substr(start, pos_ - start)), line_};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

bool is_keyword(std::string_view word) noexcept {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

}  // namespace ecolens::java
