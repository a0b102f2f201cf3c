#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ecolens::xml {

/// Minimal element tree; enough for JaCoCo reports and POM manifests.
struct Element {
  std::string name;
  std::map<std::string, std::string> attributes;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;
  std::size_t line = 0;

  const std::string* attribute(std::string_view key) const;
  const Element* child(std::string_view child_name) const;
  std::vector<const Element*> children_named(std::string_view child_name) const;
  /// Trimmed text of the named child, empty when absent.
  std::string child_text(std::string_view child_name) const;
};

struct ParseError {
  std::string message;
  std::size_t line = 0;
};

/// Parses a whole document. External entities and DTDs are never fetched.
/// Returns nullptr and fills `error` on malformed input.
std::unique_ptr<Element> parse(std::string_view document, ParseError& error);

std::string_view strip_bom(std::string_view text) noexcept;

}  // namespace ecolens::xml
