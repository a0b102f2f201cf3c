#include "ecolens/model.hpp"

#include <array>
#include <cctype>

#include "ecolens/diagnostics.hpp"

namespace ecolens {

namespace {

bool is_ident_start(char c) noexcept {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_part(char c) noexcept {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

constexpr std::array<std::string_view, 9> kPrimitives = {
    "byte", "char", "double", "float", "int", "long", "short", "boolean", "void"};

// `@Foo`, `@a.b.Foo`, `@Foo(...)` removed from a type token.
std::string strip_annotations(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '@') {
      out += raw[i++];
      continue;
    }
    ++i;
    while (i < raw.size() && (is_ident_part(raw[i]) || raw[i] == '.')) ++i;
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    if (i < raw.size() && raw[i] == '(') {
      int depth = 0;
      for (; i < raw.size(); ++i) {
        if (raw[i] == '(') ++depth;
        if (raw[i] == ')' && --depth == 0) {
          ++i;
          break;
        }
      }
    }
  }
  return out;
}

bool is_canonical_shape(std::string_view s) noexcept {
  std::size_t i = 0;
  bool expect_ident = true;
  while (i < s.size() && s[i] != '[') {
    if (expect_ident) {
      if (!is_ident_start(s[i])) return false;
      while (i < s.size() && is_ident_part(s[i])) ++i;
      expect_ident = false;
    } else if (s[i] == '.') {
      expect_ident = true;
      ++i;
    } else {
      return false;
    }
  }
  if (expect_ident) return false;
  while (i < s.size()) {
    if (s.substr(i, 2) != "[]") return false;
    i += 2;
  }
  return true;
}

}  // namespace

bool is_identifier(std::string_view s) noexcept {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s)
    if (!is_ident_part(c)) return false;
  return true;
}

std::string ApiMethodId::class_name() const {
  std::string out = package_name;
  for (std::size_t i = 0; i < class_chain.size(); ++i) {
    if (i == 0) {
      if (!out.empty()) out += '.';
    } else {
      out += '$';
    }
    out += class_chain[i];
  }
  return out;
}

std::string ApiMethodId::display() const {
  std::string out = class_name() + "#" + method_name + "(";
  for (std::size_t i = 0; i < param_types.size(); ++i) {
    if (i) out += ',';
    out += param_types[i];
  }
  return out + ")";
}

bool is_valid(const ApiMethodId& id) noexcept {
  if (id.class_chain.empty()) return false;
  for (const auto& c : id.class_chain)
    if (!is_identifier(c)) return false;
  if (!id.package_name.empty()) {
    std::size_t start = 0;
    while (true) {
      std::size_t dot = id.package_name.find('.', start);
      std::string_view seg = std::string_view(id.package_name).substr(start, dot - start);
      if (!is_identifier(seg)) return false;
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
  }
  if (id.method_name != kConstructorName && !is_identifier(id.method_name)) return false;
  for (const auto& p : id.param_types)
    if (p != "?" && !is_canonical_shape(p)) return false;  // "?" marks an uninferred type
  return true;
}

void validate(const ApiMethodId& id) {
  if (!is_valid(id)) throw Error("model", "invalid API method id: " + id.display());
}

std::string_view to_string(ResolutionTier tier) noexcept {
  switch (tier) {
    case ResolutionTier::Resolved: return "Resolved";
    case ResolutionTier::ArityOnly: return "ArityOnly";
    case ResolutionTier::NameOnly: return "NameOnly";
  }
  return "?";
}

std::string_view wire_name(ResolutionTier tier) noexcept {
  switch (tier) {
    case ResolutionTier::Resolved: return "resolved";
    case ResolutionTier::ArityOnly: return "arity";
    case ResolutionTier::NameOnly: return "name";
  }
  return "?";
}

ResolutionTier parse_resolution_tier(std::string_view wire) {
  if (wire == "resolved") return ResolutionTier::Resolved;
  if (wire == "arity") return ResolutionTier::ArityOnly;
  if (wire == "name") return ResolutionTier::NameOnly;
  throw Error("model", "unknown resolution tier '" + std::string(wire) + "'");
}

std::string_view to_string(CoverageTag tag) noexcept {
  switch (tag) {
    case CoverageTag::Full: return "Full";
    case CoverageTag::Partial: return "Partial";
    case CoverageTag::Uncovered: return "Uncovered";
  }
  return "?";
}

CoverageTag parse_coverage_tag(std::string_view text) {
  if (text == "Full") return CoverageTag::Full;
  if (text == "Partial") return CoverageTag::Partial;
  if (text == "Uncovered") return CoverageTag::Uncovered;
  throw Error("model", "unknown coverage state '" + std::string(text) + "'");
}

CoverageState::CoverageState(std::uint64_t covered, std::uint64_t missed)
    : covered_(covered), missed_(missed) {
  if (covered + missed == 0) throw Error("model", "coverage state with zero instructions");
}

CoverageState CoverageState::full(std::uint64_t instructions) {
  return CoverageState(instructions == 0 ? 1 : instructions, 0);
}

CoverageTag classify(const Fraction& ratio) noexcept {
  if (ratio.is_zero()) return CoverageTag::Uncovered;
  if (ratio.is_one()) return CoverageTag::Full;
  return CoverageTag::Partial;
}

CoverageTag CoverageState::tag() const noexcept { return classify(ratio()); }

bool is_primitive_type(std::string_view name) noexcept {
  for (auto p : kPrimitives)
    if (p == name) return true;
  return false;
}

std::string_view simple_type_name(std::string_view canonical) noexcept {
  std::size_t bracket = canonical.find('[');
  std::string_view base = canonical.substr(0, bracket);
  std::size_t dot = base.rfind('.');
  return dot == std::string_view::npos ? base : base.substr(dot + 1);
}

std::string canonicalize_type_name(std::string_view raw) {
  std::string text = strip_annotations(raw);

  std::string compact;
  compact.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;

  std::string erased;
  erased.reserve(compact.size());
  int depth = 0;
  for (char c : compact) {
    if (c == '<') {
      ++depth;
    } else if (c == '>') {
      if (--depth < 0) throw MalformedTypeName(std::string(raw));
    } else if (depth == 0) {
      erased += c;
    }
  }
  if (depth != 0) throw MalformedTypeName(std::string(raw));

  if (erased.size() >= 3 && erased.compare(erased.size() - 3, 3, "...") == 0) {
    erased.resize(erased.size() - 3);
    erased += "[]";
  }
  if (!is_canonical_shape(erased)) throw MalformedTypeName(std::string(raw));
  return erased;
}

MethodKey name_key(std::string_view class_name, std::string_view method_name) {
  std::string text;
  text.reserve(class_name.size() + method_name.size() + 1);
  text += class_name;
  text += '#';
  text += method_name;
  return MethodKey{KeyPrecision::Name, std::move(text)};
}

MethodKey method_key(const ApiMethodId& id, KeyPrecision precision) {
  switch (precision) {
    case KeyPrecision::Full:
      return MethodKey{KeyPrecision::Full, id.display()};
    case KeyPrecision::Arity: {
      MethodKey key = name_key(id.class_name(), id.method_name);
      key.precision = KeyPrecision::Arity;
      key.text += '/' + std::to_string(id.param_types.size());
      return key;
    }
    case KeyPrecision::Name:
      return name_key(id.class_name(), id.method_name);
  }
  return {};
}

}  // namespace ecolens
