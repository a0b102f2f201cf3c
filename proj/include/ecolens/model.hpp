#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ecolens/fraction.hpp"

namespace ecolens {

inline constexpr std::string_view kConstructorName = "<init>";

/// Canonical identity of one API method.
///
/// Nested classes are kept as a chain (`Outer`, `Inner`) and rendered with
/// the bytecode separator `$`. Parameter types are erased canonical names:
/// primitives as-is, arrays with `[]` suffixes, reference types qualified
/// when resolvable.
struct ApiMethodId {
  std::string package_name;
  std::vector<std::string> class_chain;
  std::string method_name;
  std::vector<std::string> param_types;

  /// `pkg.Outer$Inner`
  std::string class_name() const;
  /// `pkg.Outer$Inner#name(p1,p2)`
  std::string display() const;
  bool is_constructor() const noexcept { return method_name == kConstructorName; }

  friend auto operator<=>(const ApiMethodId&, const ApiMethodId&) = default;
};

/// Throws Error when the id violates the identity invariants.
void validate(const ApiMethodId& id);
bool is_valid(const ApiMethodId& id) noexcept;

bool is_identifier(std::string_view s) noexcept;

/// How much of a usage record's signature is trusted.
enum class ResolutionTier : std::uint8_t { Resolved, ArityOnly, NameOnly };

std::string_view to_string(ResolutionTier tier) noexcept;
/// "resolved" | "arity" | "name"
std::string_view wire_name(ResolutionTier tier) noexcept;
ResolutionTier parse_resolution_tier(std::string_view wire);

enum class CoverageTag : std::uint8_t { Full, Partial, Uncovered };

std::string_view to_string(CoverageTag tag) noexcept;
CoverageTag parse_coverage_tag(std::string_view text);

/// Instruction counters of one method and the classification they imply.
/// The tag is always derived from the counters, never stored independently.
class CoverageState {
 public:
  CoverageState(std::uint64_t covered, std::uint64_t missed);

  static CoverageState full(std::uint64_t instructions);

  std::uint64_t covered() const noexcept { return covered_; }
  std::uint64_t missed() const noexcept { return missed_; }
  Fraction ratio() const { return Fraction(covered_, covered_ + missed_); }
  CoverageTag tag() const noexcept;

  bool is_full() const noexcept { return missed_ == 0; }
  bool is_covered() const noexcept { return covered_ > 0; }

  friend bool operator==(const CoverageState&, const CoverageState&) = default;

 private:
  std::uint64_t covered_;
  std::uint64_t missed_;
};

CoverageTag classify(const Fraction& ratio) noexcept;

/// Canonicalizes a source-level type token: generics erased, varargs
/// rewritten to `[]`, whitespace and type annotations removed.
/// Throws MalformedTypeName on unbalanced angle brackets or junk.
std::string canonicalize_type_name(std::string_view raw);

bool is_primitive_type(std::string_view name) noexcept;

/// Last dot-separated segment of a (possibly array) type name, without the
/// array suffix: `java.lang.String[]` -> `String`.
std::string_view simple_type_name(std::string_view canonical) noexcept;

enum class KeyPrecision : std::uint8_t { Full, Arity, Name };

/// Opaque comparable index key derived from an ApiMethodId.
struct MethodKey {
  KeyPrecision precision = KeyPrecision::Full;
  std::string text;

  friend auto operator<=>(const MethodKey&, const MethodKey&) = default;
};

MethodKey method_key(const ApiMethodId& id, KeyPrecision precision);

/// Name-level key from parts, used by indexes keyed on class + method name.
MethodKey name_key(std::string_view class_name, std::string_view method_name);

}  // namespace ecolens
