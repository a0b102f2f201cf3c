#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecolens/diagnostics.hpp"
#include "ecolens/model.hpp"

namespace ecolens {

struct LibraryCoordinates {
  std::string group;
  std::string artifact;
  std::string version;

  friend auto operator<=>(const LibraryCoordinates&, const LibraryCoordinates&) = default;
};

/// The set of publicly available API methods of one library.
struct ApiInventory {
  LibraryCoordinates library;
  std::set<ApiMethodId> methods;
  std::size_t source_listing_count = 0;

  bool contains(const ApiMethodId& id) const { return methods.count(id) != 0; }
  std::size_t size() const noexcept { return methods.size(); }

  friend bool operator==(const ApiInventory&, const ApiInventory&) = default;
};

/// Extracts public methods and constructors from `javap -public` output.
///
/// Each class block is introduced by a header line ending in `{`. Only
/// `public` members of `public` classes are returned; fields, static
/// initializers and compiler-generated members (a `$` in the method name)
/// are skipped. Constructors come back as `<init>`. Type variables are
/// erased to their first bound, or `java.lang.Object` when unbounded.
///
/// An unparseable member line is reported through `diag` (which throws in
/// strict mode). A member line outside any class block is a hard error.
std::vector<ApiMethodId> parse_javap_listing(std::string_view text, Diagnostics& diag,
                                             std::string_view source = "<listing>");

/// Builds an inventory from one or more listing texts.
ApiInventory inventory_from_listings(const LibraryCoordinates& library,
                                     std::span<const std::string> listings, Diagnostics& diag,
                                     bool include_constructors = true);

/// Parses the neutral inventory JSON document. Duplicate methods collapse
/// with one warning each; schema violations throw with the offending path.
ApiInventory parse_inventory_json(std::string_view document, Diagnostics& diag,
                                  std::string_view source = "<inventory>");

std::string inventory_to_json(const ApiInventory& inventory);

/// Set union of all parts; every part must share the same group id.
ApiInventory merge_inventories(std::span<const ApiInventory> parts);

/// Drops `<init>` entries.
void remove_constructors(ApiInventory& inventory);

}  // namespace ecolens
