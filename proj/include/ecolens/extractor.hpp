#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecolens/diagnostics.hpp"
#include "ecolens/inventory.hpp"
#include "ecolens/model.hpp"

namespace ecolens {

struct DependentProject {
  std::string name;
  std::filesystem::path root_path;
  std::optional<std::string> declared_version;
  std::map<std::string, double> metadata;  // stars, contributors, age_years, ...
};

/// One observed call site attributed to the library.
struct UsageRecord {
  std::string dependent;
  ApiMethodId method;
  ResolutionTier tier = ResolutionTier::Resolved;
  std::string file;
  std::size_t line = 1;

  friend auto operator<=>(const UsageRecord&, const UsageRecord&) = default;
};

/// Parameter placeholder for signatures whose types were not inferred.
inline constexpr std::string_view kUnknownType = "?";

/// Identity of a used method: the id plus how much of it is trusted.
/// Records of one method at different tiers aggregate separately because
/// the matcher treats them differently.
struct UsageKey {
  ApiMethodId method;
  ResolutionTier tier = ResolutionTier::Resolved;

  std::string display() const;
  friend auto operator<=>(const UsageKey&, const UsageKey&) = default;
};

struct UsageEntry {
  std::uint64_t call_count = 0;
  std::set<std::string> dependent_names;

  friend bool operator==(const UsageEntry&, const UsageEntry&) = default;
};

/// Multiset union of call sites over all analyzed dependents.
struct UsageAggregate {
  std::map<UsageKey, UsageEntry> per_method;
  std::set<std::string> dependents;  // every analyzed dependent, used or not

  std::size_t dependents_analyzed() const noexcept { return dependents.size(); }
  std::uint64_t total_calls() const;

  friend bool operator==(const UsageAggregate&, const UsageAggregate&) = default;
};

struct DependentUsage {
  std::string dependent;
  std::vector<UsageRecord> records;
};

// ---------------------------------------------------------------------------
// Step 1: import scanning

struct ImportDecl {
  std::string target;  // dotted, without a trailing `.*`
  bool is_static = false;
  bool wildcard = false;
  bool implicit = false;  // fully-qualified usage in code, not an import line
  std::size_t line = 0;

  friend auto operator<=>(const ImportDecl&, const ImportDecl&) = default;
};

struct ImportScan {
  std::vector<ImportDecl> imports;
  bool references_library = false;
};

/// Line-lexical import scan; never fails. Comments and string contents are
/// blanked first so commented-out imports do not count. Fully-qualified
/// library references in code are reported as implicit imports.
ImportScan scan_imports(std::string_view source, std::span<const std::string> library_packages);

// ---------------------------------------------------------------------------
// Step 2: call-site extraction

/// Lookup tables over an inventory, built once per run.
class InventoryIndex {
 public:
  explicit InventoryIndex(const ApiInventory& inventory);

  /// Binary class name for a dotted source spelling (`pkg.Outer.Inner`).
  const std::string* class_by_source_name(std::string_view source_name) const;
  const std::vector<std::string>& classes_by_simple_name(std::string_view simple) const;
  bool has_class(std::string_view binary_name) const;
  std::vector<const ApiMethodId*> methods(std::string_view binary_class, std::string_view method_name) const;
  const std::set<std::string>& classes_with_method(std::string_view method_name) const;
  bool has_method_name(std::string_view method_name) const;
  const ApiInventory& inventory() const noexcept { return *inventory_; }

 private:
  const ApiInventory* inventory_;
  std::map<std::string, std::string, std::less<>> by_source_name_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_simple_name_;
  std::map<std::string, std::map<std::string, std::vector<const ApiMethodId*>, std::less<>>, std::less<>> members_;
  std::map<std::string, std::set<std::string>, std::less<>> method_classes_;
};

struct FileExtraction {
  std::vector<UsageRecord> records;
  std::size_t unresolved = 0;  // library-looking calls discarded as ambiguous
  bool parsed = true;
};

/// Extracts library call sites from one source file using tiered local
/// resolution. Returns nothing when `imports` shows no library reference.
/// A file that does not lex is reported through `diag` and skipped.
FileExtraction extract_call_sites(std::string_view source, const ImportScan& imports, const InventoryIndex& index,
                                  std::string_view dependent, std::string_view file, Diagnostics& diag);

struct ExtractionOptions {
  std::vector<std::string> library_packages;
  std::uintmax_t file_size_cap = 2u * 1024u * 1024u;
  bool include_test_dirs = true;
  bool include_constructors = true;
  unsigned workers = 1;
};

struct DependentExtraction {
  DependentUsage usage;
  std::size_t files_scanned = 0;
  std::size_t files_referencing = 0;
  std::size_t files_skipped = 0;
  std::size_t unresolved = 0;
};

/// Walks `project.root_path` for `.java` files (sorted), applies the import
/// filter, and extracts call sites from the remaining files.
DependentExtraction extract_dependent(const DependentProject& project, const InventoryIndex& index,
                                      const ExtractionOptions& options, Diagnostics& diag);

// ---------------------------------------------------------------------------
// Version alignment

/// True iff the POM declares a dependency on `library` whose version's
/// leading numeric components equal those of `major_stream`. `${prop}`
/// versions resolve through `<properties>`. Malformed XML yields false and
/// a warning.
bool check_version_alignment(std::string_view manifest, const LibraryCoordinates& library,
                             std::string_view major_stream, Diagnostics& diag,
                             std::string_view source = "pom.xml");

// ---------------------------------------------------------------------------
// Aggregation and interchange

/// Multiset union keyed by (method, tier). Throws on a repeated dependent.
UsageAggregate aggregate_usage(std::span<const DependentUsage> usages);

/// Parses Usage JSONL. Returns groups sorted by dependent name.
std::vector<DependentUsage> parse_usage_records(std::string_view stream, Diagnostics& diag,
                                                std::string_view source = "<usage>");

std::string usage_records_to_jsonl(std::span<const DependentUsage> usages);

}  // namespace ecolens
