#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ecolens/coverage.hpp"
#include "ecolens/diagnostics.hpp"
#include "ecolens/extractor.hpp"

namespace ecolens {

enum class MatchTier : std::uint8_t { FullMatch, PartialUnambiguous, PartialAmbiguous, NoMatch };

inline constexpr std::array<MatchTier, 4> kMatchTiers = {MatchTier::FullMatch, MatchTier::PartialUnambiguous,
                                                         MatchTier::PartialAmbiguous, MatchTier::NoMatch};

std::string_view to_string(MatchTier tier) noexcept;
MatchTier parse_match_tier(std::string_view text);

struct MatchResult {
  MatchTier tier = MatchTier::NoMatch;
  std::optional<CoverageState> coverage;  // absent iff NoMatch
  std::size_t candidates_considered = 0;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Coverage entries grouped by class + method name.
class CoverageIndex {
 public:
  explicit CoverageIndex(std::span<const CoverageEntry> entries);

  /// Entries for `class#name`, in merged (sorted) order.
  std::span<const CoverageEntry* const> candidates(const ApiMethodId& method) const;
  std::size_t size() const noexcept { return size_; }

 private:
  std::map<MethodKey, std::vector<const CoverageEntry*>> by_name_;
  std::size_t size_ = 0;
};

/// Hierarchical match of one used method against coverage:
///   1. full key equal                              -> FullMatch
///   2. class+name, exactly one arity candidate     -> PartialUnambiguous
///   3. class+name, several arity candidates        -> PartialAmbiguous (max ratio)
///   4. otherwise                                   -> NoMatch
/// ArityOnly usage starts at rule 2; NameOnly usage considers every
/// class+name candidate. Descriptor-less entries join every candidate pool.
MatchResult match_method(const UsageKey& used, const CoverageIndex& index);

struct MatchedRow {
  UsageKey used;
  std::uint64_t call_count = 0;
  std::set<std::string> dependent_names;
  MatchResult match;

  friend bool operator==(const MatchedRow&, const MatchedRow&) = default;
};

struct MatchStats {
  std::map<MatchTier, std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t count(MatchTier tier) const;
  Fraction share(MatchTier tier) const;
  /// Cases 1 and 2 together: matches without ambiguity.
  Fraction unambiguous_share() const;

  friend bool operator==(const MatchStats&, const MatchStats&) = default;
};

struct MatchedDataset {
  std::vector<MatchedRow> rows;  // sorted by used key
  MatchStats stats;
  std::vector<UsageKey> excluded_methods;  // NoMatch rows
  std::set<std::string> dependents;        // every analyzed dependent

  friend bool operator==(const MatchedDataset&, const MatchedDataset&) = default;
};

/// Joins usage with merged coverage. Throws when usage is empty; an empty
/// coverage list yields all-NoMatch rows and a warning.
MatchedDataset match_dataset(const UsageAggregate& usage, std::span<const CoverageEntry> coverage, Diagnostics& diag);

/// Recomputes stats and excluded_methods from rows.
void refresh_stats(MatchedDataset& dataset);

}  // namespace ecolens
