#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ecolens/extractor.hpp"
#include "ecolens/inventory.hpp"
#include "ecolens/matcher.hpp"

namespace ecolens {

struct UsageShare {
  std::uint64_t used_in_inventory = 0;  // distinct inventory methods hit by usage
  std::uint64_t inventory_size = 0;
  std::vector<UsageKey> absent;     // used keys with no inventory counterpart
  std::vector<UsageKey> ambiguous;  // used keys matching several inventory methods

  Fraction fraction() const { return Fraction(used_in_inventory, inventory_size); }

  friend bool operator==(const UsageShare&, const UsageShare&) = default;
};

/// Share of the inventory exercised by the corpus. Untrusted usage keys
/// count only when they identify a single inventory method.
UsageShare usage_share(const ApiInventory& inventory, const UsageAggregate& usage);

enum class UsageBucket : std::uint8_t { One, TwoToFour, FiveToNine, TenPlus };
inline constexpr std::array<UsageBucket, 4> kUsageBuckets = {UsageBucket::One, UsageBucket::TwoToFour,
                                                             UsageBucket::FiveToNine, UsageBucket::TenPlus};

std::string_view to_string(UsageBucket bucket) noexcept;  // "1", "2-4", "5-9", "10+"
UsageBucket bucket_for(std::size_t dependent_count) noexcept;

struct UsageDistribution {
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t total = 0;

  std::uint64_t count(UsageBucket b) const { return counts[static_cast<std::size_t>(b)]; }
  Fraction share(UsageBucket b) const { return Fraction(count(b), total); }

  friend bool operator==(const UsageDistribution&, const UsageDistribution&) = default;
};

UsageDistribution usage_distribution(const UsageAggregate& usage);

struct UbcResult {
  std::uint64_t n_covered = 0;
  std::uint64_t n_used = 0;

  Fraction fraction() const { return Fraction(n_covered, n_used); }

  friend bool operator==(const UbcResult&, const UbcResult&) = default;
};

/// Usage-based API test coverage over matched rows (NoMatch rows excluded).
UbcResult usage_based_coverage(const MatchedDataset& matched);

enum class CtcPolicy : std::uint8_t {
  MatchedOnly,  // judge each dependent on its matched methods
  Strict,       // a NoMatch method blocks full coverage
};

struct ExcludedDependent {
  std::string name;
  std::string reason;

  friend auto operator<=>(const ExcludedDependent&, const ExcludedDependent&) = default;
};

struct CtcResult {
  std::uint64_t np_fully_covered = 0;
  std::uint64_t np_total = 0;
  std::vector<ExcludedDependent> excluded_dependents;

  Fraction fraction() const { return Fraction(np_fully_covered, np_total); }

  friend bool operator==(const CtcResult&, const CtcResult&) = default;
};

/// Community test coverage: share of dependents whose every judged method is
/// fully covered. Dependents without any matched method are excluded.
CtcResult community_test_coverage(const MatchedDataset& matched, CtcPolicy policy = CtcPolicy::MatchedOnly);

struct DependentCoverage {
  std::string name;
  std::size_t methods_used = 0;
  std::size_t methods_matched = 0;
  std::size_t methods_full = 0;
  bool excluded = false;
  bool fully_covered = false;

  friend bool operator==(const DependentCoverage&, const DependentCoverage&) = default;
};

std::vector<DependentCoverage> per_dependent_coverage(const MatchedDataset& matched,
                                                      CtcPolicy policy = CtcPolicy::MatchedOnly);

struct TopUsed {
  UsageKey key;
  std::size_t dependent_count = 0;
  std::uint64_t call_count = 0;

  friend bool operator==(const TopUsed&, const TopUsed&) = default;
};

/// Ranked by dependent count desc, call count desc, key text asc.
std::vector<TopUsed> top_used(const UsageAggregate& usage, std::size_t k);

/// The same total order over (dependent count, call count, key) used by
/// top_used and the planner.
bool usage_rank_before(std::size_t deps_a, std::uint64_t calls_a, const UsageKey& a, std::size_t deps_b,
                       std::uint64_t calls_b, const UsageKey& b);

/// Cross-library summaries: the unweighted mean of per-library
/// percentages, and the pooled ratio of summed counts.
Fraction mean_of_fractions(std::span<const Fraction> per_library);
Fraction pooled_fraction(std::span<const std::uint64_t> numerators, std::span<const std::uint64_t> denominators);

}  // namespace ecolens
