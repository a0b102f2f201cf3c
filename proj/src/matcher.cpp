#include "ecolens/matcher.hpp"

#include <algorithm>

namespace ecolens {

namespace {

constexpr std::string_view kStage = "matcher";

// Highest ratio; equal ratios prefer more covered, then fewer missed
// instructions, so the pick never depends on candidate order.
bool outranks(const CoverageState& a, const CoverageState& b) {
  if (a.ratio() != b.ratio()) return a.ratio() > b.ratio();
  if (a.covered() != b.covered()) return a.covered() > b.covered();
  return a.missed() < b.missed();
}

MatchResult best_of(MatchTier tier, const std::vector<const CoverageEntry*>& pool) {
  const CoverageEntry* best = pool.front();
  for (const auto* e : pool)
    if (outranks(e->state, best->state)) best = e;
  return MatchResult{tier, best->state, pool.size()};
}

}  // namespace

std::string_view to_string(MatchTier tier) noexcept {
  switch (tier) {
    case MatchTier::FullMatch: return "FullMatch";
    case MatchTier::PartialUnambiguous: return "PartialUnambiguous";
    case MatchTier::PartialAmbiguous: return "PartialAmbiguous";
    case MatchTier::NoMatch: return "NoMatch";
  }
  return "?";
}

MatchTier parse_match_tier(std::string_view text) {
  for (MatchTier t : kMatchTiers)
    if (to_string(t) == text) return t;
  throw Error(std::string(kStage), "unknown match tier '" + std::string(text) + "'");
}

CoverageIndex::CoverageIndex(std::span<const CoverageEntry> entries) : size_(entries.size()) {
  for (const auto& e : entries) by_name_[method_key(e.method, KeyPrecision::Name)].push_back(&e);
}

std::span<const CoverageEntry* const> CoverageIndex::candidates(const ApiMethodId& method) const {
  auto it = by_name_.find(method_key(method, KeyPrecision::Name));
  if (it == by_name_.end()) return {};
  return it->second;
}

MatchResult match_method(const UsageKey& used, const CoverageIndex& index) {
  auto candidates = index.candidates(used.method);
  if (candidates.empty()) return {};

  if (used.tier == ResolutionTier::Resolved) {
    // Several exact entries differ only in return type (bridge methods).
    std::vector<const CoverageEntry*> exact;
    for (const auto* e : candidates)
      if (e->has_descriptor && e->method.param_types == used.method.param_types) exact.push_back(e);
    if (!exact.empty()) return best_of(MatchTier::FullMatch, exact);
  }

  std::vector<const CoverageEntry*> pool;
  for (const auto* e : candidates) {
    bool arity_ok = used.tier == ResolutionTier::NameOnly || !e->has_descriptor ||
                    e->method.param_types.size() == used.method.param_types.size();
    if (arity_ok) pool.push_back(e);
  }
  if (pool.empty()) return {};
  if (pool.size() == 1) return MatchResult{MatchTier::PartialUnambiguous, pool.front()->state, 1};
  return best_of(MatchTier::PartialAmbiguous, pool);
}

std::uint64_t MatchStats::count(MatchTier tier) const {
  auto it = counts.find(tier);
  return it == counts.end() ? 0 : it->second;
}

Fraction MatchStats::share(MatchTier tier) const {
  return total == 0 ? Fraction() : Fraction(count(tier), total);
}

Fraction MatchStats::unambiguous_share() const {
  if (total == 0) return Fraction();
  return Fraction(count(MatchTier::FullMatch) + count(MatchTier::PartialUnambiguous), total);
}

void refresh_stats(MatchedDataset& dataset) {
  dataset.stats = MatchStats{};
  dataset.excluded_methods.clear();
  for (MatchTier t : kMatchTiers) dataset.stats.counts[t] = 0;
  for (const auto& row : dataset.rows) {
    ++dataset.stats.counts[row.match.tier];
    ++dataset.stats.total;
    if (row.match.tier == MatchTier::NoMatch) dataset.excluded_methods.push_back(row.used);
  }
}

MatchedDataset match_dataset(const UsageAggregate& usage, std::span<const CoverageEntry> coverage, Diagnostics& diag) {
  if (usage.per_method.empty()) throw Error(std::string(kStage), "no used methods");
  if (coverage.empty()) diag.warn(std::string(kStage), "", 0, "no coverage entries; every used method is NoMatch");

  CoverageIndex index(coverage);
  MatchedDataset ds;
  ds.dependents = usage.dependents;
  ds.rows.reserve(usage.per_method.size());
  for (const auto& [key, entry] : usage.per_method)
    ds.rows.push_back(MatchedRow{key, entry.call_count, entry.dependent_names, match_method(key, index)});
  refresh_stats(ds);
  return ds;
}

}  // namespace ecolens
