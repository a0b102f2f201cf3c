#include "ecolens/metrics.hpp"

#include <algorithm>
#include <map>

namespace ecolens {

namespace {

constexpr std::string_view kStage = "metrics";

}  // namespace

UsageShare usage_share(const ApiInventory& inventory, const UsageAggregate& usage) {
  if (inventory.methods.empty()) throw Error(std::string(kStage), "empty inventory");
  std::map<MethodKey, std::vector<const ApiMethodId*>> by_name;
  for (const auto& m : inventory.methods) by_name[method_key(m, KeyPrecision::Name)].push_back(&m);

  UsageShare share;
  share.inventory_size = inventory.size();
  std::set<const ApiMethodId*> hit;
  for (const auto& [key, entry] : usage.per_method) {
    if (key.tier == ResolutionTier::Resolved) {
      auto it = inventory.methods.find(key.method);
      if (it != inventory.methods.end()) hit.insert(&*it);
      else share.absent.push_back(key);
      continue;
    }
    std::vector<const ApiMethodId*> matches;
    if (auto it = by_name.find(method_key(key.method, KeyPrecision::Name)); it != by_name.end())
      for (const auto* m : it->second)
        if (key.tier == ResolutionTier::NameOnly || m->param_types.size() == key.method.param_types.size())
          matches.push_back(m);
    if (matches.size() == 1) hit.insert(matches.front());
    else if (matches.empty()) share.absent.push_back(key);
    else share.ambiguous.push_back(key);
  }
  share.used_in_inventory = hit.size();
  return share;
}

std::string_view to_string(UsageBucket bucket) noexcept {
  switch (bucket) {
    case UsageBucket::One: return "1";
    case UsageBucket::TwoToFour: return "2-4";
    case UsageBucket::FiveToNine: return "5-9";
    case UsageBucket::TenPlus: return "10+";
  }
  return "?";
}

UsageBucket bucket_for(std::size_t dependent_count) noexcept {
  if (dependent_count <= 1) return UsageBucket::One;
  if (dependent_count <= 4) return UsageBucket::TwoToFour;
  if (dependent_count <= 9) return UsageBucket::FiveToNine;
  return UsageBucket::TenPlus;
}

UsageDistribution usage_distribution(const UsageAggregate& usage) {
  if (usage.per_method.empty()) throw Error(std::string(kStage), "no used methods");
  UsageDistribution dist;
  for (const auto& [key, entry] : usage.per_method) {
    ++dist.counts[static_cast<std::size_t>(bucket_for(entry.dependent_names.size()))];
    ++dist.total;
  }
  return dist;
}

UbcResult usage_based_coverage(const MatchedDataset& matched) {
  UbcResult r;
  for (const auto& row : matched.rows) {
    if (!row.match.coverage) continue;
    ++r.n_used;
    if (row.match.coverage->is_covered()) ++r.n_covered;
  }
  if (r.n_used == 0) throw Error(std::string(kStage), "no matchable used methods");
  return r;
}

std::vector<DependentCoverage> per_dependent_coverage(const MatchedDataset& matched, CtcPolicy policy) {
  std::map<std::string, DependentCoverage> by_name;
  for (const auto& name : matched.dependents) by_name[name].name = name;
  for (const auto& row : matched.rows) {
    for (const auto& name : row.dependent_names) {
      DependentCoverage& d = by_name[name];
      d.name = name;
      ++d.methods_used;
      if (row.match.coverage) {
        ++d.methods_matched;
        if (row.match.coverage->is_full()) ++d.methods_full;
      }
    }
  }
  std::vector<DependentCoverage> out;
  out.reserve(by_name.size());
  for (auto& [name, d] : by_name) {
    d.excluded = d.methods_matched == 0;
    std::size_t required = policy == CtcPolicy::Strict ? d.methods_used : d.methods_matched;
    d.fully_covered = !d.excluded && d.methods_full == required;
    out.push_back(std::move(d));
  }
  return out;
}

CtcResult community_test_coverage(const MatchedDataset& matched, CtcPolicy policy) {
  CtcResult r;
  for (const auto& d : per_dependent_coverage(matched, policy)) {
    if (d.excluded) {
      r.excluded_dependents.push_back(
          {d.name, d.methods_used == 0 ? "no library API usage" : "no used method matched coverage"});
      continue;
    }
    ++r.np_total;
    if (d.fully_covered) ++r.np_fully_covered;
  }
  if (r.np_total == 0) throw Error(std::string(kStage), "all dependents excluded; no valid coverage score");
  return r;
}

bool usage_rank_before(std::size_t deps_a, std::uint64_t calls_a, const UsageKey& a, std::size_t deps_b,
                       std::uint64_t calls_b, const UsageKey& b) {
  if (deps_a != deps_b) return deps_a > deps_b;
  if (calls_a != calls_b) return calls_a > calls_b;
  std::string ka = a.display(), kb = b.display();
  if (ka != kb) return ka < kb;
  return a < b;
}

std::vector<TopUsed> top_used(const UsageAggregate& usage, std::size_t k) {
  if (k == 0) throw Error(std::string(kStage), "top_used needs k >= 1");
  std::vector<TopUsed> all;
  all.reserve(usage.per_method.size());
  for (const auto& [key, entry] : usage.per_method)
    all.push_back(TopUsed{key, entry.dependent_names.size(), entry.call_count});
  std::sort(all.begin(), all.end(), [](const TopUsed& a, const TopUsed& b) {
    return usage_rank_before(a.dependent_count, a.call_count, a.key, b.dependent_count, b.call_count, b.key);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

Fraction mean_of_fractions(std::span<const Fraction> per_library) { return mean(per_library); }

Fraction pooled_fraction(std::span<const std::uint64_t> numerators, std::span<const std::uint64_t> denominators) {
  if (numerators.size() != denominators.size() || numerators.empty())
    throw Error(std::string(kStage), "pooled fraction needs matching, non-empty inputs");
  std::uint64_t num = 0, den = 0;
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    num += numerators[i];
    den += denominators[i];
  }
  return Fraction(num, den);
}

}  // namespace ecolens
