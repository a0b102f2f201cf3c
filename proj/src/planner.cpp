#include "ecolens/planner.hpp"

#include <algorithm>
#include <map>

namespace ecolens {

namespace {

constexpr std::string_view kStage = "planner";

void make_full(MatchedRow& row) {
  const CoverageState& s = *row.match.coverage;
  row.match.coverage = CoverageState::full(s.covered() + s.missed());
}

// Number of newly fully covered dependents if `row` became Full, given the
// count of blocking methods per dependent.
std::size_t unblock_gain(const MatchedRow& row, const std::map<std::string, std::size_t>& blocking) {
  std::size_t gain = 0;
  for (const auto& name : row.dependent_names)
    if (auto it = blocking.find(name); it != blocking.end() && it->second == 1) ++gain;
  return gain;
}

std::map<std::string, std::size_t> blocking_counts(const MatchedDataset& ds, CtcPolicy policy) {
  std::map<std::string, std::size_t> blocking;
  for (const auto& d : per_dependent_coverage(ds, policy)) {
    if (d.excluded) continue;
    std::size_t judged = policy == CtcPolicy::Strict ? d.methods_used : d.methods_matched;
    blocking[d.name] = judged - d.methods_full;
  }
  return blocking;
}

}  // namespace

std::string_view to_string(PlanMode mode) noexcept {
  return mode == PlanMode::Greedy ? "greedy" : "usage_rank";
}

PlanMode parse_plan_mode(std::string_view text) {
  if (text == "usage_rank") return PlanMode::UsageRank;
  if (text == "greedy") return PlanMode::Greedy;
  throw Error(std::string(kStage), "unknown plan mode '" + std::string(text) + "'");
}

std::vector<MatchedRow> rank_candidates(const MatchedDataset& matched, bool only_uncovered) {
  std::vector<MatchedRow> out;
  for (const auto& row : matched.rows) {
    if (!row.match.coverage) continue;
    CoverageTag tag = row.match.coverage->tag();
    if (only_uncovered ? tag == CoverageTag::Uncovered : tag != CoverageTag::Full) out.push_back(row);
  }
  std::sort(out.begin(), out.end(), [](const MatchedRow& a, const MatchedRow& b) {
    return usage_rank_before(a.dependent_names.size(), a.call_count, a.used, b.dependent_names.size(), b.call_count,
                             b.used);
  });
  return out;
}

MatchedDataset promote_to_full(const MatchedDataset& matched, std::span<const UsageKey> methods) {
  MatchedDataset out = matched;
  std::set<UsageKey> wanted(methods.begin(), methods.end());
  for (auto& row : out.rows)
    if (row.match.coverage && wanted.count(row.used)) make_full(row);
  return out;
}

TestingPlan simulate_plan(const MatchedDataset& matched, const PlanOptions& options) {
  if (options.k == 0) throw Error(std::string(kStage), "plan size k must be >= 1");
  TestingPlan plan;
  plan.mode = options.mode;
  plan.baseline_ctc = community_test_coverage(matched, options.policy);
  plan.new_ctc = plan.baseline_ctc;

  MatchedDataset current = matched;
  std::map<UsageKey, std::size_t> row_of;
  for (std::size_t i = 0; i < current.rows.size(); ++i) row_of[current.rows[i].used] = i;

  std::vector<MatchedRow> remaining = rank_candidates(matched, options.only_uncovered);
  while (plan.steps.size() < options.k && !remaining.empty() && !plan.new_ctc.fraction().is_one()) {
    std::size_t pick = 0;
    if (options.mode == PlanMode::Greedy) {
      auto blocking = blocking_counts(current, options.policy);
      std::size_t best = unblock_gain(remaining[0], blocking);
      for (std::size_t i = 1; i < remaining.size(); ++i) {
        std::size_t gain = unblock_gain(remaining[i], blocking);
        if (gain > best) {
          best = gain;
          pick = i;
        }
      }
    }
    UsageKey chosen = remaining[pick].used;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

    make_full(current.rows[row_of.at(chosen)]);
    CtcResult after = community_test_coverage(current, options.policy);
    std::size_t unblocked = after.np_fully_covered - plan.new_ctc.np_fully_covered;
    plan.steps.push_back(PlanStep{std::move(chosen), unblocked, after});
    plan.new_ctc = std::move(after);
  }
  return plan;
}

}  // namespace ecolens
