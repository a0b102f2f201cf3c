#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ecolens/matcher.hpp"
#include "ecolens/metrics.hpp"

namespace ecolens {

enum class PlanMode : std::uint8_t { UsageRank, Greedy };

std::string_view to_string(PlanMode mode) noexcept;  // "usage_rank" | "greedy"
PlanMode parse_plan_mode(std::string_view text);

struct PlanOptions {
  PlanMode mode = PlanMode::UsageRank;
  std::size_t k = 10;
  CtcPolicy policy = CtcPolicy::MatchedOnly;
  bool only_uncovered = false;
};

struct PlanStep {
  UsageKey method;
  std::size_t dependents_unblocked = 0;
  CtcResult cumulative;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct TestingPlan {
  PlanMode mode = PlanMode::UsageRank;
  std::vector<PlanStep> steps;
  CtcResult baseline_ctc;
  CtcResult new_ctc;

  friend bool operator==(const TestingPlan&, const TestingPlan&) = default;
};

/// Matched rows that are not fully covered (or, with `only_uncovered`,
/// not covered at all), most used first.
std::vector<MatchedRow> rank_candidates(const MatchedDataset& matched, bool only_uncovered = false);

/// Copy of `matched` with the given methods' coverage rewritten to Full.
MatchedDataset promote_to_full(const MatchedDataset& matched, std::span<const UsageKey> methods);

/// Promotes up to k candidates to full coverage one at a time, recording
/// the CTC after each step. Stops early at 100% or when candidates run out.
TestingPlan simulate_plan(const MatchedDataset& matched, const PlanOptions& options);

}  // namespace ecolens
