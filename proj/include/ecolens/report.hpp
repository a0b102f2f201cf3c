#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ecolens/diagnostics.hpp"
#include "ecolens/inventory.hpp"
#include "ecolens/matcher.hpp"
#include "ecolens/metrics.hpp"
#include "ecolens/planner.hpp"

namespace ecolens {

/// Extraction and coverage outcome for one configured dependent.
struct DependentReport {
  std::string name;
  std::string status;  // "analyzed" | "version-mismatch" | "manifest-missing"
  std::size_t files_scanned = 0;
  std::size_t files_referencing = 0;
  std::size_t files_skipped = 0;
  std::size_t call_sites = 0;
  std::size_t unresolved_calls = 0;
  DependentCoverage coverage;  // zero-filled unless analyzed
  std::map<std::string, double> metadata;

  friend bool operator==(const DependentReport&, const DependentReport&) = default;
};

struct ReportMeta {
  std::string tool_version;
  std::string config_hash;  // 16 hex digits, empty when built without a config
  LibraryCoordinates library;
  std::string ctc_policy = "matched_only";  // | "strict"
  std::string ranking = "dependents desc, calls desc, method asc";

  friend bool operator==(const ReportMeta&, const ReportMeta&) = default;
};

struct AnalyticsReport {
  UsageShare usage_share;
  UsageDistribution distribution;
  UbcResult ubc;
  Fraction project_coverage;  // instruction coverage over every reported method
  CtcResult ctc;
  MatchStats match_stats;
  std::vector<MatchedRow> methods;
  std::vector<TopUsed> top_used;
  TestingPlan plan;
  std::vector<DependentReport> dependents;
  std::vector<Warning> warnings;
  ReportMeta meta;

  friend bool operator==(const AnalyticsReport&, const AnalyticsReport&) = default;
};

enum class ReportFormat : std::uint8_t { Json, Markdown, Csv };

ReportFormat parse_report_format(std::string_view text);

nlohmann::json report_to_json(const AnalyticsReport& report);
AnalyticsReport report_from_json(const nlohmann::json& document);
AnalyticsReport parse_report(std::string_view text);

std::string emit_report(const AnalyticsReport& report, ReportFormat format);

/// One markdown table over several libraries with a closing Mean row for
/// UBC, CTC and New CTC. The Mean row averages the per-library
/// percentages; the Pooled row divides summed counts.
std::string emit_summary(const std::vector<AnalyticsReport>& reports);

}  // namespace ecolens
