#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ecolens/coverage.hpp"
#include "ecolens/diagnostics.hpp"
#include "ecolens/extractor.hpp"
#include "ecolens/inventory.hpp"
#include "ecolens/matcher.hpp"
#include "ecolens/planner.hpp"
#include "ecolens/report.hpp"

namespace ecolens {

struct DependentConfig {
  std::string name;
  std::string root;                     // relative to the config file
  std::optional<std::string> manifest;  // defaults to <root>/pom.xml
  std::map<std::string, double> metadata;
};

struct PolicyConfig {
  bool strict_parsing = false;
  bool strict_ctc = false;
  bool only_uncovered = false;
  bool include_constructors = true;
  bool include_dependent_tests = true;
  std::uint64_t file_size_cap = 2u * 1024u * 1024u;
  PlanMode plan_mode = PlanMode::UsageRank;
  std::size_t plan_k = 10;
  std::size_t top_k = 10;
  unsigned workers = 1;
};

struct PipelineConfig {
  LibraryCoordinates library;
  std::vector<std::string> packages;
  std::vector<std::string> inventory_listings;
  std::vector<std::string> inventory_json;
  std::vector<DependentConfig> dependents;
  std::vector<std::string> usage_jsonl;  // pre-extracted usage, merged with dependents
  std::vector<std::string> coverage_reports;
  std::optional<std::string> major_stream;
  PolicyConfig policy;
  std::filesystem::path base_dir;  // not serialized

  std::filesystem::path resolve(const std::string& relative) const;
};

/// Parses the config document. Unknown keys are rejected so typos do not
/// silently fall back to defaults.
PipelineConfig parse_config(std::string_view document, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& file);
nlohmann::json config_to_json(const PipelineConfig& config);

/// Throws Error("config", ...) when a required input list is empty.
void validate_config(const PipelineConfig& config);

/// FNV-1a 64 over the canonical config, dependents sorted by name.
std::string config_hash(const PipelineConfig& config);

/// Worker count after applying ECOLENS_WORKERS.
unsigned effective_workers(unsigned configured);

/// Stage entry points, also used by the CLI subcommands.
ApiInventory load_inventory(const PipelineConfig& config, Diagnostics& diag);
std::vector<CoverageEntry> load_coverage(const PipelineConfig& config, Diagnostics& diag);

struct ExtractionRun {
  std::vector<DependentUsage> usages;      // sorted by dependent name
  std::vector<DependentReport> dependents;  // one per configured dependent, sorted
};

ExtractionRun extract_usage(const PipelineConfig& config, const ApiInventory& inventory, Diagnostics& diag);

struct AnalysisOptions {
  CtcPolicy policy = CtcPolicy::MatchedOnly;
  PlanOptions plan;
  std::size_t top_k = 10;
};

/// Metrics and plan over already-loaded inputs. `dependents` rows are
/// completed with per-dependent coverage.
AnalyticsReport analyze(const ApiInventory& inventory, const UsageAggregate& usage,
                        std::span<const CoverageEntry> coverage, std::vector<DependentReport> dependents,
                        const AnalysisOptions& options, Diagnostics& diag, MatchedDataset* matched_out = nullptr);

struct PipelineOutput {
  AnalyticsReport report;
  MatchedDataset matched;
  int exit_code() const { return report.warnings.empty() ? 0 : 2; }
};

PipelineOutput run_pipeline_full(const PipelineConfig& config);
AnalyticsReport run_pipeline(const PipelineConfig& config);

std::string read_text_file(const std::filesystem::path& path, std::string_view stage);

}  // namespace ecolens
