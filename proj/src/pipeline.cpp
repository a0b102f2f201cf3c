#include "ecolens/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ecolens/serialize.hpp"
#include "text_util.hpp"

namespace ecolens {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  if (!obj.is_object()) throw Error("config", where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw Error("config", where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    obj.at(key).get_to(out);
  } catch (const json::exception&) {
    throw Error("config", where + "/" + key + ": wrong type");
  }
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& where) {
  std::vector<std::string> out;
  read_opt(obj, key, out, where);
  return out;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
  return out;
}

}  // namespace

fs::path PipelineConfig::resolve(const std::string& relative) const {
  fs::path p(relative);
  return p.is_absolute() ? p : base_dir / p;
}

std::string read_text_file(const fs::path& path, std::string_view stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(std::string(stage), "cannot read " + path.generic_string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PipelineConfig parse_config(std::string_view document, const fs::path& base_dir) {
  json j = json::parse(text::strip_bom(document), nullptr, false);
  if (j.is_discarded()) throw Error("config", "config is not valid JSON");
  reject_unknown_keys(j, {"library", "packages", "inventory", "dependents", "usage", "coverage", "major_stream", "policy"},
                      "");

  PipelineConfig c;
  c.base_dir = base_dir;
  if (!j.contains("library")) throw Error("config", "/library: missing");
  const json& lib = j.at("library");
  reject_unknown_keys(lib, {"group", "artifact", "version"}, "/library");
  read_opt(lib, "group", c.library.group, "/library");
  read_opt(lib, "artifact", c.library.artifact, "/library");
  read_opt(lib, "version", c.library.version, "/library");
  if (c.library.group.empty() || c.library.artifact.empty())
    throw Error("config", "/library: group and artifact are required");

  c.packages = string_list(j, "packages", "");
  if (c.packages.empty()) throw Error("config", "/packages: at least one package prefix is required");

  if (j.contains("inventory")) {
    const json& inv = j.at("inventory");
    reject_unknown_keys(inv, {"listings", "json"}, "/inventory");
    c.inventory_listings = string_list(inv, "listings", "/inventory");
    c.inventory_json = string_list(inv, "json", "/inventory");
  }

  if (j.contains("dependents")) {
    if (!j.at("dependents").is_array()) throw Error("config", "/dependents: expected an array");
    std::size_t i = 0;
    for (const json& d : j.at("dependents")) {
      std::string where = "/dependents/" + std::to_string(i++);
      reject_unknown_keys(d, {"name", "root", "manifest", "metadata"}, where);
      DependentConfig dc;
      read_opt(d, "name", dc.name, where);
      read_opt(d, "root", dc.root, where);
      if (dc.name.empty() || dc.root.empty()) throw Error("config", where + ": name and root are required");
      if (d.contains("manifest")) {
        std::string m;
        read_opt(d, "manifest", m, where);
        dc.manifest = m;
      }
      read_opt(d, "metadata", dc.metadata, where);
      c.dependents.push_back(std::move(dc));
    }
  }

  c.usage_jsonl = string_list(j, "usage", "");
  c.coverage_reports = string_list(j, "coverage", "");
  if (j.contains("major_stream")) {
    std::string s;
    read_opt(j, "major_stream", s, "");
    c.major_stream = s;
  }

  if (j.contains("policy")) {
    const json& p = j.at("policy");
    reject_unknown_keys(p,
                        {"strict_parsing", "strict_ctc", "only_uncovered", "include_constructors",
                         "include_dependent_tests", "file_size_cap", "plan_mode", "plan_k", "top_k", "workers"},
                        "/policy");
    PolicyConfig& pc = c.policy;
    read_opt(p, "strict_parsing", pc.strict_parsing, "/policy");
    read_opt(p, "strict_ctc", pc.strict_ctc, "/policy");
    read_opt(p, "only_uncovered", pc.only_uncovered, "/policy");
    read_opt(p, "include_constructors", pc.include_constructors, "/policy");
    read_opt(p, "include_dependent_tests", pc.include_dependent_tests, "/policy");
    read_opt(p, "file_size_cap", pc.file_size_cap, "/policy");
    if (p.contains("plan_mode")) {
      std::string mode;
      read_opt(p, "plan_mode", mode, "/policy");
      pc.plan_mode = parse_plan_mode(mode);
    }
    read_opt(p, "plan_k", pc.plan_k, "/policy");
    read_opt(p, "top_k", pc.top_k, "/policy");
    read_opt(p, "workers", pc.workers, "/policy");
    if (pc.plan_k == 0) throw Error("config", "/policy/plan_k: must be positive");
    if (pc.top_k == 0) throw Error("config", "/policy/top_k: must be positive");
    if (pc.workers == 0) throw Error("config", "/policy/workers: must be positive");
  }
  return c;
}

PipelineConfig load_config(const fs::path& file) {
  return parse_config(read_text_file(file, "config"), file.parent_path());
}

json config_to_json(const PipelineConfig& c) {
  json deps = json::array();
  for (const auto& d : c.dependents) {
    json dj{{"name", d.name}, {"root", d.root}, {"metadata", d.metadata}};
    if (d.manifest) dj["manifest"] = *d.manifest;
    deps.push_back(std::move(dj));
  }
  const PolicyConfig& p = c.policy;
  json out{{"library", {{"group", c.library.group}, {"artifact", c.library.artifact}, {"version", c.library.version}}},
           {"packages", c.packages},
           {"inventory", {{"listings", c.inventory_listings}, {"json", c.inventory_json}}},
           {"dependents", deps},
           {"usage", c.usage_jsonl},
           {"coverage", c.coverage_reports},
           {"policy",
            {{"strict_parsing", p.strict_parsing},
             {"strict_ctc", p.strict_ctc},
             {"only_uncovered", p.only_uncovered},
             {"include_constructors", p.include_constructors},
             {"include_dependent_tests", p.include_dependent_tests},
             {"file_size_cap", p.file_size_cap},
             {"plan_mode", std::string(to_string(p.plan_mode))},
             {"plan_k", p.plan_k},
             {"top_k", p.top_k},
             {"workers", p.workers}}}};
  if (c.major_stream) out["major_stream"] = *c.major_stream;
  return out;
}

void validate_config(const PipelineConfig& c) {
  if (c.inventory_listings.empty() && c.inventory_json.empty()) throw Error("config", "no inventory sources");
  if (c.dependents.empty() && c.usage_jsonl.empty()) throw Error("config", "no dependents");
  if (c.coverage_reports.empty()) throw Error("config", "no coverage reports");
  std::set<std::string> names;
  for (const auto& d : c.dependents)
    if (!names.insert(d.name).second) throw Error("config", "duplicate dependent '" + d.name + "'");
}

std::string config_hash(const PipelineConfig& config) {
  PipelineConfig sorted = config;
  std::sort(sorted.dependents.begin(), sorted.dependents.end(),
            [](const DependentConfig& a, const DependentConfig& b) { return a.name < b.name; });
  // Worker count does not affect results.
  sorted.policy.workers = 1;
  std::string canonical = config_to_json(sorted).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return hex64(h);
}

unsigned effective_workers(unsigned configured) {
  const char* env = std::getenv("ECOLENS_WORKERS");
  if (env == nullptr || *env == '\0') return std::max(1u, configured);
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0 || v > 1024) throw Error("config", std::string("ECOLENS_WORKERS: invalid value '") + env + "'");
  return static_cast<unsigned>(v);
}

ApiInventory load_inventory(const PipelineConfig& config, Diagnostics& diag) {
  std::vector<ApiInventory> parts;
  if (!config.inventory_listings.empty()) {
    std::vector<std::string> texts;
    for (const auto& p : config.inventory_listings) texts.push_back(read_text_file(config.resolve(p), "inventory"));
    parts.push_back(inventory_from_listings(config.library, texts, diag, config.policy.include_constructors));
  }
  for (const auto& p : config.inventory_json)
    parts.push_back(parse_inventory_json(read_text_file(config.resolve(p), "inventory"), diag, p));
  ApiInventory merged = merge_inventories(parts);
  if (merged.library.group != config.library.group)
    throw Error("inventory", "inventory group '" + merged.library.group + "' differs from configured '" +
                                 config.library.group + "'");
  if (!config.policy.include_constructors) remove_constructors(merged);
  if (merged.methods.empty()) throw Error("inventory", "empty inventory");
  return merged;
}

std::vector<CoverageEntry> load_coverage(const PipelineConfig& config, Diagnostics& diag) {
  if (config.coverage_reports.empty()) throw Error("coverage", "no coverage reports");
  std::vector<std::vector<CoverageEntry>> reports;
  for (const auto& p : config.coverage_reports)
    reports.push_back(parse_jacoco_report(read_text_file(config.resolve(p), "coverage"), diag, p));
  std::vector<CoverageEntry> merged = merge_coverage(reports);
  if (!config.policy.include_constructors)
    std::erase_if(merged, [](const CoverageEntry& e) { return e.method.is_constructor(); });
  return merged;
}

ExtractionRun extract_usage(const PipelineConfig& config, const ApiInventory& inventory, Diagnostics& diag) {
  ExtractionRun run;
  std::vector<DependentConfig> deps = config.dependents;
  std::sort(deps.begin(), deps.end(), [](const DependentConfig& a, const DependentConfig& b) { return a.name < b.name; });

  ExtractionOptions options;
  options.library_packages = config.packages;
  options.file_size_cap = config.policy.file_size_cap;
  options.include_test_dirs = config.policy.include_dependent_tests;
  options.include_constructors = config.policy.include_constructors;
  options.workers = effective_workers(config.policy.workers);

  InventoryIndex index(inventory);
  for (const auto& d : deps) {
    DependentReport rep;
    rep.name = d.name;
    rep.metadata = d.metadata;
    rep.status = "analyzed";
    if (config.major_stream) {
      std::string manifest_rel = d.manifest ? *d.manifest : (fs::path(d.root) / "pom.xml").generic_string();
      fs::path manifest = config.resolve(manifest_rel);
      std::error_code ec;
      if (!fs::is_regular_file(manifest, ec)) {
        diag.warn("version", d.name, 0, "manifest not found: " + manifest_rel);
        rep.status = "manifest-missing";
      } else if (!check_version_alignment(read_text_file(manifest, "version"), config.library, *config.major_stream,
                                          diag, d.name + ":" + manifest_rel)) {
        rep.status = "version-mismatch";
      }
    }
    if (rep.status == "analyzed") {
      DependentProject project{d.name, config.resolve(d.root), std::nullopt, d.metadata};
      DependentExtraction ex = extract_dependent(project, index, options, diag);
      rep.files_scanned = ex.files_scanned;
      rep.files_referencing = ex.files_referencing;
      rep.files_skipped = ex.files_skipped;
      rep.unresolved_calls = ex.unresolved;
      rep.call_sites = ex.usage.records.size();
      run.usages.push_back(std::move(ex.usage));
    }
    run.dependents.push_back(std::move(rep));
  }

  for (const auto& p : config.usage_jsonl) {
    for (auto& du : parse_usage_records(read_text_file(config.resolve(p), "extractor"), diag, p)) {
      if (!config.policy.include_constructors)
        std::erase_if(du.records, [](const UsageRecord& r) { return r.method.is_constructor(); });
      DependentReport rep;
      rep.name = du.dependent;
      rep.status = "analyzed";
      rep.call_sites = du.records.size();
      run.dependents.push_back(std::move(rep));
      run.usages.push_back(std::move(du));
    }
  }

  auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
  std::sort(run.dependents.begin(), run.dependents.end(), by_name);
  std::sort(run.usages.begin(), run.usages.end(),
            [](const DependentUsage& a, const DependentUsage& b) { return a.dependent < b.dependent; });
  return run;
}

AnalyticsReport analyze(const ApiInventory& inventory, const UsageAggregate& usage,
                        std::span<const CoverageEntry> coverage, std::vector<DependentReport> dependents,
                        const AnalysisOptions& options, Diagnostics& diag, MatchedDataset* matched_out) {
  AnalyticsReport r;
  MatchedDataset ds = match_dataset(usage, coverage, diag);

  r.usage_share = usage_share(inventory, usage);
  r.distribution = usage_distribution(usage);
  r.ubc = usage_based_coverage(ds);
  std::uint64_t covered = 0, total = 0;
  for (const auto& e : coverage) {
    covered += e.state.covered();
    total += e.state.covered() + e.state.missed();
  }
  r.project_coverage = total > 0 ? Fraction(covered, total) : Fraction(0, 1);
  r.ctc = community_test_coverage(ds, options.policy);
  r.match_stats = ds.stats;
  r.methods = ds.rows;
  r.top_used = top_used(usage, options.top_k);
  PlanOptions plan = options.plan;
  plan.policy = options.policy;
  r.plan = simulate_plan(ds, plan);

  std::map<std::string, DependentCoverage> per_dep;
  for (auto& dc : per_dependent_coverage(ds, options.policy)) per_dep[dc.name] = dc;
  for (auto& d : dependents) {
    auto it = per_dep.find(d.name);
    if (it != per_dep.end()) d.coverage = it->second;
    else d.coverage.name = d.name;
  }
  r.dependents = std::move(dependents);

  // Informational notes never abort, even under strict parsing.
  std::vector<Warning> notes = diag.sorted();
  for (const auto& e : r.ctc.excluded_dependents)
    notes.push_back(Warning{"metrics", e.name, 0, "excluded from CTC: " + e.reason});
  for (const auto& d : r.dependents)
    if (d.unresolved_calls > 0)
      notes.push_back(
          Warning{"extractor", d.name, 0, std::to_string(d.unresolved_calls) + " ambiguous library call(s) discarded"});
  std::sort(notes.begin(), notes.end());
  notes.erase(std::unique(notes.begin(), notes.end()), notes.end());
  r.warnings = std::move(notes);

  r.meta.tool_version = ECOLENS_VERSION;
  r.meta.library = inventory.library;
  r.meta.ctc_policy = options.policy == CtcPolicy::Strict ? "strict" : "matched_only";
  if (matched_out) *matched_out = std::move(ds);
  return r;
}

PipelineOutput run_pipeline_full(const PipelineConfig& config) {
  validate_config(config);
  Diagnostics diag(config.policy.strict_parsing);
  ApiInventory inventory = load_inventory(config, diag);
  ExtractionRun run = extract_usage(config, inventory, diag);
  UsageAggregate usage = aggregate_usage(run.usages);
  std::vector<CoverageEntry> coverage = load_coverage(config, diag);

  AnalysisOptions options;
  options.policy = config.policy.strict_ctc ? CtcPolicy::Strict : CtcPolicy::MatchedOnly;
  options.plan.mode = config.policy.plan_mode;
  options.plan.k = config.policy.plan_k;
  options.plan.only_uncovered = config.policy.only_uncovered;
  options.top_k = config.policy.top_k;

  PipelineOutput out;
  out.report = analyze(inventory, usage, coverage, std::move(run.dependents), options, diag, &out.matched);
  out.report.meta.library = config.library;
  out.report.meta.config_hash = config_hash(config);
  return out;
}

AnalyticsReport run_pipeline(const PipelineConfig& config) { return run_pipeline_full(config).report; }

}  // namespace ecolens
