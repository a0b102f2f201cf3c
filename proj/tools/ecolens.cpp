// Command-line front end. Exit codes: 0 success, 1 hard error,
// 2 success with warnings.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ecolens/pipeline.hpp"
#include "ecolens/serialize.hpp"

namespace fs = std::filesystem;
using namespace ecolens;

namespace {

struct PolicyFlags {
  bool strict = false;
  bool strict_ctc = false;
  bool only_uncovered = false;
  bool no_constructors = false;
  bool no_dependent_tests = false;
  std::optional<std::uint64_t> size_cap;
  std::optional<std::string> plan_mode;
  std::optional<std::size_t> plan_k;
  std::optional<std::size_t> top_k;
  std::optional<unsigned> workers;

  void add_to(CLI::App* cmd, bool planning) {
    cmd->add_flag("--strict", strict, "Treat recoverable parse problems as errors");
    cmd->add_flag("--no-constructors", no_constructors, "Drop constructors from inventory, usage and coverage");
    cmd->add_flag("--no-dependent-tests", no_dependent_tests, "Skip files under src/test/ in dependents");
    cmd->add_option("--size-cap", size_cap, "Skip dependent source files larger than this many bytes");
    cmd->add_option("--workers", workers, "Extraction worker threads (ECOLENS_WORKERS overrides)");
    if (!planning) return;
    cmd->add_flag("--strict-ctc", strict_ctc, "A method without coverage data blocks full coverage");
    cmd->add_flag("--only-uncovered", only_uncovered, "Plan only methods with no coverage at all");
    cmd->add_option("--plan-mode", plan_mode, "usage_rank or greedy");
    cmd->add_option("--plan-k", plan_k, "Maximum plan length");
    cmd->add_option("--top-k", top_k, "Rows in the most-used table");
  }

  void apply(PolicyConfig& p) const {
    if (strict) p.strict_parsing = true;
    if (strict_ctc) p.strict_ctc = true;
    if (only_uncovered) p.only_uncovered = true;
    if (no_constructors) p.include_constructors = false;
    if (no_dependent_tests) p.include_dependent_tests = false;
    if (size_cap) p.file_size_cap = *size_cap;
    if (plan_mode) p.plan_mode = parse_plan_mode(*plan_mode);
    if (plan_k) p.plan_k = *plan_k;
    if (top_k) p.top_k = *top_k;
    if (workers) p.workers = *workers;
    if (p.plan_k == 0 || p.top_k == 0 || p.workers == 0) throw Error("config", "k and worker counts must be positive");
  }
};

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("output", "cannot write " + path);
  out << bytes;
}

int finish(const std::vector<Warning>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << to_string(w) << "\n";
  return warnings.empty() ? 0 : 2;
}

PipelineConfig config_from(const std::string& path, const PolicyFlags& flags) {
  PipelineConfig c = load_config(path);
  flags.apply(c.policy);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ecolens: usage-based test coverage analytics for a library's dependent ecosystem"};
  app.set_version_flag("--version", std::string(ECOLENS_VERSION));
  app.require_subcommand(1);

  std::string config_path, output;
  PolicyFlags flags;

  // inventory
  auto* inv = app.add_subcommand("inventory", "Build and validate the API inventory");
  inv->add_option("-c,--config", config_path, "Pipeline config")->required()->check(CLI::ExistingFile);
  inv->add_option("-o,--output", output, "Output file (default stdout)");
  flags.add_to(inv, false);

  // extract
  auto* ext = app.add_subcommand("extract", "Extract library call sites from dependents as Usage JSONL");
  ext->add_option("-c,--config", config_path, "Pipeline config")->required()->check(CLI::ExistingFile);
  ext->add_option("-o,--output", output, "Output file (default stdout)");
  flags.add_to(ext, false);

  // coverage
  std::vector<std::string> reports;
  bool cov_strict = false;
  auto* cov = app.add_subcommand("coverage", "Validate and merge coverage XML reports");
  cov->add_option("reports", reports, "Coverage XML reports")->required()->check(CLI::ExistingFile);
  cov->add_option("-o,--output", output, "Output file (default stdout)");
  cov->add_flag("--strict", cov_strict, "Treat recoverable parse problems as errors");

  // analyze
  std::string format = "json", matched_out;
  auto* ana = app.add_subcommand("analyze", "Run the full pipeline and emit a report");
  ana->add_option("-c,--config", config_path, "Pipeline config")->required()->check(CLI::ExistingFile);
  ana->add_option("-o,--output", output, "Output file (default stdout)");
  ana->add_option("-f,--format", format, "json, markdown or csv");
  ana->add_option("--export-matched", matched_out, "Also write the matched dataset for `plan`");
  flags.add_to(ana, true);

  // plan
  std::string matched_in;
  auto* pln = app.add_subcommand("plan", "Simulate a testing plan from a saved matched dataset");
  pln->add_option("matched", matched_in, "Matched dataset JSON")->required()->check(CLI::ExistingFile);
  pln->add_option("-o,--output", output, "Output file (default stdout)");
  flags.add_to(pln, true);

  // report
  std::vector<std::string> saved;
  auto* rep = app.add_subcommand("report", "Re-render saved JSON reports; several reports give a summary table");
  rep->add_option("reports", saved, "Report JSON files")->required()->check(CLI::ExistingFile);
  rep->add_option("-o,--output", output, "Output file (default stdout)");
  rep->add_option("-f,--format", format, "json, markdown or csv (single report)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*inv) {
      PipelineConfig c = config_from(config_path, flags);
      Diagnostics diag(c.policy.strict_parsing);
      ApiInventory inventory = load_inventory(c, diag);
      write_output(output, inventory_to_json(inventory));
      return finish(diag.sorted());
    }
    if (*ext) {
      PipelineConfig c = config_from(config_path, flags);
      Diagnostics diag(c.policy.strict_parsing);
      ApiInventory inventory = load_inventory(c, diag);
      ExtractionRun run = extract_usage(c, inventory, diag);
      write_output(output, usage_records_to_jsonl(run.usages));
      return finish(diag.sorted());
    }
    if (*cov) {
      Diagnostics diag(cov_strict);
      std::vector<std::vector<CoverageEntry>> parts;
      for (const auto& r : reports) parts.push_back(parse_jacoco_report(read_text_file(r, "coverage"), diag, r));
      nlohmann::json out = nlohmann::json::array();
      for (const auto& e : merge_coverage(parts)) out.push_back(e);
      write_output(output, dump_canonical(out));
      return finish(diag.sorted());
    }
    if (*ana) {
      ReportFormat fmt = parse_report_format(format);
      PipelineConfig c = config_from(config_path, flags);
      PipelineOutput result = run_pipeline_full(c);
      write_output(output, emit_report(result.report, fmt));
      if (!matched_out.empty()) write_output(matched_out, dump_canonical(nlohmann::json(result.matched)));
      return finish(result.report.warnings);
    }
    if (*pln) {
      PolicyConfig p;
      flags.apply(p);
      nlohmann::json j = nlohmann::json::parse(read_text_file(matched_in, "plan"), nullptr, false);
      if (j.is_discarded()) throw Error("plan", "matched dataset is not valid JSON");
      MatchedDataset ds;
      try {
        j.get_to(ds);
      } catch (const nlohmann::json::exception& e) {
        throw Error("plan", std::string("malformed matched dataset: ") + e.what());
      }
      PlanOptions opts{p.plan_mode, p.plan_k, p.strict_ctc ? CtcPolicy::Strict : CtcPolicy::MatchedOnly,
                       p.only_uncovered};
      write_output(output, dump_canonical(nlohmann::json(simulate_plan(ds, opts))));
      return 0;
    }
    if (*rep) {
      std::vector<AnalyticsReport> loaded;
      for (const auto& path : saved) loaded.push_back(parse_report(read_text_file(path, "report")));
      if (loaded.size() == 1) {
        write_output(output, emit_report(loaded.front(), parse_report_format(format)));
      } else {
        write_output(output, emit_summary(loaded));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "ecolens: " << e.stage() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ecolens: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
