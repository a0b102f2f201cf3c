#include "ecolens/report.hpp"

#include <sstream>

#include "ecolens/serialize.hpp"

namespace ecolens {

using nlohmann::json;

namespace {

std::string pct(const Fraction& f) { return f.percent_text(1) + "%"; }

std::string library_label(const ReportMeta& meta) {
  if (meta.library.artifact.empty()) return "library";
  return meta.library.artifact;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Four-decimal rendering of a ratio in [0, 1], rounded half away from zero.
std::string ratio_decimal(const Fraction& f) {
  std::int64_t scaled = f.scaled_percent(2);  // ratio × 10^4
  std::string frac = std::to_string(scaled % 10000);
  return std::to_string(scaled / 10000) + "." + std::string(4 - frac.size(), '0') + frac;
}

json dependent_to_json(const DependentReport& d) {
  return json{{"name", d.name},
              {"status", d.status},
              {"files_scanned", d.files_scanned},
              {"files_referencing", d.files_referencing},
              {"files_skipped", d.files_skipped},
              {"call_sites", d.call_sites},
              {"unresolved_calls", d.unresolved_calls},
              {"coverage", d.coverage},
              {"metadata", d.metadata}};
}

DependentReport dependent_from_json(const json& j) {
  DependentReport d;
  j.at("name").get_to(d.name);
  j.at("status").get_to(d.status);
  j.at("files_scanned").get_to(d.files_scanned);
  j.at("files_referencing").get_to(d.files_referencing);
  j.at("files_skipped").get_to(d.files_skipped);
  j.at("call_sites").get_to(d.call_sites);
  j.at("unresolved_calls").get_to(d.unresolved_calls);
  j.at("coverage").get_to(d.coverage);
  j.at("metadata").get_to(d.metadata);
  return d;
}

void write_markdown(std::ostream& out, const AnalyticsReport& r) {
  const std::string lib = library_label(r.meta);
  const auto& c = r.meta.library;
  out << "# API usage report: " << (c.group.empty() ? lib : c.group + ":" + c.artifact + ":" + c.version) << "\n\n";
  out << "- Ranking: " << r.meta.ranking << "\n";
  out << "- CTC policy: " << r.meta.ctc_policy << "\n";
  out << "- Dependents analyzed: " << r.ctc.np_total + r.ctc.excluded_dependents.size() << "\n\n";

  out << "## Usage share\n\n";
  out << r.usage_share.used_in_inventory << " of " << r.usage_share.inventory_size << " inventory methods used ("
      << pct(r.usage_share.fraction()) << ").";
  if (!r.usage_share.absent.empty()) out << " " << r.usage_share.absent.size() << " used keys not in the inventory.";
  if (!r.usage_share.ambiguous.empty())
    out << " " << r.usage_share.ambiguous.size() << " used keys match several inventory methods.";
  out << "\n\n";

  out << "## Usage distribution\n\n";
  out << "| Library | # Used APIs |";
  for (UsageBucket b : kUsageBuckets) out << " " << to_string(b) << " |";
  out << "\n|---|---|---|---|---|---|\n";
  out << "| " << lib << " | " << r.distribution.total << " |";
  for (UsageBucket b : kUsageBuckets) {
    out << " " << r.distribution.count(b);
    if (r.distribution.total > 0) out << " (" << pct(r.distribution.share(b)) << ")";
    out << " |";
  }
  out << "\n\n";

  out << "## Coverage\n\n";
  out << "| Library | Project Coverage | Usage-Based API Test Coverage |\n|---|---|---|\n";
  out << "| " << lib << " | " << pct(r.project_coverage) << " | " << r.ubc.n_covered << "/" << r.ubc.n_used << " ("
      << pct(r.ubc.fraction()) << ") |\n\n";

  out << "## Community test coverage\n\n";
  out << "| Library | CTC | Tested APIs | New CTC |\n|---|---|---|---|\n";
  out << "| " << lib << " | " << pct(r.ctc.fraction()) << " | " << r.plan.steps.size() << " | "
      << pct(r.plan.new_ctc.fraction()) << " |\n\n";

  out << "## Match tiers\n\n| Tier | Methods | Share |\n|---|---|---|\n";
  for (MatchTier t : kMatchTiers) {
    out << "| " << to_string(t) << " | " << r.match_stats.count(t) << " | "
        << (r.match_stats.total > 0 ? pct(r.match_stats.share(t)) : std::string("-")) << " |\n";
  }
  out << "\n";

  out << "## Most used methods\n\n| # | Method | Dependents | Calls |\n|---|---|---|---|\n";
  for (std::size_t i = 0; i < r.top_used.size(); ++i) {
    const auto& t = r.top_used[i];
    out << "| " << i + 1 << " | `" << t.key.display() << "` | " << t.dependent_count << " | " << t.call_count
        << " |\n";
  }
  out << "\n";

  out << "## Testing plan (" << to_string(r.plan.mode) << ")\n\n";
  out << "Baseline CTC " << pct(r.plan.baseline_ctc.fraction()) << ", new CTC " << pct(r.plan.new_ctc.fraction())
      << " after " << r.plan.steps.size() << " step(s).\n\n";
  if (!r.plan.steps.empty()) {
    out << "| Step | Method | Dependents unblocked | CTC |\n|---|---|---|---|\n";
    for (std::size_t i = 0; i < r.plan.steps.size(); ++i) {
      const auto& s = r.plan.steps[i];
      out << "| " << i + 1 << " | `" << s.method.display() << "` | " << s.dependents_unblocked << " | "
          << pct(s.cumulative.fraction()) << " |\n";
    }
    out << "\n";
  }

  out << "## Dependents\n\n";
  out << "| Dependent | Status | Files | Call sites | Unresolved | Used | Matched | Full | Fully covered |\n";
  out << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& d : r.dependents) {
    out << "| " << d.name << " | " << d.status << " | " << d.files_referencing << "/" << d.files_scanned << " | "
        << d.call_sites << " | " << d.unresolved_calls << " | " << d.coverage.methods_used << " | "
        << d.coverage.methods_matched << " | " << d.coverage.methods_full << " | "
        << (d.coverage.excluded ? "excluded" : (d.coverage.fully_covered ? "yes" : "no")) << " |\n";
  }
  out << "\n";

  if (!r.warnings.empty()) {
    out << "## Warnings\n\n";
    for (const auto& w : r.warnings) out << "- " << to_string(w) << "\n";
    out << "\n";
  }
}

void write_csv(std::ostream& out, const AnalyticsReport& r) {
  out << "method,usage_tier,dependents,calls,match_tier,covered,missed,ratio,state\n";
  for (const auto& row : r.methods) {
    out << csv_field(row.used.method.display()) << "," << wire_name(row.used.tier) << ","
        << row.dependent_names.size() << "," << row.call_count << "," << to_string(row.match.tier) << ",";
    if (row.match.coverage) {
      const auto& s = *row.match.coverage;
      out << s.covered() << "," << s.missed() << "," << ratio_decimal(s.ratio()) << "," << to_string(s.tag());
    } else {
      out << ",,,";
    }
    out << "\n";
  }
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "markdown" || text == "md") return ReportFormat::Markdown;
  if (text == "csv") return ReportFormat::Csv;
  throw Error("report", "unknown report format '" + std::string(text) + "'");
}

json report_to_json(const AnalyticsReport& r) {
  json deps = json::array();
  for (const auto& d : r.dependents) deps.push_back(dependent_to_json(d));
  json stats = r.match_stats;
  stats["methods"] = r.methods;
  json ubc = r.ubc;
  ubc["project_coverage"] = r.project_coverage;
  return json{{"usage_share", r.usage_share},
              {"distribution", r.distribution},
              {"ubc", ubc},
              {"ctc", r.ctc},
              {"match_stats", stats},
              {"top_used", r.top_used},
              {"plan", r.plan},
              {"dependents", deps},
              {"warnings", r.warnings},
              {"meta", json{{"tool_version", r.meta.tool_version},
                            {"config_hash", r.meta.config_hash},
                            {"library", json{{"group", r.meta.library.group},
                                             {"artifact", r.meta.library.artifact},
                                             {"version", r.meta.library.version}}},
                            {"ctc_policy", r.meta.ctc_policy},
                            {"ranking", r.meta.ranking}}}};
}

AnalyticsReport report_from_json(const json& j) {
  AnalyticsReport r;
  try {
    j.at("usage_share").get_to(r.usage_share);
    j.at("distribution").get_to(r.distribution);
    j.at("ubc").get_to(r.ubc);
    j.at("ubc").at("project_coverage").get_to(r.project_coverage);
    j.at("ctc").get_to(r.ctc);
    j.at("match_stats").get_to(r.match_stats);
    j.at("match_stats").at("methods").get_to(r.methods);
    j.at("top_used").get_to(r.top_used);
    j.at("plan").get_to(r.plan);
    for (const auto& d : j.at("dependents")) r.dependents.push_back(dependent_from_json(d));
    j.at("warnings").get_to(r.warnings);
    const auto& m = j.at("meta");
    m.at("tool_version").get_to(r.meta.tool_version);
    m.at("config_hash").get_to(r.meta.config_hash);
    m.at("library").at("group").get_to(r.meta.library.group);
    m.at("library").at("artifact").get_to(r.meta.library.artifact);
    m.at("library").at("version").get_to(r.meta.library.version);
    m.at("ctc_policy").get_to(r.meta.ctc_policy);
    m.at("ranking").get_to(r.meta.ranking);
  } catch (const json::exception& e) {
    throw Error("report", std::string("malformed report: ") + e.what());
  }
  return r;
}

AnalyticsReport parse_report(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("report", "report is not valid JSON");
  return report_from_json(j);
}

std::string emit_report(const AnalyticsReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Json:
      return dump_canonical(report_to_json(report));
    case ReportFormat::Markdown:
      write_markdown(out, report);
      break;
    case ReportFormat::Csv:
      write_csv(out, report);
      break;
  }
  return out.str();
}

std::string emit_summary(const std::vector<AnalyticsReport>& reports) {
  if (reports.empty()) throw Error("report", "no reports to summarize");
  std::ostringstream out;
  std::vector<Fraction> ubc, ctc, new_ctc;
  std::vector<std::uint64_t> ubc_n, ubc_d, ctc_n, ctc_d, new_n, new_d;
  out << "| Library | Used APIs | UBC | CTC | Tested APIs | New CTC |\n|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    out << "| " << library_label(r.meta) << " | " << r.distribution.total << " | " << pct(r.ubc.fraction()) << " | "
        << pct(r.ctc.fraction()) << " | " << r.plan.steps.size() << " | " << pct(r.plan.new_ctc.fraction())
        << " |\n";
    ubc.push_back(r.ubc.fraction());
    ctc.push_back(r.ctc.fraction());
    new_ctc.push_back(r.plan.new_ctc.fraction());
    ubc_n.push_back(r.ubc.n_covered);
    ubc_d.push_back(r.ubc.n_used);
    ctc_n.push_back(r.ctc.np_fully_covered);
    ctc_d.push_back(r.ctc.np_total);
    new_n.push_back(r.plan.new_ctc.np_fully_covered);
    new_d.push_back(r.plan.new_ctc.np_total);
  }
  out << "| Mean | | " << pct(mean_of_fractions(ubc)) << " | " << pct(mean_of_fractions(ctc)) << " | | "
      << pct(mean_of_fractions(new_ctc)) << " |\n";
  out << "| Pooled | | " << pct(pooled_fraction(ubc_n, ubc_d)) << " | " << pct(pooled_fraction(ctc_n, ctc_d))
      << " | | " << pct(pooled_fraction(new_n, new_d)) << " |\n";
  return out.str();
}

}  // namespace ecolens
