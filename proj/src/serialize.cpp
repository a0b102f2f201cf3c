#include "ecolens/serialize.hpp"

namespace ecolens {

using nlohmann::json;

void to_json(json& j, const Fraction& f) {
  j = json{{"num", f.num()},
           {"den", f.den()},
           {"percent", static_cast<double>(f.scaled_percent(1)) / 10.0},
           {"percent_int", f.scaled_percent(0)}};
}

void from_json(const json& j, Fraction& f) { f = Fraction(j.at("num").get<std::uint64_t>(), j.at("den").get<std::uint64_t>()); }

void to_json(json& j, const ApiMethodId& id) {
  j = json{{"package", id.package_name}, {"class_chain", id.class_chain}, {"name", id.method_name},
           {"params", id.param_types}};
}

void from_json(const json& j, ApiMethodId& id) {
  j.at("package").get_to(id.package_name);
  j.at("class_chain").get_to(id.class_chain);
  j.at("name").get_to(id.method_name);
  j.at("params").get_to(id.param_types);
  validate(id);
}

void to_json(json& j, const UsageKey& key) {
  j = key.method;
  j["tier"] = std::string(wire_name(key.tier));
  j["key"] = key.display();
}

void from_json(const json& j, UsageKey& key) {
  j.get_to(key.method);
  key.tier = parse_resolution_tier(j.at("tier").get<std::string>());
}

void to_json(json& j, const MatchResult& m) {
  j = json{{"tier", std::string(to_string(m.tier))}, {"candidates", m.candidates_considered}};
  if (m.coverage) {
    j["covered"] = m.coverage->covered();
    j["missed"] = m.coverage->missed();
    j["ratio"] = m.coverage->ratio();
    j["state"] = std::string(to_string(m.coverage->tag()));
  }
}

void from_json(const json& j, MatchResult& m) {
  m.tier = parse_match_tier(j.at("tier").get<std::string>());
  m.candidates_considered = j.at("candidates").get<std::size_t>();
  m.coverage.reset();
  if (j.contains("covered"))
    m.coverage = CoverageState(j.at("covered").get<std::uint64_t>(), j.at("missed").get<std::uint64_t>());
  if (m.coverage.has_value() == (m.tier == MatchTier::NoMatch))
    throw Error("report", "match tier and coverage presence disagree");
}

void to_json(json& j, const MatchedRow& row) {
  j = json{{"method", row.used},
           {"calls", row.call_count},
           {"dependents", row.dependent_names},
           {"match", row.match}};
}

void from_json(const json& j, MatchedRow& row) {
  j.at("method").get_to(row.used);
  j.at("calls").get_to(row.call_count);
  row.dependent_names = j.at("dependents").get<std::set<std::string>>();
  j.at("match").get_to(row.match);
}

void to_json(json& j, const MatchStats& s) {
  json counts = json::object();
  json shares = json::object();
  for (MatchTier t : kMatchTiers) {
    counts[std::string(to_string(t))] = s.count(t);
    if (s.total > 0) shares[std::string(to_string(t))] = s.share(t);
  }
  j = json{{"total", s.total}, {"counts", counts}, {"shares", shares}};
  if (s.total > 0) j["unambiguous"] = s.unambiguous_share();
}

void from_json(const json& j, MatchStats& s) {
  s = MatchStats{};
  j.at("total").get_to(s.total);
  for (const auto& [name, v] : j.at("counts").items()) s.counts[parse_match_tier(name)] = v.get<std::uint64_t>();
}

void to_json(json& j, const MatchedDataset& ds) {
  j = json{{"rows", ds.rows}, {"stats", ds.stats}, {"dependents", ds.dependents}};
}

void from_json(const json& j, MatchedDataset& ds) {
  j.at("rows").get_to(ds.rows);
  ds.dependents = j.at("dependents").get<std::set<std::string>>();
  std::sort(ds.rows.begin(), ds.rows.end(), [](const MatchedRow& a, const MatchedRow& b) { return a.used < b.used; });
  refresh_stats(ds);
}

void to_json(json& j, const UsageShare& s) {
  j = json{{"used", s.used_in_inventory},
           {"inventory", s.inventory_size},
           {"share", s.fraction()},
           {"absent", s.absent},
           {"ambiguous", s.ambiguous}};
}

void from_json(const json& j, UsageShare& s) {
  j.at("used").get_to(s.used_in_inventory);
  j.at("inventory").get_to(s.inventory_size);
  j.at("absent").get_to(s.absent);
  j.at("ambiguous").get_to(s.ambiguous);
}

void to_json(json& j, const UsageDistribution& d) {
  json buckets = json::array();
  for (UsageBucket b : kUsageBuckets)
    buckets.push_back(json{{"bucket", std::string(to_string(b))}, {"methods", d.count(b)}, {"share", d.share(b)}});
  j = json{{"used_methods", d.total}, {"buckets", buckets}};
}

void from_json(const json& j, UsageDistribution& d) {
  d = UsageDistribution{};
  j.at("used_methods").get_to(d.total);
  for (const auto& b : j.at("buckets")) {
    std::string name = b.at("bucket").get<std::string>();
    for (UsageBucket ub : kUsageBuckets)
      if (to_string(ub) == name) d.counts[static_cast<std::size_t>(ub)] = b.at("methods").get<std::uint64_t>();
  }
}

void to_json(json& j, const UbcResult& r) {
  j = json{{"n_covered", r.n_covered}, {"n_used", r.n_used}, {"value", r.fraction()}};
}

void from_json(const json& j, UbcResult& r) {
  j.at("n_covered").get_to(r.n_covered);
  j.at("n_used").get_to(r.n_used);
}

void to_json(json& j, const CtcResult& r) {
  json excluded = json::array();
  for (const auto& e : r.excluded_dependents) excluded.push_back(json{{"name", e.name}, {"reason", e.reason}});
  j = json{{"np_fully_covered", r.np_fully_covered},
           {"np_total", r.np_total},
           {"value", r.fraction()},
           {"excluded_dependents", excluded}};
}

void from_json(const json& j, CtcResult& r) {
  j.at("np_fully_covered").get_to(r.np_fully_covered);
  j.at("np_total").get_to(r.np_total);
  r.excluded_dependents.clear();
  for (const auto& e : j.at("excluded_dependents"))
    r.excluded_dependents.push_back({e.at("name").get<std::string>(), e.at("reason").get<std::string>()});
}

void to_json(json& j, const TopUsed& t) {
  j = json{{"method", t.key}, {"dependents", t.dependent_count}, {"calls", t.call_count}};
}

void from_json(const json& j, TopUsed& t) {
  j.at("method").get_to(t.key);
  j.at("dependents").get_to(t.dependent_count);
  j.at("calls").get_to(t.call_count);
}

void to_json(json& j, const TestingPlan& p) {
  json steps = json::array();
  for (const auto& s : p.steps)
    steps.push_back(json{{"method", s.method}, {"dependents_unblocked", s.dependents_unblocked}, {"ctc", s.cumulative}});
  j = json{{"mode", std::string(to_string(p.mode))},
           {"steps", steps},
           {"baseline_ctc", p.baseline_ctc},
           {"new_ctc", p.new_ctc},
           {"tested_apis", p.steps.size()}};
}

void from_json(const json& j, TestingPlan& p) {
  p.mode = parse_plan_mode(j.at("mode").get<std::string>());
  p.steps.clear();
  for (const auto& s : j.at("steps"))
    p.steps.push_back(PlanStep{s.at("method").get<UsageKey>(), s.at("dependents_unblocked").get<std::size_t>(),
                               s.at("ctc").get<CtcResult>()});
  j.at("baseline_ctc").get_to(p.baseline_ctc);
  j.at("new_ctc").get_to(p.new_ctc);
}

void to_json(json& j, const Warning& w) {
  j = json{{"stage", w.stage}, {"source", w.source}, {"line", w.line}, {"message", w.message}};
}

void from_json(const json& j, Warning& w) {
  j.at("stage").get_to(w.stage);
  j.at("source").get_to(w.source);
  j.at("line").get_to(w.line);
  j.at("message").get_to(w.message);
}

void to_json(json& j, const DependentCoverage& d) {
  j = json{{"name", d.name},
           {"methods_used", d.methods_used},
           {"methods_matched", d.methods_matched},
           {"methods_full", d.methods_full},
           {"excluded", d.excluded},
           {"fully_covered", d.fully_covered}};
}

void from_json(const json& j, DependentCoverage& d) {
  j.at("name").get_to(d.name);
  j.at("methods_used").get_to(d.methods_used);
  j.at("methods_matched").get_to(d.methods_matched);
  j.at("methods_full").get_to(d.methods_full);
  j.at("excluded").get_to(d.excluded);
  j.at("fully_covered").get_to(d.fully_covered);
}

void to_json(json& j, const CoverageEntry& e) {
  j = json{{"class", e.method.class_name()},
           {"name", e.method.method_name},
           {"covered", e.state.covered()},
           {"missed", e.state.missed()},
           {"state", std::string(to_string(e.state.tag()))}};
  if (e.has_descriptor) j["desc"] = e.descriptor;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

}  // namespace ecolens
