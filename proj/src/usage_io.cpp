#include <json.hpp>

#include "ecolens/extractor.hpp"
#include "text_util.hpp"

namespace ecolens {

namespace {

using json = nlohmann::json;

constexpr std::string_view kStage = "usage";

std::string require_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw std::invalid_argument(std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> require_strings(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) throw std::invalid_argument(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw std::invalid_argument(std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

UsageRecord record_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("expected an object");
  UsageRecord r;
  r.dependent = require_string(doc, "dependent");
  if (r.dependent.empty()) throw std::invalid_argument("'dependent' is empty");
  r.method.package_name = require_string(doc, "package");
  for (auto& part : require_strings(doc, "class_chain")) {
    for (char& c : part)
      if (c == '.') c = '$';
    for (auto& piece : text::split(part, '$')) r.method.class_chain.push_back(std::move(piece));
  }
  r.method.method_name = require_string(doc, "name");
  r.tier = parse_resolution_tier(require_string(doc, "tier"));
  for (const auto& p : require_strings(doc, "params")) {
    if (r.tier == ResolutionTier::Resolved) {
      r.method.param_types.push_back(canonicalize_type_name(p));
    } else {
      // Untrusted types only contribute their count.
      try {
        r.method.param_types.push_back(canonicalize_type_name(p));
      } catch (const MalformedTypeName&) {
        r.method.param_types.emplace_back(kUnknownType);
      }
    }
  }
  if (r.tier == ResolutionTier::NameOnly) r.method.param_types.clear();
  r.file = require_string(doc, "file");
  auto line = doc.find("line");
  if (line == doc.end() || !line->is_number_integer()) throw std::invalid_argument("'line' must be an integer");
  if (line->get<std::int64_t>() < 1) throw std::invalid_argument("'line' must be >= 1");
  r.line = line->get<std::size_t>();
  validate(r.method);
  return r;
}

}  // namespace

std::vector<DependentUsage> parse_usage_records(std::string_view stream, Diagnostics& diag, std::string_view source) {
  std::map<std::string, std::vector<UsageRecord>> groups;
  auto lines = text::lines(text::strip_bom(stream));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = text::trim(lines[n]);
    if (line.empty()) continue;
    try {
      UsageRecord r = record_from_json(json::parse(line));
      groups[r.dependent].push_back(std::move(r));
    } catch (const std::exception& e) {
      diag.warn(std::string(kStage), std::string(source), n + 1, std::string("rejected record: ") + e.what());
    }
  }
  std::vector<DependentUsage> out;
  for (auto& [name, records] : groups) out.push_back(DependentUsage{name, std::move(records)});
  return out;
}

std::string usage_records_to_jsonl(std::span<const DependentUsage> usages) {
  std::string out;
  for (const auto& du : usages)
    for (const auto& r : du.records) {
      json doc = {{"dependent", r.dependent},       {"package", r.method.package_name},
                  {"class_chain", r.method.class_chain}, {"name", r.method.method_name},
                  {"params", r.method.param_types}, {"tier", std::string(wire_name(r.tier))},
                  {"file", r.file},                 {"line", r.line}};
      out += doc.dump() + "\n";
    }
  return out;
}

}  // namespace ecolens
