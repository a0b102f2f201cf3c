#include "ecolens/coverage.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <tuple>

#include "text_util.hpp"
#include "xml.hpp"

namespace ecolens {

namespace {

constexpr std::string_view kStage = "coverage";

[[noreturn]] void bad_descriptor(std::string_view desc, const std::string& why) {
  throw Error(std::string(kStage), "invalid method descriptor '" + std::string(desc) + "': " + why);
}

std::string parse_field_type(std::string_view desc, std::size_t& i, bool allow_void) {
  int dims = 0;
  while (i < desc.size() && desc[i] == '[') {
    ++dims;
    ++i;
  }
  if (i >= desc.size()) bad_descriptor(desc, "truncated type");
  std::string base;
  switch (desc[i]) {
    case 'B': base = "byte"; break;
    case 'C': base = "char"; break;
    case 'D': base = "double"; break;
    case 'F': base = "float"; break;
    case 'I': base = "int"; break;
    case 'J': base = "long"; break;
    case 'S': base = "short"; break;
    case 'Z': base = "boolean"; break;
    case 'V':
      if (!allow_void || dims > 0) bad_descriptor(desc, "void in parameter position");
      base = "void";
      break;
    case 'L': {
      std::size_t end = desc.find(';', i);
      if (end == std::string_view::npos || end == i + 1) bad_descriptor(desc, "unterminated class type");
      base = std::string(desc.substr(i + 1, end - i - 1));
      for (char& c : base)
        if (c == '/') c = '.';
      for (const auto& seg : text::split(base, '.'))
        if (!is_identifier(seg)) bad_descriptor(desc, "bad class name '" + base + "'");
      i = end;
      break;
    }
    default:
      bad_descriptor(desc, std::string("unexpected '") + desc[i] + "'");
  }
  ++i;
  for (int d = 0; d < dims; ++d) base += "[]";
  return base;
}

std::string render_field_type(std::string_view canonical) {
  std::string out;
  std::string_view base = canonical;
  while (base.ends_with("[]")) {
    out += '[';
    base.remove_suffix(2);
  }
  static const std::map<std::string_view, char> prims = {{"byte", 'B'},  {"char", 'C'},  {"double", 'D'},
                                                         {"float", 'F'}, {"int", 'I'},   {"long", 'J'},
                                                         {"short", 'S'}, {"boolean", 'Z'}, {"void", 'V'}};
  if (auto it = prims.find(base); it != prims.end()) return out + it->second;
  std::string cls(base);
  for (char& c : cls)
    if (c == '.') c = '/';
  return out + 'L' + cls + ';';
}

std::uint64_t parse_count(const std::string* attr, std::string_view what, std::string_view source, std::size_t line) {
  std::uint64_t value = 0;
  if (!attr) throw Error(std::string(kStage), std::string(source) + ":" + std::to_string(line) + ": counter lacks '" +
                                                  std::string(what) + "'");
  auto [ptr, ec] = std::from_chars(attr->data(), attr->data() + attr->size(), value);
  if (ec != std::errc() || ptr != attr->data() + attr->size())
    throw Error(std::string(kStage), std::string(source) + ":" + std::to_string(line) + ": bad counter value '" +
                                         *attr + "'");
  return value;
}

void read_class(const xml::Element& cls, std::vector<CoverageEntry>& out, Diagnostics& diag, std::string_view source) {
  const std::string* cname = cls.attribute("name");
  if (!cname || cname->empty())
    throw Error(std::string(kStage), std::string(source) + ":" + std::to_string(cls.line) + ": class without name");
  std::string dotted = *cname;
  for (char& c : dotted)
    if (c == '/') c = '.';
  std::size_t dot = dotted.rfind('.');
  std::string package = dot == std::string::npos ? "" : dotted.substr(0, dot);
  auto chain = text::split(dot == std::string::npos ? dotted : dotted.substr(dot + 1), '$');
  for (const auto& c : chain)
    if (!is_identifier(c)) return;  // anonymous or synthetic class

  for (const xml::Element* m : cls.children_named("method")) {
    const std::string* name = m->attribute("name");
    if (!name) throw Error(std::string(kStage), std::string(source) + ":" + std::to_string(m->line) + ": method without name");
    if (*name == "<clinit>" || name->find('$') != std::string::npos) continue;

    const xml::Element* counter = nullptr;
    for (const xml::Element* c : m->children_named("counter"))
      if (const std::string* type = c->attribute("type"); type && *type == "INSTRUCTION") counter = c;
    if (!counter) {
      diag.warn(std::string(kStage), std::string(source), m->line,
                "method " + *cname + "." + *name + " has no INSTRUCTION counter");
      continue;
    }
    std::uint64_t covered = parse_count(counter->attribute("covered"), "covered", source, counter->line);
    std::uint64_t missed = parse_count(counter->attribute("missed"), "missed", source, counter->line);
    if (covered + missed == 0) {
      diag.warn(std::string(kStage), std::string(source), m->line, "method " + *cname + "." + *name + " has no instructions");
      continue;
    }

    std::size_t source_line = 0;
    if (const std::string* l = m->attribute("line"))
      std::from_chars(l->data(), l->data() + l->size(), source_line);
    CoverageEntry e{ApiMethodId{package, chain, *name, {}}, false, "", CoverageState(covered, missed), source_line};
    if (const std::string* desc = m->attribute("desc")) {
      e.method.param_types = parse_jvm_descriptor(*desc).params;
      e.has_descriptor = true;
      e.descriptor = *desc;
    }
    if (!is_valid(e.method)) {
      diag.warn(std::string(kStage), std::string(source), m->line, "skipping unusable method " + e.method.display());
      continue;
    }
    out.push_back(std::move(e));
  }
}

void read_container(const xml::Element& el, std::vector<CoverageEntry>& out, Diagnostics& diag,
                    std::string_view source) {
  for (const auto& child : el.children) {
    if (child->name == "group") read_container(*child, out, diag, source);
    else if (child->name == "package")
      for (const xml::Element* cls : child->children_named("class")) read_class(*cls, out, diag, source);
  }
}

auto merge_key(const CoverageEntry& e) {
  return std::make_tuple(e.method.class_name(), e.method.method_name, e.has_descriptor, e.descriptor);
}

// Strict total order used to pick the surviving duplicate.
bool better(const CoverageEntry& a, const CoverageEntry& b) {
  if (a.state.ratio() != b.state.ratio()) return a.state.ratio() > b.state.ratio();
  if (a.state.covered() != b.state.covered()) return a.state.covered() > b.state.covered();
  if (a.state.missed() != b.state.missed()) return a.state.missed() < b.state.missed();
  return a.line < b.line;
}

}  // namespace

MethodDescriptor parse_jvm_descriptor(std::string_view desc) {
  if (desc.empty() || desc.front() != '(') bad_descriptor(desc, "missing '('");
  MethodDescriptor out;
  std::size_t i = 1;
  while (i < desc.size() && desc[i] != ')') out.params.push_back(parse_field_type(desc, i, false));
  if (i >= desc.size()) bad_descriptor(desc, "missing ')'");
  ++i;
  out.return_type = parse_field_type(desc, i, true);
  if (i != desc.size()) bad_descriptor(desc, "trailing characters");
  return out;
}

std::string render_jvm_descriptor(const MethodDescriptor& desc) {
  std::string out = "(";
  for (const auto& p : desc.params) out += render_field_type(p);
  return out + ")" + render_field_type(desc.return_type);
}

std::vector<CoverageEntry> parse_jacoco_report(std::string_view document, Diagnostics& diag, std::string_view source) {
  xml::ParseError err;
  auto root = xml::parse(document, err);
  if (!root)
    throw Error(std::string(kStage), std::string(source) + ":" + std::to_string(err.line) + ": malformed XML: " + err.message);
  if (root->name != "report")
    throw Error(std::string(kStage), std::string(source) + ": root element is <" + root->name + ">, expected <report>");
  std::vector<CoverageEntry> out;
  read_container(*root, out, diag, source);
  return out;
}

std::vector<CoverageEntry> merge_coverage(std::span<const std::vector<CoverageEntry>> reports) {
  std::map<decltype(merge_key(std::declval<CoverageEntry>())), CoverageEntry> merged;
  for (const auto& report : reports)
    for (const auto& e : report) {
      auto [it, inserted] = merged.try_emplace(merge_key(e), e);
      if (!inserted && better(e, it->second)) it->second = e;
    }
  std::vector<CoverageEntry> out;
  out.reserve(merged.size());
  for (auto& [key, e] : merged) out.push_back(std::move(e));
  return out;
}

}  // namespace ecolens
