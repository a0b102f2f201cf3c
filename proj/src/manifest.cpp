#include <charconv>
#include <functional>

#include "ecolens/extractor.hpp"
#include "text_util.hpp"
#include "xml.hpp"

namespace ecolens {

namespace {

constexpr std::string_view kStage = "version-filter";

std::optional<std::vector<unsigned long>> numeric_components(std::string_view version, std::size_t want) {
  std::vector<unsigned long> out;
  std::size_t i = 0;
  while (out.size() < want && i < version.size()) {
    unsigned long value = 0;
    auto [ptr, ec] = std::from_chars(version.data() + i, version.data() + version.size(), value);
    if (ec != std::errc() || ptr == version.data() + i) break;
    out.push_back(value);
    i = static_cast<std::size_t>(ptr - version.data());
    if (i < version.size() && version[i] != '.') break;
    ++i;
  }
  if (out.size() < want) return std::nullopt;
  return out;
}

// `${a}` expansion through <properties>; nullopt when anything stays unresolved.
std::optional<std::string> expand(std::string value, const std::map<std::string, std::string>& props) {
  for (int round = 0; round < 16; ++round) {
    std::size_t open = value.find("${");
    if (open == std::string::npos) return value;
    std::size_t close = value.find('}', open);
    if (close == std::string::npos) return std::nullopt;
    auto it = props.find(value.substr(open + 2, close - open - 2));
    if (it == props.end()) return std::nullopt;
    value.replace(open, close - open + 1, it->second);
  }
  return std::nullopt;
}

void collect_dependencies(const xml::Element& el, std::vector<const xml::Element*>& out) {
  for (const auto& child : el.children) {
    if (child->name == "dependency") out.push_back(child.get());
    else if (child->name != "plugins" && child->name != "build") collect_dependencies(*child, out);
  }
}

}  // namespace

bool check_version_alignment(std::string_view manifest, const LibraryCoordinates& library,
                             std::string_view major_stream, Diagnostics& diag, std::string_view source) {
  xml::ParseError err;
  auto root = xml::parse(manifest, err);
  if (!root) {
    diag.warn(std::string(kStage), std::string(source), err.line, "malformed manifest: " + err.message);
    return false;
  }

  std::vector<unsigned long> stream;
  for (const auto& part : text::split(major_stream, '.')) {
    unsigned long v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size())
      throw Error(std::string(kStage), "major stream '" + std::string(major_stream) + "' is not numeric");
    stream.push_back(v);
  }

  std::map<std::string, std::string> props;
  if (const xml::Element* p = root->child("properties"))
    for (const auto& prop : p->children) props[prop->name] = std::string(text::trim(prop->text));
  if (std::string v = root->child_text("version"); !v.empty()) {
    props.emplace("project.version", v);
  } else if (const xml::Element* parent = root->child("parent")) {
    if (std::string pv = parent->child_text("version"); !pv.empty()) props.emplace("project.version", pv);
  }

  std::vector<const xml::Element*> deps;
  collect_dependencies(*root, deps);
  for (const xml::Element* dep : deps) {
    if (dep->child_text("groupId") != library.group || dep->child_text("artifactId") != library.artifact) continue;
    auto version = expand(dep->child_text("version"), props);
    if (!version || version->empty()) continue;
    auto comps = numeric_components(*version, stream.size());
    if (comps && *comps == stream) return true;
  }
  return false;
}

}  // namespace ecolens
