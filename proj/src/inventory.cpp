#include "ecolens/inventory.hpp"

#include <map>
#include <optional>

#include <json.hpp>

#include "text_util.hpp"

namespace ecolens {

namespace {

using json = nlohmann::json;

constexpr std::string_view kStage = "inventory";

const std::set<std::string_view>& member_modifiers() {
  static const std::set<std::string_view> mods = {
      "public", "protected", "private", "static", "final", "abstract", "synchronized",
      "native", "default", "strictfp", "transient", "volatile", "sealed", "non-sealed"};
  return mods;
}

// Type-variable name -> erased bound, from a `<T extends A & B, U>` clause.
using TypeVars = std::map<std::string, std::string>;

void collect_type_vars(std::string_view clause, TypeVars& vars) {
  clause = text::trim(clause);
  if (clause.size() < 2 || clause.front() != '<' || clause.back() != '>') return;
  clause = clause.substr(1, clause.size() - 2);
  for (std::string_view decl : text::split_top_level(clause, ',')) {
    auto words = text::split_words(text::trim(decl));
    if (words.empty()) continue;
    std::string name(words[0]);
    std::string bound = "java.lang.Object";
    if (words.size() >= 3 && words[1] == "extends") {
      std::string_view rest = text::trim(decl.substr(decl.find("extends") + 7));
      std::string_view first = text::trim(text::split_top_level(rest, '&').front());
      try {
        bound = canonicalize_type_name(first);
      } catch (const MalformedTypeName&) {
      }
    }
    vars[name] = bound;
  }
  // A bound may name another variable: `<T, U extends T>`.
  for (int round = 0; round < 4; ++round)
    for (auto& [name, bound] : vars) {
      auto it = vars.find(bound);
      if (it != vars.end() && it->first != name) bound = it->second;
    }
}

std::string erase_type_var(const std::string& canonical, const TypeVars& method_vars,
                           const TypeVars& class_vars) {
  std::size_t bracket = canonical.find('[');
  std::string base = canonical.substr(0, bracket);
  std::string dims = bracket == std::string::npos ? "" : canonical.substr(bracket);
  if (auto it = method_vars.find(base); it != method_vars.end()) return it->second + dims;
  if (auto it = class_vars.find(base); it != class_vars.end()) return it->second + dims;
  return canonical;
}

struct ClassBlock {
  bool is_public = false;
  bool usable = false;  // false for anonymous/local classes
  std::string package_name;
  std::vector<std::string> chain;
  std::string binary_name;  // pkg.Outer$Inner
  TypeVars type_vars;
};

std::optional<ClassBlock> parse_class_header(std::string_view line) {
  line = text::trim(line);
  if (line.empty() || line.back() != '{') return std::nullopt;
  line = text::trim(line.substr(0, line.size() - 1));
  auto words = text::split_words(line);
  std::size_t kw = words.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string_view w = words[i];
    if (w == "class" || w == "interface" || w == "enum" || w == "record" || w == "@interface") {
      kw = i;
      break;
    }
  }
  if (kw + 1 >= words.size()) return std::nullopt;

  ClassBlock block;
  for (std::size_t i = 0; i < kw; ++i)
    if (words[i] == "public") block.is_public = true;

  std::string_view name = words[kw + 1];
  if (auto lt = name.find('<'); lt != std::string_view::npos) {
    collect_type_vars(name.substr(lt), block.type_vars);
    name = name.substr(0, lt);
  }
  block.binary_name = std::string(name);
  std::size_t dot = name.rfind('.');
  std::string_view simple = name;
  if (dot != std::string_view::npos) {
    block.package_name = std::string(name.substr(0, dot));
    simple = name.substr(dot + 1);
  }
  block.chain = text::split(simple, '$');
  block.usable = true;
  for (const auto& c : block.chain)
    if (!is_identifier(c)) block.usable = false;
  return block;
}

enum class MemberKind { Method, Skip, Malformed };

MemberKind parse_member(std::string_view line, const ClassBlock& cls, ApiMethodId& out) {
  line = text::trim(line);
  if (line.empty() || line.back() != ';') return MemberKind::Malformed;
  line.remove_suffix(1);
  line = text::trim(line);
  if (line == "static {}" || line == "static") return MemberKind::Skip;

  // The parameter list opens at the first '(' outside angle brackets.
  int depth = 0;
  std::size_t open = std::string_view::npos;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '<') ++depth;
    else if (line[i] == '>') --depth;
    else if (line[i] == '(' && depth == 0) {
      open = i;
      break;
    }
  }
  if (open == std::string_view::npos) return MemberKind::Skip;  // field
  std::size_t close = line.find(')', open);
  if (close == std::string_view::npos) return MemberKind::Malformed;

  auto words = text::split_words(line.substr(0, open));
  if (words.empty()) return MemberKind::Malformed;

  bool is_public = false;
  TypeVars method_vars;
  std::vector<std::string_view> rest;
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    std::string_view w = words[i];
    if (member_modifiers().count(w)) {
      if (w == "public") is_public = true;
    } else if (w.front() == '<') {
      collect_type_vars(w, method_vars);
    } else {
      rest.push_back(w);
    }
  }
  std::string_view name = words.back();
  if (rest.size() > 1) return MemberKind::Malformed;
  if (!is_public) return MemberKind::Skip;

  ApiMethodId id;
  id.package_name = cls.package_name;
  id.class_chain = cls.chain;
  if (rest.empty()) {
    // No return type: a constructor, printed with the class binary name.
    std::string_view simple = name.substr(name.rfind('.') == std::string_view::npos ? 0 : name.rfind('.') + 1);
    if (name != cls.binary_name && simple != cls.chain.back()) return MemberKind::Malformed;
    id.method_name = std::string(kConstructorName);
  } else {
    if (!is_identifier(name)) return MemberKind::Malformed;
    if (name.find('$') != std::string_view::npos) return MemberKind::Skip;  // synthetic
    id.method_name = std::string(name);
  }

  std::string_view params = text::trim(line.substr(open + 1, close - open - 1));
  if (!params.empty()) {
    for (std::string_view p : text::split_top_level(params, ',')) {
      std::string canonical;
      try {
        canonical = canonicalize_type_name(p);
      } catch (const MalformedTypeName&) {
        return MemberKind::Malformed;
      }
      id.param_types.push_back(erase_type_var(canonical, method_vars, cls.type_vars));
    }
  }
  if (!is_valid(id)) return MemberKind::Malformed;
  out = std::move(id);
  return MemberKind::Method;
}

[[noreturn]] void schema_error(std::string_view source, const std::string& path, const std::string& what) {
  throw Error(std::string(kStage), std::string(source) + ": schema violation at " + path + ": " + what);
}

const json& require(const json& obj, const char* key, json::value_t type, std::string_view source,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(source, path + "/" + key, "missing");
  bool ok = it->type() == type ||
            (type == json::value_t::number_integer && it->type() == json::value_t::number_unsigned);
  if (!ok) schema_error(source, path + "/" + key, std::string("expected ") + json(type).type_name());
  return *it;
}

std::vector<std::string> chain_from_json(const json& arr, std::string_view source, const std::string& path) {
  std::vector<std::string> chain;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) schema_error(source, path + "/" + std::to_string(i), "expected string");
    // Accept source spelling (Outer.Inner) and binary spelling (Outer$Inner).
    std::string part = arr[i].get<std::string>();
    for (char& c : part)
      if (c == '.') c = '$';
    for (auto& piece : text::split(part, '$')) chain.push_back(std::move(piece));
  }
  return chain;
}

// Splits physical lines at `{`, `;` and `}` so that a class written on one
// line reads the same as the usual one-member-per-line layout. Pairs carry
// the zero-based physical line index.
std::vector<std::pair<std::size_t, std::string>> logical_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  auto physical = text::lines(text);
  for (std::size_t n = 0; n < physical.size(); ++n) {
    std::string buf;
    auto emit = [&](std::string piece) {
      std::string_view t = text::trim(piece);
      if (!t.empty()) out.emplace_back(n, std::string(t));
    };
    for (char c : physical[n]) {
      std::string_view cur = text::trim(buf);
      if (c == '{' && cur != "static") {
        emit(buf + " {");
        buf.clear();
      } else if (c == '}' && cur != "static {") {
        emit(buf);
        emit("}");
        buf.clear();
      } else if (c == ';') {
        emit(buf + ";");
        buf.clear();
      } else {
        buf += c;
      }
    }
    emit(buf);
  }
  return out;
}

}  // namespace

std::vector<ApiMethodId> parse_javap_listing(std::string_view text, Diagnostics& diag, std::string_view source) {
  std::vector<ApiMethodId> methods;
  std::optional<ClassBlock> current;
  for (const auto& [n, logical] : logical_lines(text::strip_bom(text))) {
    std::string_view line = logical;
    if (line.empty() || line.starts_with("Compiled from")) continue;
    if (!current) {
      current = parse_class_header(line);
      if (!current)
        throw Error(std::string(kStage), std::string(source) + ":" + std::to_string(n + 1) +
                                             ": class header missing before '" + std::string(line) + "'");
      continue;
    }
    if (line == "}") {
      current.reset();
      continue;
    }
    if (!current->usable) continue;  // anonymous and local classes are not API
    ApiMethodId id;
    switch (parse_member(line, *current, id)) {
      case MemberKind::Method:
        if (current->is_public && current->usable) methods.push_back(std::move(id));
        break;
      case MemberKind::Skip:
        break;
      case MemberKind::Malformed:
        diag.warn(std::string(kStage), std::string(source), n + 1,
                  "unparseable member line '" + std::string(line) + "'");
        break;
    }
  }
  return methods;
}

ApiInventory inventory_from_listings(const LibraryCoordinates& library, std::span<const std::string> listings,
                                     Diagnostics& diag, bool include_constructors) {
  ApiInventory inv;
  inv.library = library;
  for (std::size_t i = 0; i < listings.size(); ++i) {
    for (auto& m : parse_javap_listing(listings[i], diag, "listing#" + std::to_string(i)))
      if (include_constructors || !m.is_constructor()) inv.methods.insert(std::move(m));
    ++inv.source_listing_count;
  }
  if (inv.methods.empty()) throw Error(std::string(kStage), "empty inventory");
  return inv;
}

ApiInventory parse_inventory_json(std::string_view document, Diagnostics& diag, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text::strip_bom(document));
  } catch (const json::parse_error& e) {
    throw Error(std::string(kStage), std::string(source) + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) schema_error(source, "", "expected object");

  ApiInventory inv;
  const json& lib = require(doc, "library", json::value_t::object, source, "");
  inv.library.group = require(lib, "group", json::value_t::string, source, "/library").get<std::string>();
  inv.library.artifact = require(lib, "artifact", json::value_t::string, source, "/library").get<std::string>();
  inv.library.version = require(lib, "version", json::value_t::string, source, "/library").get<std::string>();

  const json& methods = require(doc, "methods", json::value_t::array, source, "");
  if (methods.empty()) throw Error(std::string(kStage), std::string(source) + ": empty inventory");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    std::string path = "/methods/" + std::to_string(i);
    const json& m = methods[i];
    if (!m.is_object()) schema_error(source, path, "expected object");
    ApiMethodId id;
    id.package_name = require(m, "package", json::value_t::string, source, path).get<std::string>();
    id.class_chain = chain_from_json(require(m, "class_chain", json::value_t::array, source, path), source,
                                     path + "/class_chain");
    id.method_name = require(m, "name", json::value_t::string, source, path).get<std::string>();
    const json& params = require(m, "params", json::value_t::array, source, path);
    for (std::size_t j = 0; j < params.size(); ++j) {
      std::string ppath = path + "/params/" + std::to_string(j);
      if (!params[j].is_string()) schema_error(source, ppath, "expected string");
      try {
        id.param_types.push_back(canonicalize_type_name(params[j].get<std::string>()));
      } catch (const MalformedTypeName& e) {
        schema_error(source, ppath, e.what());
      }
    }
    if (!is_valid(id)) schema_error(source, path, "invalid method id " + id.display());
    if (!inv.methods.insert(id).second)
      diag.warn(std::string(kStage), std::string(source), 0, "duplicate method " + id.display());
  }
  inv.source_listing_count = 1;
  return inv;
}

std::string inventory_to_json(const ApiInventory& inventory) {
  json methods = json::array();
  for (const auto& m : inventory.methods)
    methods.push_back({{"package", m.package_name},
                       {"class_chain", m.class_chain},
                       {"name", m.method_name},
                       {"params", m.param_types}});
  json doc = {{"library",
               {{"group", inventory.library.group},
                {"artifact", inventory.library.artifact},
                {"version", inventory.library.version}}},
              {"methods", std::move(methods)}};
  return doc.dump(2) + "\n";
}

ApiInventory merge_inventories(std::span<const ApiInventory> parts) {
  if (parts.empty()) throw Error(std::string(kStage), "no inventories to merge");
  ApiInventory merged;
  merged.library = parts.front().library;
  for (const auto& part : parts) {
    if (part.library.group != merged.library.group)
      throw Error(std::string(kStage), "cannot merge inventories of different groups '" + merged.library.group +
                                           "' and '" + part.library.group + "'");
    // Modules of one library may carry different artifact ids; keep the smallest for determinism.
    merged.library = std::min(merged.library, part.library);
    merged.methods.insert(part.methods.begin(), part.methods.end());
    merged.source_listing_count += part.source_listing_count;
  }
  return merged;
}

void remove_constructors(ApiInventory& inventory) {
  std::erase_if(inventory.methods, [](const ApiMethodId& m) { return m.is_constructor(); });
}

}  // namespace ecolens
