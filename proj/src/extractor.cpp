#include "ecolens/extractor.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "ecolens/java_lexer.hpp"
#include "text_util.hpp"

namespace ecolens {

namespace {

constexpr std::string_view kStage = "extractor";

using java::Token;
using java::TokenKind;

// ---------------------------------------------------------------------------
// Import scanning

// Comment bodies and literal contents become spaces; newlines survive so
// line numbers stay valid. Unterminated constructs simply run to the end.
std::string blank_non_code(std::string_view src) {
  enum class State { Code, Line, Block, Str, Chr, TextBlock } st = State::Code;
  std::string out(src);
  for (std::size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    char n = i + 1 < src.size() ? src[i + 1] : '\0';
    switch (st) {
      case State::Code:
        if (c == '/' && n == '/') {
          st = State::Line;
          out[i] = out[i + 1] = ' ';
          ++i;
        } else if (c == '/' && n == '*') {
          st = State::Block;
          out[i] = out[i + 1] = ' ';
          ++i;
        } else if (src.substr(i, 3) == "\"\"\"") {
          st = State::TextBlock;
          i += 2;
        } else if (c == '"') {
          st = State::Str;
        } else if (c == '\'') {
          st = State::Chr;
        }
        break;
      case State::Line:
        if (c == '\n') st = State::Code;
        else out[i] = ' ';
        break;
      case State::Block:
        if (c == '*' && n == '/') {
          out[i] = out[i + 1] = ' ';
          ++i;
          st = State::Code;
        } else if (c != '\n') {
          out[i] = ' ';
        }
        break;
      case State::Str:
      case State::Chr: {
        char quote = st == State::Str ? '"' : '\'';
        if (c == '\\' && n != '\n') {
          out[i] = ' ';
          if (i + 1 < out.size()) out[i + 1] = ' ';
          ++i;
        } else if (c == quote || c == '\n') {
          st = State::Code;
        } else {
          out[i] = ' ';
        }
        break;
      }
      case State::TextBlock:
        if (src.substr(i, 3) == "\"\"\"") {
          st = State::Code;
          i += 2;
        } else if (c != '\n') {
          out[i] = ' ';
        }
        break;
    }
  }
  return out;
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

bool parse_import_statement(std::string_view stmt, std::size_t line, ImportDecl& out) {
  stmt = text::trim(stmt);
  if (!stmt.starts_with("import") || stmt.size() < 7 || ident_char(stmt[6])) return false;
  stmt = text::trim(stmt.substr(6));
  ImportDecl decl;
  decl.line = line;
  if (stmt.starts_with("static") && stmt.size() > 6 && !ident_char(stmt[6])) {
    decl.is_static = true;
    stmt = text::trim(stmt.substr(6));
  }
  std::string target = strip_spaces(stmt);
  if (target.ends_with(".*")) {
    decl.wildcard = true;
    target.resize(target.size() - 2);
  }
  if (target.empty()) return false;
  for (const auto& seg : text::split(target, '.'))
    if (!is_identifier(seg)) return false;
  decl.target = std::move(target);
  out = std::move(decl);
  return true;
}

void scan_qualified_usage(const std::vector<std::string_view>& code_lines, std::span<const std::string> prefixes,
                          std::vector<ImportDecl>& out) {
  std::set<std::string> seen;
  for (std::size_t n = 0; n < code_lines.size(); ++n) {
    std::string_view line = code_lines[n];
    std::string_view trimmed = text::trim(line);
    if (trimmed.starts_with("import") || trimmed.starts_with("package")) continue;
    for (const auto& prefix : prefixes) {
      std::size_t pos = 0;
      while ((pos = line.find(prefix, pos)) != std::string_view::npos) {
        std::size_t start = pos;
        pos += prefix.size();
        if (start > 0 && (ident_char(line[start - 1]) || line[start - 1] == '.')) continue;
        if (pos >= line.size() || line[pos] != '.') continue;
        std::size_t end = pos;
        while (end < line.size() && (ident_char(line[end]) || line[end] == '.')) ++end;
        std::string chain(line.substr(start, end - start));
        while (!chain.empty() && chain.back() == '.') chain.pop_back();
        if (chain.size() <= prefix.size() || !seen.insert(chain).second) continue;
        out.push_back(ImportDecl{chain, false, false, true, n + 1});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Call-site extraction

const std::set<std::string_view>& java_lang_types() {
  static const std::set<std::string_view> names = {
      "Object",   "String",     "Integer",   "Long",           "Double",    "Float",
      "Boolean",  "Character",  "Byte",      "Short",          "Number",    "Math",
      "System",   "Class",      "Iterable",  "CharSequence",   "Runnable",  "Thread",
      "Exception", "RuntimeException", "Throwable", "Error", "StringBuilder", "StringBuffer",
      "Enum",     "Void",       "Comparable", "AutoCloseable", "Override",  "Deprecated",
      "IllegalArgumentException", "IllegalStateException", "NullPointerException", "Record"};
  return names;
}

const std::set<std::string_view>& object_methods() {
  static const std::set<std::string_view> names = {"toString", "equals", "hashCode", "getClass",
                                                    "notify",   "notifyAll", "wait",   "clone",
                                                    "finalize"};
  return names;
}

const std::set<std::string_view>& declaration_modifiers() {
  static const std::set<std::string_view> names = {"final", "static", "private", "public", "protected",
                                                    "transient", "volatile", "abstract", "synchronized",
                                                    "default", "native", "strictfp"};
  return names;
}

const std::map<std::string_view, std::string_view>& boxes() {
  static const std::map<std::string_view, std::string_view> m = {
      {"int", "java.lang.Integer"}, {"long", "java.lang.Long"},       {"double", "java.lang.Double"},
      {"float", "java.lang.Float"}, {"boolean", "java.lang.Boolean"}, {"char", "java.lang.Character"},
      {"byte", "java.lang.Byte"},   {"short", "java.lang.Short"}};
  return m;
}

int primitive_rank(std::string_view t) {
  if (t == "byte") return 1;
  if (t == "short") return 2;
  if (t == "char") return 2;
  if (t == "int") return 3;
  if (t == "long") return 4;
  if (t == "float") return 5;
  if (t == "double") return 6;
  return 0;
}

bool widens(std::string_view from, std::string_view to) {
  if (from == to) return true;
  if (from == "boolean" || to == "boolean") return false;
  if (from == "char" && to == "short") return false;
  if ((from == "byte" || from == "short") && to == "char") return false;
  int a = primitive_rank(from), b = primitive_rank(to);
  return a > 0 && b > 0 && a < b;
}

constexpr std::string_view kNullType = "null";

bool compatible(std::string_view arg, std::string_view param) {
  if (arg == param) return true;
  bool param_prim = is_primitive_type(param);
  bool arg_prim = is_primitive_type(arg);
  if (arg == kNullType) return !param_prim;
  if (arg_prim && param_prim) return widens(arg, param);
  if (arg_prim) {
    auto box = boxes().find(arg);
    if (box != boxes().end() && box->second == param) return true;
    if (param == "java.lang.Object" || param == "java.io.Serializable") return true;
    return param == "java.lang.Number" && arg != "boolean" && arg != "char";
  }
  if (param_prim) {
    for (const auto& [prim, box] : boxes())
      if (box == arg) return widens(prim, param);
    return false;
  }
  if (param == "java.lang.Object") return true;
  if (arg == "java.lang.String" &&
      (param == "java.lang.CharSequence" || param == "java.lang.Comparable" || param == "java.io.Serializable"))
    return true;
  // An unqualified side compares by simple name.
  bool arg_simple = arg.find('.') == std::string_view::npos;
  bool param_simple = param.find('.') == std::string_view::npos;
  if (arg_simple || param_simple) {
    auto dims = [](std::string_view t) { return std::count(t.begin(), t.end(), '['); };
    return simple_type_name(arg) == simple_type_name(param) && dims(arg) == dims(param);
  }
  return false;
}

struct TypeRef {
  enum class Kind { Library, NonLibrary, Unknown } kind = Kind::Unknown;
  std::string canonical;  // binary name for library classes; with [] dims
  bool trusted = false;   // established through an import or a qualified name
};

struct ParsedType {
  std::size_t end = 0;  // index one past the type
  std::vector<std::string> segments;
  int dims = 0;
};

class FileExtractor {
 public:
  FileExtractor(const std::vector<Token>& toks, const ImportScan& imports, const InventoryIndex& index,
                std::string_view dependent, std::string_view file)
      : t_(toks), index_(index), dependent_(dependent), file_(file) {
    for (const auto& imp : imports.imports) {
      if (imp.implicit) continue;
      if (imp.is_static) {
        std::size_t dot = imp.target.rfind('.');
        if (imp.wildcard) static_wildcards_.push_back(imp.target);
        else if (dot != std::string::npos) static_members_[imp.target.substr(dot + 1)].push_back(imp.target.substr(0, dot));
      } else if (imp.wildcard) {
        wildcard_packages_.push_back(imp.target);
      } else {
        std::size_t dot = imp.target.rfind('.');
        single_imports_[imp.target.substr(dot == std::string::npos ? 0 : dot + 1)] = imp.target;
      }
    }
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
      const auto& w = t_[i].text;
      if (t_[i].kind == TokenKind::Identifier &&
          (w == "class" || w == "interface" || w == "enum" || w == "record") &&
          t_[i + 1].kind == TokenKind::Identifier && (i == 0 || t_[i - 1].text != "."))
        declared_types_.insert(t_[i + 1].text);
    }
  }

  FileExtraction run() {
    scopes_.assign(1, {});
    std::size_t skip_until = 0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const Token& tok = t_[i];
      if (tok.kind == TokenKind::Punct) {
        if (tok.text == "{") scopes_.emplace_back();
        else if (tok.text == "}" && scopes_.size() > 1) scopes_.pop_back();
        continue;
      }
      if (tok.kind != TokenKind::Identifier) continue;
      if (tok.text == "import" || tok.text == "package") {
        while (i < t_.size() && t_[i].text != ";") ++i;
        continue;
      }
      if (tok.text == "new") {
        skip_until = std::max(skip_until, constructor_call(i));
        continue;
      }
      try_declaration(i);
      if (i < skip_until) continue;
      if (i + 1 < t_.size() && is(i + 1, "(")) method_call(i);
    }
    return std::move(result_);
  }

 private:
  bool is(std::size_t i, std::string_view s) const { return i < t_.size() && t_[i].text == s; }
  bool ident(std::size_t i) const {
    return i < t_.size() && t_[i].kind == TokenKind::Identifier && !java::is_keyword(t_[i].text);
  }

  // Skips a balanced `<...>` group starting at i; returns the index past it.
  std::optional<std::size_t> skip_generics(std::size_t i) const {
    if (!is(i, "<")) return i;
    int depth = 0;
    for (std::size_t j = i; j < t_.size(); ++j) {
      const auto& s = t_[j].text;
      if (s == "<") ++depth;
      else if (s == ">") {
        if (--depth == 0) return j + 1;
      } else if (t_[j].kind == TokenKind::Identifier) {
        continue;
      } else if (s == "&") {
        if (is(j + 1, "&")) return std::nullopt;
      } else if (s != "." && s != "," && s != "?" && s != "[" && s != "]" && s != "@") {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<ParsedType> parse_type(std::size_t i, bool allow_dims = true) const {
    if (i >= t_.size() || t_[i].kind != TokenKind::Identifier) return std::nullopt;
    ParsedType pt;
    const std::string& first = t_[i].text;
    if (is_primitive_type(first) && first != "void") {
      pt.segments.push_back(first);
      ++i;
    } else if (!java::is_keyword(first)) {
      pt.segments.push_back(first);
      ++i;
      while (is(i, ".") && ident(i + 1)) {
        pt.segments.push_back(t_[i + 1].text);
        i += 2;
      }
      auto after = skip_generics(i);
      if (!after) return std::nullopt;
      i = *after;
      // Generic nested type: Outer<T>.Inner
      while (is(i, ".") && ident(i + 1)) {
        pt.segments.push_back(t_[i + 1].text);
        i += 2;
        after = skip_generics(i);
        if (!after) return std::nullopt;
        i = *after;
      }
    } else {
      return std::nullopt;
    }
    if (allow_dims) {
      while (is(i, "[") && is(i + 1, "]")) {
        ++pt.dims;
        i += 2;
      }
      if (is(i, "...")) {
        ++pt.dims;
        ++i;
      }
    }
    pt.end = i;
    return pt;
  }

  static std::string join(const std::vector<std::string>& segs, std::size_t from, std::size_t to, char sep) {
    std::string out;
    for (std::size_t k = from; k < to; ++k) {
      if (k > from) out += sep;
      out += segs[k];
    }
    return out;
  }

  // Library class for a dotted spelling, if the inventory knows it.
  std::optional<TypeRef> library_class(const std::string& dotted, bool trusted) const {
    if (const std::string* bin = index_.class_by_source_name(dotted))
      return TypeRef{TypeRef::Kind::Library, *bin, trusted};
    return std::nullopt;
  }

  // Resolves a class-name spelling; nullopt when nothing is known about it.
  std::optional<TypeRef> resolve_class(const std::vector<std::string>& segs) const {
    if (segs.empty()) return std::nullopt;
    std::string dotted = join(segs, 0, segs.size(), '.');
    std::string rest = join(segs, 1, segs.size(), '.');
    auto with_rest = [&](const std::string& base) { return rest.empty() ? base : base + "." + rest; };

    if (segs.size() > 1)
      if (auto lib = library_class(dotted, true)) return lib;
    const std::string& first = segs.front();
    if (auto it = single_imports_.find(first); it != single_imports_.end()) {
      if (auto lib = library_class(with_rest(it->second), true)) return lib;
      return TypeRef{TypeRef::Kind::NonLibrary, with_rest(it->second), true};
    }
    if (declared_types_.count(first)) return TypeRef{TypeRef::Kind::NonLibrary, dotted, true};
    for (const auto& pkg : wildcard_packages_)
      if (auto lib = library_class(pkg + "." + dotted, true)) return lib;
    if (segs.size() == 1 && java_lang_types().count(first))
      return TypeRef{TypeRef::Kind::NonLibrary, "java.lang." + first, true};
    // Last resort: a unique simple name in the inventory, not import-backed.
    const auto& candidates = index_.classes_by_simple_name(first);
    if (candidates.size() == 1) {
      std::string bin = candidates.front();
      for (std::size_t k = 1; k < segs.size(); ++k) bin += "$" + segs[k];
      if (index_.has_class(bin)) return TypeRef{TypeRef::Kind::Library, bin, false};
    }
    if (segs.size() > 1 && std::islower(static_cast<unsigned char>(first.front())))
      return TypeRef{TypeRef::Kind::NonLibrary, dotted, true};
    return std::nullopt;
  }

  TypeRef resolve_declared(const ParsedType& pt) const {
    TypeRef ref;
    if (pt.segments.size() == 1 && is_primitive_type(pt.segments.front())) {
      ref = TypeRef{TypeRef::Kind::NonLibrary, pt.segments.front(), true};
    } else if (auto r = resolve_class(pt.segments)) {
      ref = *r;
    } else {
      ref = TypeRef{TypeRef::Kind::NonLibrary, join(pt.segments, 0, pt.segments.size(), '.'), false};
    }
    if (pt.dims > 0) {
      // Arrays of library classes are not receivers of library methods.
      if (ref.kind == TypeRef::Kind::Library) ref.kind = TypeRef::Kind::NonLibrary;
      for (int d = 0; d < pt.dims; ++d) ref.canonical += "[]";
    }
    return ref;
  }

  const TypeRef* lookup_var(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void try_declaration(std::size_t i) {
    if (i > 0) {
      const Token& prev = t_[i - 1];
      bool ok = false;
      if (prev.kind == TokenKind::Punct) {
        ok = prev.text == "{" || prev.text == "}" || prev.text == ";" || prev.text == "(" || prev.text == "," ||
             prev.text == ")";
      } else if (prev.kind == TokenKind::Identifier) {
        ok = declaration_modifiers().count(prev.text) || (i >= 2 && is(i - 2, "@"));
      }
      if (!ok) return;
    }
    const std::string& w = t_[i].text;
    if (w == "return" || w == "throw" || w == "yield" || w == "case" || w == "else" || w == "new") return;
    auto pt = parse_type(i);
    if (!pt || !ident(pt->end) || pt->end + 1 >= t_.size()) return;
    const std::string& next = t_[pt->end + 1].text;
    if (next != "=" && next != ";" && next != "," && next != ")" && next != ":") return;

    std::size_t name_at = pt->end;
    TypeRef ref;
    bool is_var = pt->segments.size() == 1 && pt->segments.front() == "var" && pt->dims == 0;
    if (!is_var) ref = resolve_declared(*pt);
    // A library type on the right of `= new` refines a non-library declared type.
    if (next == "=" && is(name_at + 2, "new")) {
      if (auto ctor = parse_type(name_at + 3, false); ctor && is(ctor->end, "(")) {
        TypeRef constructed = resolve_declared(*ctor);
        if (is_var || (ref.kind != TypeRef::Kind::Library && constructed.kind == TypeRef::Kind::Library))
          ref = constructed;
      }
    }
    scopes_.back()[t_[name_at].text] = ref;
  }

  std::size_t matching_close(std::size_t open) const {
    int depth = 0;
    for (std::size_t j = open; j < t_.size(); ++j) {
      const auto& s = t_[j].text;
      if (t_[j].kind != TokenKind::Punct) continue;
      if (s == "(" || s == "[" || s == "{") ++depth;
      else if (s == ")" || s == "]" || s == "}") {
        if (--depth == 0) return j;
      }
    }
    return t_.size();
  }

  std::size_t matching_open(std::size_t close) const {
    int depth = 0;
    for (std::size_t j = close + 1; j-- > 0;) {
      const auto& s = t_[j].text;
      if (t_[j].kind != TokenKind::Punct) continue;
      if (s == ")" || s == "]" || s == "}") ++depth;
      else if (s == "(" || s == "[" || s == "{") {
        if (--depth == 0) return j;
      }
    }
    return t_.size();
  }

  // Argument token ranges for the call whose '(' is at `open`.
  std::vector<std::pair<std::size_t, std::size_t>> split_args(std::size_t open, std::size_t close) const {
    std::vector<std::pair<std::size_t, std::size_t>> args;
    if (close == open + 1) return args;
    std::size_t start = open + 1;
    int depth = 0;
    for (std::size_t j = open + 1; j < close; ++j) {
      const auto& s = t_[j].text;
      if (t_[j].kind == TokenKind::Punct) {
        if (s == "(" || s == "[" || s == "{") ++depth;
        else if (s == ")" || s == "]" || s == "}") --depth;
        else if (s == "<" && j > open + 1 && t_[j - 1].kind == TokenKind::Identifier) {
          if (auto after = skip_generics(j); after && *after <= close) j = *after - 1;
        } else if (s == "," && depth == 0) {
          args.emplace_back(start, j);
          start = j + 1;
        }
      }
    }
    args.emplace_back(start, close);
    return args;
  }

  std::optional<std::string> literal_type(const Token& tok) const {
    switch (tok.kind) {
      case TokenKind::String: return "java.lang.String";
      case TokenKind::Char: return "char";
      case TokenKind::Int: return "int";
      case TokenKind::Long: return "long";
      case TokenKind::Float: return "float";
      case TokenKind::Double: return "double";
      default: break;
    }
    if (tok.text == "true" || tok.text == "false") return "boolean";
    if (tok.text == "null") return std::string(kNullType);
    return std::nullopt;
  }

  std::optional<std::string> infer_arg(std::size_t b, std::size_t e) const {
    if (b >= e) return std::nullopt;
    if (e - b == 1) {
      if (auto lit = literal_type(t_[b])) return lit;
      if (ident(b))
        if (const TypeRef* v = lookup_var(t_[b].text); v && v->kind != TypeRef::Kind::Unknown) return v->canonical;
      return std::nullopt;
    }
    if (e - b == 2 && is(b, "-") && t_[b + 1].kind != TokenKind::Identifier && t_[b + 1].kind != TokenKind::Punct)
      return literal_type(t_[b + 1]);
    if (e - b == 3 && ident(b) && is(b + 1, ".") && is(b + 2, "class")) return "java.lang.Class";
    if (is(b, "new")) {
      auto pt = parse_type(b + 1, false);
      if (!pt) return std::nullopt;
      std::size_t j = pt->end;
      if (is(j, "(") && matching_close(j) == e - 1) return resolve_declared(*pt).canonical;
      if (is(j, "[")) {
        while (is(j, "[")) {
          ++pt->dims;
          j = matching_close(j) + 1;
        }
        if (j == e || (is(j, "{") && matching_close(j) == e - 1)) return resolve_declared(*pt).canonical;
      }
      return std::nullopt;
    }
    if (t_[b].kind == TokenKind::String) {
      for (std::size_t j = b + 1; j < e; ++j)
        if (is(j, "+")) return "java.lang.String";
    }
    if (is(b, "(")) {
      auto pt = parse_type(b + 1);
      if (pt && is(pt->end, ")") && pt->end + 1 < e) {
        const std::string& head = pt->segments.front();
        if (is_primitive_type(head) || std::isupper(static_cast<unsigned char>(head.front())))
          return resolve_declared(*pt).canonical;
      }
    }
    return std::nullopt;
  }

  void record(const ApiMethodId& id, ResolutionTier tier, std::size_t line) {
    result_.records.push_back(UsageRecord{std::string(dependent_), id, tier, std::string(file_), line});
  }

  static ApiMethodId with_placeholders(const ApiMethodId& m, std::size_t arity) {
    ApiMethodId id = m;
    id.param_types.assign(arity, std::string(kUnknownType));
    return id;
  }

  void known_receiver(const TypeRef& cls, const std::string& name, std::size_t open, std::size_t line) {
    auto methods = index_.methods(cls.canonical, name);
    if (methods.empty()) {
      // Possibly inherited from a class we cannot see; not attributable.
      if (index_.has_method_name(name)) ++result_.unresolved;
      return;
    }
    std::size_t close = matching_close(open);
    auto args = split_args(open, close);
    std::size_t arity = args.size();

    std::vector<const ApiMethodId*> exact;
    for (const auto* m : methods)
      if (m->param_types.size() == arity) exact.push_back(m);
    if (exact.empty()) {
      std::set<std::size_t> declared;
      const ApiMethodId* any = nullptr;
      for (const auto* m : methods) {
        const auto& p = m->param_types;
        if (!p.empty() && p.back().ends_with("[]") && arity + 1 >= p.size()) {
          declared.insert(p.size());
          any = m;
        }
      }
      if (declared.size() == 1) record(with_placeholders(*any, *declared.begin()), ResolutionTier::ArityOnly, line);
      else ++result_.unresolved;
      return;
    }
    if (!cls.trusted) {
      record(with_placeholders(*exact.front(), arity), ResolutionTier::ArityOnly, line);
      return;
    }
    if (exact.size() == 1) {
      record(*exact.front(), ResolutionTier::Resolved, line);
      return;
    }
    std::vector<std::optional<std::string>> types;
    bool all_known = true;
    for (auto [b, e] : args) {
      types.push_back(infer_arg(b, e));
      all_known = all_known && types.back().has_value();
    }
    std::vector<const ApiMethodId*> fits;
    for (const auto* m : exact) {
      bool ok = true;
      for (std::size_t k = 0; k < arity && ok; ++k)
        if (types[k]) ok = compatible(*types[k], m->param_types[k]);
      if (ok) fits.push_back(m);
    }
    if (all_known && fits.size() == 1) {
      record(*fits.front(), ResolutionTier::Resolved, line);
      return;
    }
    record(with_placeholders(*exact.front(), arity), ResolutionTier::ArityOnly, line);
  }

  void unknown_receiver(const std::string& name, std::size_t line) {
    if (object_methods().count(name)) return;
    const auto& classes = index_.classes_with_method(name);
    if (classes.empty()) return;
    if (classes.size() > 1) {
      ++result_.unresolved;
      return;
    }
    ApiMethodId id = *index_.methods(*classes.begin(), name).front();
    id.param_types.clear();
    record(id, ResolutionTier::NameOnly, line);
  }

  std::size_t constructor_call(std::size_t at) {
    auto pt = parse_type(at + 1, false);
    if (!pt) return at + 1;
    if (!is(pt->end, "(")) return pt->end;
    TypeRef ref = resolve_declared(*pt);
    if (ref.kind == TypeRef::Kind::Library)
      known_receiver(ref, std::string(kConstructorName), pt->end, t_[at].line);
    return pt->end;
  }

  TypeRef receiver_of_chain(const std::vector<std::string>& segs) const {
    TypeRef unknown;
    if (segs.front() == "this" || segs.front() == "super") {
      if (segs.size() == 2)
        if (const TypeRef* v = lookup_var(segs[1])) return *v;
      return unknown;
    }
    if (const TypeRef* v = lookup_var(segs.front())) return segs.size() == 1 ? *v : unknown;
    if (auto cls = resolve_class(segs)) return *cls;
    for (std::size_t len = segs.size() - 1; len > 0; --len)
      if (resolve_class({segs.begin(), segs.begin() + static_cast<std::ptrdiff_t>(len)})) return unknown;
    if (segs.size() == 1 && std::isupper(static_cast<unsigned char>(segs.front().front())))
      return TypeRef{TypeRef::Kind::NonLibrary, segs.front(), false};
    return unknown;
  }

  void method_call(std::size_t i) {
    const std::string& name = t_[i].text;
    if (java::is_keyword(name)) return;
    std::size_t line = t_[i].line;
    if (i > 0) {
      const Token& prev = t_[i - 1];
      if (prev.text == "@") return;
      if (prev.kind == TokenKind::Identifier && prev.text != "return" && prev.text != "throw" &&
          prev.text != "else" && prev.text != "case" && prev.text != "yield" && prev.text != "new")
        return;  // method declaration
      if (prev.text == "]") return;
      if (prev.text == ">" && closes_type_generic(i - 1)) return;
    }
    if (i == 0 || !is(i - 1, ".")) {
      static_import_call(name, i + 1, line);
      return;
    }
    // Qualified call: walk back over `a.b.c` to find the receiver.
    std::size_t j = i - 1;  // at '.'
    if (j == 0) return;
    const Token& before = t_[j - 1];
    if (before.text == ")") {
      std::size_t open = matching_open(j - 1);
      if (open < t_.size() && open >= 1) {
        // new T(...).name(...)
        std::size_t k = open;
        while (k > 0 && t_[k - 1].kind == TokenKind::Identifier && t_[k - 1].text != "new") {
          if (k >= 2 && is(k - 2, ".")) k -= 2;
          else {
            --k;
            break;
          }
        }
        if (k > 0 && is(k - 1, "new")) {
          if (auto pt = parse_type(k, false); pt && pt->end == open) {
            TypeRef ref = resolve_declared(*pt);
            if (ref.kind == TypeRef::Kind::Library) known_receiver(ref, name, i + 1, line);
            return;
          }
        }
      }
      unknown_receiver(name, line);
      return;
    }
    if (before.kind == TokenKind::String) return;  // "literal".method()
    if (before.kind != TokenKind::Identifier) {
      if (before.text == ">") return;  // explicit type arguments: Foo.<T>bar()
      unknown_receiver(name, line);
      return;
    }
    std::vector<std::string> segs;
    std::size_t k = j - 1;
    while (true) {
      if (t_[k].kind != TokenKind::Identifier) break;
      segs.insert(segs.begin(), t_[k].text);
      if (k >= 2 && is(k - 1, ".") && t_[k - 2].kind == TokenKind::Identifier) {
        k -= 2;
        continue;
      }
      if (k >= 1 && is(k - 1, ".")) {
        // Chain continues through a call or index expression.
        unknown_receiver(name, line);
        return;
      }
      break;
    }
    if (segs.size() == 1 && (segs.front() == "this" || segs.front() == "super")) return;
    TypeRef recv = receiver_of_chain(segs);
    switch (recv.kind) {
      case TypeRef::Kind::Library: known_receiver(recv, name, i + 1, line); break;
      case TypeRef::Kind::NonLibrary: break;
      case TypeRef::Kind::Unknown: unknown_receiver(name, line); break;
    }
  }

  // True when the '>' at `gt` closes generic arguments of a type, i.e. the
  // identifier after it is a declaration rather than a comparison operand.
  bool closes_type_generic(std::size_t gt) const {
    int depth = 0;
    for (std::size_t j = gt + 1; j-- > 0;) {
      const auto& s = t_[j].text;
      if (s == ">") ++depth;
      else if (s == "<") {
        if (--depth == 0) return j > 0 && (t_[j - 1].kind == TokenKind::Identifier || j == 0 ||
                                           declaration_boundary(j - 1));
      } else if (s == "&" && j > 0 && t_[j - 1].text == "&") {
        return false;
      } else if (t_[j].kind != TokenKind::Identifier && s != "." && s != "," && s != "?" && s != "[" &&
                 s != "]" && s != "&") {
        return false;
      }
    }
    return false;
  }

  bool declaration_boundary(std::size_t j) const {
    const auto& s = t_[j].text;
    return s == "{" || s == "}" || s == ";" || declaration_modifiers().count(s);
  }

  void static_import_call(const std::string& name, std::size_t open, std::size_t line) {
    std::vector<std::string> owners;
    if (auto it = static_members_.find(name); it != static_members_.end()) owners = it->second;
    for (const auto& cls : static_wildcards_) {
      const std::string* bin = index_.class_by_source_name(cls);
      if (bin && !index_.methods(*bin, name).empty()) owners.push_back(cls);
    }
    for (const auto& owner : owners) {
      if (const std::string* bin = index_.class_by_source_name(owner)) {
        known_receiver(TypeRef{TypeRef::Kind::Library, *bin, true}, name, open, line);
        return;
      }
    }
  }

  const std::vector<Token>& t_;
  const InventoryIndex& index_;
  std::string_view dependent_;
  std::string_view file_;
  std::map<std::string, std::string> single_imports_;
  std::vector<std::string> wildcard_packages_;
  std::map<std::string, std::vector<std::string>> static_members_;
  std::vector<std::string> static_wildcards_;
  std::set<std::string> declared_types_;
  std::vector<std::map<std::string, TypeRef>> scopes_;
  FileExtraction result_;
};

bool balanced(const std::vector<Token>& toks) {
  std::vector<char> stack;
  for (const auto& t : toks) {
    if (t.kind != TokenKind::Punct || t.text.size() != 1) continue;
    char c = t.text[0];
    if (c == '(' || c == '[' || c == '{') stack.push_back(c);
    else if (c == ')' || c == ']' || c == '}') {
      char want = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (stack.empty() || stack.back() != want) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::string UsageKey::display() const {
  std::string out = method.display();
  if (tier != ResolutionTier::Resolved) out += " [" + std::string(wire_name(tier)) + "]";
  return out;
}

std::uint64_t UsageAggregate::total_calls() const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : per_method) total += entry.call_count;
  return total;
}

ImportScan scan_imports(std::string_view source, std::span<const std::string> library_packages) {
  ImportScan scan;
  std::string code = blank_non_code(text::strip_bom(source));
  auto code_lines = text::lines(code);
  for (std::size_t n = 0; n < code_lines.size(); ++n) {
    for (std::string_view stmt : text::split_top_level(code_lines[n], ';')) {
      ImportDecl decl;
      if (parse_import_statement(stmt, n + 1, decl)) scan.imports.push_back(std::move(decl));
    }
  }
  scan_qualified_usage(code_lines, library_packages, scan.imports);
  for (const auto& imp : scan.imports)
    for (const auto& prefix : library_packages)
      if (text::has_package_prefix(imp.target, prefix)) scan.references_library = true;
  return scan;
}

InventoryIndex::InventoryIndex(const ApiInventory& inventory) : inventory_(&inventory) {
  for (const auto& m : inventory.methods) {
    std::string bin = m.class_name();
    if (!members_.count(bin)) {
      std::string source = m.package_name;
      for (const auto& c : m.class_chain) source += (source.empty() ? "" : ".") + c;
      by_source_name_[source] = bin;
      by_simple_name_[m.class_chain.back()].push_back(bin);
      // Enclosing classes are addressable even without methods of their own.
      for (std::size_t k = 1; k < m.class_chain.size(); ++k) {
        ApiMethodId outer{m.package_name, {m.class_chain.begin(), m.class_chain.begin() + static_cast<std::ptrdiff_t>(k)}, "", {}};
        std::string outer_bin = outer.class_name();
        std::string outer_src = m.package_name;
        for (std::size_t q = 0; q < k; ++q) outer_src += (outer_src.empty() ? "" : ".") + m.class_chain[q];
        if (!by_source_name_.count(outer_src)) {
          by_source_name_[outer_src] = outer_bin;
          by_simple_name_[m.class_chain[k - 1]].push_back(outer_bin);
          members_[outer_bin];
        }
      }
    }
    members_[bin][m.method_name].push_back(&m);
    method_classes_[m.method_name].insert(bin);
  }
  for (auto& [simple, classes] : by_simple_name_) {
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  }
}

const std::string* InventoryIndex::class_by_source_name(std::string_view source_name) const {
  auto it = by_source_name_.find(source_name);
  return it == by_source_name_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& InventoryIndex::classes_by_simple_name(std::string_view simple) const {
  static const std::vector<std::string> none;
  auto it = by_simple_name_.find(simple);
  return it == by_simple_name_.end() ? none : it->second;
}

bool InventoryIndex::has_class(std::string_view binary_name) const { return members_.find(binary_name) != members_.end(); }

std::vector<const ApiMethodId*> InventoryIndex::methods(std::string_view binary_class, std::string_view method_name) const {
  auto cls = members_.find(binary_class);
  if (cls == members_.end()) return {};
  auto m = cls->second.find(method_name);
  if (m == cls->second.end()) return {};
  return m->second;
}

const std::set<std::string>& InventoryIndex::classes_with_method(std::string_view method_name) const {
  static const std::set<std::string> none;
  auto it = method_classes_.find(method_name);
  return it == method_classes_.end() ? none : it->second;
}

bool InventoryIndex::has_method_name(std::string_view method_name) const {
  return method_classes_.find(method_name) != method_classes_.end();
}

FileExtraction extract_call_sites(std::string_view source, const ImportScan& imports, const InventoryIndex& index,
                                  std::string_view dependent, std::string_view file, Diagnostics& diag) {
  FileExtraction out;
  if (!imports.references_library) return out;
  const std::string where = dependent.empty() ? std::string(file) : std::string(dependent) + ":" + std::string(file);
  std::vector<Token> tokens;
  try {
    tokens = java::tokenize(text::strip_bom(source));
  } catch (const java::LexError& e) {
    diag.warn(std::string(kStage), where, e.line(), std::string("skipped, does not parse: ") + e.what());
    out.parsed = false;
    return out;
  }
  if (!balanced(tokens)) {
    diag.warn(std::string(kStage), where, 0, "skipped, does not parse: unbalanced brackets");
    out.parsed = false;
    return out;
  }
  return FileExtractor(tokens, imports, index, dependent, file).run();
}

DependentExtraction extract_dependent(const DependentProject& project, const InventoryIndex& index,
                                      const ExtractionOptions& options, Diagnostics& diag) {
  namespace fs = std::filesystem;
  DependentExtraction result;
  result.usage.dependent = project.name;

  std::error_code ec;
  if (!fs::is_directory(project.root_path, ec))
    throw Error(std::string(kStage), "dependent '" + project.name + "': not a directory: " + project.root_path.string());

  std::vector<std::string> files;
  for (auto it = fs::recursive_directory_iterator(project.root_path, fs::directory_options::skip_permission_denied, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_regular_file(ec) || it->path().extension() != ".java") continue;
    std::string rel = fs::relative(it->path(), project.root_path, ec).generic_string();
    if (!options.include_test_dirs && ("/" + rel).find("/src/test/") != std::string::npos) continue;
    files.push_back(std::move(rel));
  }
  std::sort(files.begin(), files.end());

  struct Slot {
    FileExtraction extraction;
    Diagnostics diag;
    bool referencing = false;
    bool skipped = false;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(files.size(), Slot{{}, Diagnostics(diag.strict()), false, false, nullptr});

  auto work = [&](std::size_t k) {
    Slot& slot = slots[k];
    try {
      fs::path full = project.root_path / files[k];
      std::error_code size_ec;
      auto size = fs::file_size(full, size_ec);
      if (size_ec || size > options.file_size_cap) {
        slot.skipped = true;
        slot.diag.warn(std::string(kStage), project.name + ":" + files[k], 0,
                       size_ec ? "skipped, unreadable" : "skipped, exceeds size cap");
        return;
      }
      std::string source = read_file(full);
      ImportScan scan = scan_imports(source, options.library_packages);
      if (!scan.references_library) return;
      slot.referencing = true;
      slot.extraction = extract_call_sites(source, scan, index, project.name, files[k], slot.diag);
      if (!slot.extraction.parsed) slot.skipped = true;
    } catch (...) {
      slot.error = std::current_exception();
    }
  };

  unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(files.size())));
  if (workers <= 1) {
    for (std::size_t k = 0; k < files.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < files.size(); k = next++) work(k);
      });
    for (auto& th : pool) th.join();
  }

  for (auto& slot : slots) {
    if (slot.error) std::rethrow_exception(slot.error);
    diag.append(slot.diag);
    ++result.files_scanned;
    if (slot.referencing) ++result.files_referencing;
    if (slot.skipped) ++result.files_skipped;
    result.unresolved += slot.extraction.unresolved;
    for (auto& r : slot.extraction.records)
      if (options.include_constructors || !r.method.is_constructor()) result.usage.records.push_back(std::move(r));
  }
  return result;
}

UsageAggregate aggregate_usage(std::span<const DependentUsage> usages) {
  UsageAggregate agg;
  for (const auto& du : usages) {
    if (!agg.dependents.insert(du.dependent).second)
      throw Error(std::string(kStage), "duplicate dependent '" + du.dependent + "'");
    for (const auto& r : du.records) {
      UsageEntry& e = agg.per_method[UsageKey{r.method, r.tier}];
      ++e.call_count;
      e.dependent_names.insert(du.dependent);
    }
  }
  return agg;
}

}  // namespace ecolens
