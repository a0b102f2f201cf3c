#include "xml.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>

namespace ecolens::xml {

namespace {

struct BuildState {
  std::unique_ptr<Element> root;
  std::vector<Element*> stack;
  XML_Parser parser = nullptr;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** atts) {
  auto* st = static_cast<BuildState*>(user);
  auto el = std::make_unique<Element>();
  el->name = name;
  el->line = XML_GetCurrentLineNumber(st->parser);
  for (std::size_t i = 0; atts[i] != nullptr; i += 2) el->attributes.emplace(atts[i], atts[i + 1]);
  Element* raw = el.get();
  if (st->stack.empty()) {
    st->root = std::move(el);
  } else {
    st->stack.back()->children.push_back(std::move(el));
  }
  st->stack.push_back(raw);
}

void XMLCALL on_end(void* user, const XML_Char*) {
  auto* st = static_cast<BuildState*>(user);
  st->stack.pop_back();
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
  auto* st = static_cast<BuildState*>(user);
  if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

std::string trim(std::string_view s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto b = std::find_if(s.begin(), s.end(), not_space);
  auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string(b, e) : std::string();
}

}  // namespace

const std::string* Element::attribute(std::string_view key) const {
  auto it = attributes.find(std::string(key));
  return it == attributes.end() ? nullptr : &it->second;
}

const Element* Element::child(std::string_view child_name) const {
  for (const auto& c : children)
    if (c->name == child_name) return c.get();
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
  std::vector<const Element*> out;
  for (const auto& c : children)
    if (c->name == child_name) out.push_back(c.get());
  return out;
}

std::string Element::child_text(std::string_view child_name) const {
  const Element* c = child(child_name);
  return c ? trim(c->text) : std::string();
}

std::string_view strip_bom(std::string_view text) noexcept {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF)
    return text.substr(3);
  return text;
}

std::unique_ptr<Element> parse(std::string_view document, ParseError& error) {
  document = strip_bom(document);
  BuildState st;
  XML_Parser parser = XML_ParserCreate("UTF-8");
  st.parser = parser;
  XML_SetUserData(parser, &st);
  XML_SetElementHandler(parser, on_start, on_end);
  XML_SetCharacterDataHandler(parser, on_text);
  XML_SetParamEntityParsing(parser, XML_PARAM_ENTITY_PARSING_NEVER);

  bool ok = XML_Parse(parser, document.data(), static_cast<int>(document.size()), 1) == XML_STATUS_OK;
  if (!ok) {
    error.message = XML_ErrorString(XML_GetErrorCode(parser));
    error.line = XML_GetCurrentLineNumber(parser);
  }
  XML_ParserFree(parser);
  if (!ok) return nullptr;
  if (!st.root) {
    error.message = "document has no root element";
    return nullptr;
  }
  return std::move(st.root);
}

}  // namespace ecolens::xml
