#include "ecolens/diagnostics.hpp"

#include <algorithm>

namespace ecolens {

void Diagnostics::warn(std::string stage, std::string source, std::size_t line, std::string message) {
  Warning w{std::move(stage), std::move(source), line, std::move(message)};
  if (strict_) throw Error(w.stage, to_string(w));
  warnings_.push_back(std::move(w));
}

void Diagnostics::append(const Diagnostics& other) {
  warnings_.insert(warnings_.end(), other.warnings_.begin(), other.warnings_.end());
}

std::vector<Warning> Diagnostics::sorted() const {
  std::vector<Warning> out = warnings_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string to_string(const Warning& w) {
  std::string s = w.stage + ": ";
  if (!w.source.empty()) {
    s += w.source;
    if (w.line > 0) s += ":" + std::to_string(w.line);
    s += ": ";
  }
  return s + w.message;
}

}  // namespace ecolens
