#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecolens {

/// Hard failure of one pipeline stage. `stage()` names the stage
/// ("inventory", "coverage", ...), `what()` carries the cause.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// A type token that could not be canonicalized; carries the raw text.
class MalformedTypeName : public Error {
 public:
  explicit MalformedTypeName(std::string raw)
      : Error("model", "malformed type name: '" + raw + "'"), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

struct Warning {
  std::string stage;
  std::string source;  // file, dependent, or report the warning refers to
  std::size_t line = 0;
  std::string message;

  friend auto operator<=>(const Warning&, const Warning&) = default;
};

/// Collects recoverable problems. In strict mode `warn` throws instead.
class Diagnostics {
 public:
  explicit Diagnostics(bool strict = false) : strict_(strict) {}

  void warn(std::string stage, std::string source, std::size_t line, std::string message);
  void append(const Diagnostics& other);

  bool strict() const noexcept { return strict_; }
  bool empty() const noexcept { return warnings_.empty(); }
  const std::vector<Warning>& warnings() const noexcept { return warnings_; }

  /// Sorted, duplicate-free copy; used wherever warnings reach output.
  std::vector<Warning> sorted() const;

 private:
  bool strict_;
  std::vector<Warning> warnings_;
};

std::string to_string(const Warning& w);

}  // namespace ecolens
