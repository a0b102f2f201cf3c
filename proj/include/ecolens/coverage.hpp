#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecolens/diagnostics.hpp"
#include "ecolens/model.hpp"

namespace ecolens {

/// Per-method instruction counters from a coverage report.
///
/// When the report carries no descriptor, `method.param_types` is empty and
/// `has_descriptor` is false: neither the parameter types nor the arity are
/// known, and the matcher may only use the entry at name level.
struct CoverageEntry {
  ApiMethodId method;
  bool has_descriptor = true;
  std::string descriptor;
  CoverageState state{0, 1};
  std::size_t line = 0;  // source line from the report, 0 if absent

  friend bool operator==(const CoverageEntry&, const CoverageEntry&) = default;
};

struct MethodDescriptor {
  std::vector<std::string> params;
  std::string return_type;

  friend bool operator==(const MethodDescriptor&, const MethodDescriptor&) = default;
};

/// `(Ljava/lang/String;I)V` -> params {java.lang.String, int}, return void.
/// Throws Error on any grammar violation.
MethodDescriptor parse_jvm_descriptor(std::string_view desc);

/// Inverse of parse_jvm_descriptor.
std::string render_jvm_descriptor(const MethodDescriptor& desc);

/// Reads the `report/[group/]package/class/method/counter` subset of a
/// JaCoCo XML report; one entry per method with an INSTRUCTION counter.
/// Static initializers, anonymous classes and compiler-generated methods
/// (a `$` in the name) are dropped.
std::vector<CoverageEntry> parse_jacoco_report(std::string_view document, Diagnostics& diag,
                                               std::string_view source = "<report>");

/// Combines per-module reports. Entries sharing (class, name, descriptor)
/// collapse to the one with the highest coverage ratio. Output is sorted.
std::vector<CoverageEntry> merge_coverage(std::span<const std::vector<CoverageEntry>> reports);

}  // namespace ecolens
