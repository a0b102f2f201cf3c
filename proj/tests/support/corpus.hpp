#pragma once

// Random synthetic ecosystems for property tests and the acceptance gate.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ecolens/coverage.hpp"
#include "ecolens/extractor.hpp"
#include "ecolens/inventory.hpp"
#include "ecolens/matcher.hpp"
#include "oracle.hpp"

namespace corpus {

struct Shape {
  int max_methods = 50;
  int max_dependents = 10;
  int max_calls_per_dependent = 8;
};

struct Corpus {
  ecolens::ApiInventory inventory;
  std::vector<ecolens::CoverageEntry> coverage;  // merged, sorted
  std::vector<ecolens::DependentUsage> usages;   // sorted by dependent
};

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline ecolens::CoverageState random_state(std::mt19937_64& rng) {
  switch (pick(rng, 0, 2)) {
    case 0: return {static_cast<std::uint64_t>(pick(rng, 1, 20)), 0};
    case 1: return {static_cast<std::uint64_t>(pick(rng, 1, 20)), static_cast<std::uint64_t>(pick(rng, 1, 20))};
    default: return {0, static_cast<std::uint64_t>(pick(rng, 1, 20))};
  }
}

inline Corpus random_corpus(std::mt19937_64& rng, const Shape& shape = {}) {
  static const std::vector<std::vector<std::string>> kClasses = {{"A"}, {"B"}, {"C"}, {"A", "In"}};
  static const std::vector<std::string> kNames = {"a", "b", "c", "d", "e", "f"};
  static const std::vector<std::string> kTypes = {"int", "long", "java.lang.String", "double[]", "p.A"};

  Corpus c;
  c.inventory.library = {"org.synth", "synth", "1.0"};
  int n = pick(rng, 1, shape.max_methods);
  for (int i = 0; i < n; ++i) {
    ecolens::ApiMethodId id;
    id.package_name = "p";
    id.class_chain = kClasses[static_cast<std::size_t>(pick(rng, 0, 3))];
    id.method_name = kNames[static_cast<std::size_t>(pick(rng, 0, 5))];
    int arity = pick(rng, 0, 3);
    for (int a = 0; a < arity; ++a) id.param_types.push_back(kTypes[static_cast<std::size_t>(pick(rng, 0, 4))]);
    c.inventory.methods.insert(id);
  }

  std::vector<ecolens::CoverageEntry> raw;
  for (const auto& m : c.inventory.methods) {
    if (chance(rng, 0.85)) {
      ecolens::CoverageEntry e{m, true, ecolens::render_jvm_descriptor({m.param_types, "V"}), random_state(rng), 1};
      raw.push_back(e);
      if (chance(rng, 0.05)) {
        e.descriptor = ecolens::render_jvm_descriptor({m.param_types, "I"});
        e.state = random_state(rng);
        raw.push_back(e);
      }
    }
    if (chance(rng, 0.05)) {
      ecolens::CoverageEntry e{m, false, "", random_state(rng), 1};
      e.method.param_types.clear();
      raw.push_back(e);
    }
  }
  std::vector<std::vector<ecolens::CoverageEntry>> parts{raw};
  c.coverage = ecolens::merge_coverage(parts);

  std::vector<ecolens::ApiMethodId> methods(c.inventory.methods.begin(), c.inventory.methods.end());
  int nd = pick(rng, 1, shape.max_dependents);
  for (int d = 0; d < nd; ++d) {
    ecolens::DependentUsage du;
    du.dependent = "dep" + std::string(d < 10 ? "0" : "") + std::to_string(d);
    int calls = pick(rng, 0, shape.max_calls_per_dependent);
    for (int k = 0; k < calls; ++k) {
      ecolens::UsageRecord r;
      r.dependent = du.dependent;
      r.file = "src/Main.java";
      r.line = static_cast<std::size_t>(k + 1);
      if (chance(rng, 0.1)) {
        r.method = ecolens::ApiMethodId{"p", {"A"}, "zz", {}};
      } else {
        r.method = methods[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(methods.size()) - 1))];
      }
      int t = pick(rng, 0, 19);
      if (t < 12) {
        r.tier = ecolens::ResolutionTier::Resolved;
      } else if (t < 17) {
        r.tier = ecolens::ResolutionTier::ArityOnly;
        for (auto& p : r.method.param_types) p = std::string(ecolens::kUnknownType);
      } else {
        r.tier = ecolens::ResolutionTier::NameOnly;
        r.method.param_types.clear();
      }
      du.records.push_back(r);
    }
    c.usages.push_back(std::move(du));
  }
  return c;
}

inline std::vector<oracle::Entry> oracle_entries(const std::vector<ecolens::CoverageEntry>& coverage) {
  std::vector<oracle::Entry> out;
  for (const auto& e : coverage)
    out.push_back({e.method.class_name(), e.method.method_name, e.has_descriptor, e.method.param_types,
                   e.state.covered(), e.state.missed()});
  return out;
}

inline std::string label(const ecolens::ApiMethodId& m, ecolens::ResolutionTier tier) {
  return m.display() + "|" + std::string(ecolens::wire_name(tier));
}

/// Hand aggregation of raw records into oracle rows.
inline std::vector<oracle::Row> oracle_rows(const std::vector<ecolens::DependentUsage>& usages,
                                            const std::vector<oracle::Entry>& entries) {
  std::map<std::string, oracle::Row> rows;
  for (const auto& du : usages) {
    for (const auto& r : du.records) {
      oracle::Row& row = rows[label(r.method, r.tier)];
      row.key = label(r.method, r.tier);
      row.deps.insert(du.dependent);
      ++row.calls;
      oracle::Match m =
          oracle::naive_match({r.method.class_name(), r.method.method_name, r.method.param_types, r.tier}, entries);
      row.matched = m.tier != ecolens::MatchTier::NoMatch;
      row.covered = m.covered;
      row.missed = m.missed;
    }
  }
  std::vector<oracle::Row> out;
  for (auto& [k, row] : rows) out.push_back(std::move(row));
  return out;
}

inline std::set<std::string> dependent_names(const std::vector<ecolens::DependentUsage>& usages) {
  std::set<std::string> out;
  for (const auto& du : usages) out.insert(du.dependent);
  return out;
}

}  // namespace corpus
