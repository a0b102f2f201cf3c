#pragma once

// JSON forms of the domain types. Fractions are written as exact
// numerator/denominator pairs plus rounded percentages for readers;
// only the exact pair is read back.

#include <json.hpp>

#include "ecolens/diagnostics.hpp"
#include "ecolens/matcher.hpp"
#include "ecolens/metrics.hpp"
#include "ecolens/planner.hpp"

namespace ecolens {

void to_json(nlohmann::json& j, const Fraction& f);
void from_json(const nlohmann::json& j, Fraction& f);

void to_json(nlohmann::json& j, const ApiMethodId& id);
void from_json(const nlohmann::json& j, ApiMethodId& id);

void to_json(nlohmann::json& j, const UsageKey& key);
void from_json(const nlohmann::json& j, UsageKey& key);

void to_json(nlohmann::json& j, const MatchResult& m);
void from_json(const nlohmann::json& j, MatchResult& m);

void to_json(nlohmann::json& j, const MatchedRow& row);
void from_json(const nlohmann::json& j, MatchedRow& row);

void to_json(nlohmann::json& j, const MatchStats& s);
void from_json(const nlohmann::json& j, MatchStats& s);

void to_json(nlohmann::json& j, const MatchedDataset& ds);
void from_json(const nlohmann::json& j, MatchedDataset& ds);

void to_json(nlohmann::json& j, const UsageShare& s);
void from_json(const nlohmann::json& j, UsageShare& s);

void to_json(nlohmann::json& j, const UsageDistribution& d);
void from_json(const nlohmann::json& j, UsageDistribution& d);

void to_json(nlohmann::json& j, const UbcResult& r);
void from_json(const nlohmann::json& j, UbcResult& r);

void to_json(nlohmann::json& j, const CtcResult& r);
void from_json(const nlohmann::json& j, CtcResult& r);

void to_json(nlohmann::json& j, const TopUsed& t);
void from_json(const nlohmann::json& j, TopUsed& t);

void to_json(nlohmann::json& j, const TestingPlan& p);
void from_json(const nlohmann::json& j, TestingPlan& p);

void to_json(nlohmann::json& j, const Warning& w);
void from_json(const nlohmann::json& j, Warning& w);

void to_json(nlohmann::json& j, const DependentCoverage& d);
void from_json(const nlohmann::json& j, DependentCoverage& d);

void to_json(nlohmann::json& j, const CoverageEntry& e);

/// Stable text form: sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const nlohmann::json& j);

}  // namespace ecolens
