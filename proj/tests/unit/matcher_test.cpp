#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "checks.hpp"
#include "corpus.hpp"
#include "ecolens/matcher.hpp"
#include "oracle.hpp"

using namespace ecolens;

namespace {

CoverageEntry entry(std::string name, std::vector<std::string> params, std::uint64_t covered, std::uint64_t missed,
                    std::string ret = "V") {
  MethodDescriptor d{params, "void"};
  std::string desc = render_jvm_descriptor(d);
  desc = desc.substr(0, desc.size() - 1) + ret;
  return CoverageEntry{ApiMethodId{"p", {"A"}, std::move(name), std::move(params)}, true, desc,
                       CoverageState(covered, missed), 0};
}

CoverageEntry bare(std::string name, std::uint64_t covered, std::uint64_t missed) {
  return CoverageEntry{ApiMethodId{"p", {"A"}, std::move(name), {}}, false, "", CoverageState(covered, missed), 0};
}

UsageKey used(std::string name, std::vector<std::string> params, ResolutionTier tier = ResolutionTier::Resolved) {
  return UsageKey{ApiMethodId{"p", {"A"}, std::move(name), std::move(params)}, tier};
}

MatchResult match(const UsageKey& u, const std::vector<CoverageEntry>& entries) {
  return match_method(u, CoverageIndex(entries));
}

}  // namespace

TEST(MatchMethod, SpecExamples) {
  auto full = match(used("g", {"java.lang.String"}), {entry("g", {"java.lang.String"}, 4, 0)});
  EXPECT_EQ(full.tier, MatchTier::FullMatch);

  auto partial = match(used("g", {"p.MyIface"}), {entry("g", {"java.lang.Object"}, 1, 1), entry("g", {}, 1, 0)});
  EXPECT_EQ(partial.tier, MatchTier::PartialUnambiguous);
  EXPECT_EQ(partial.coverage->ratio(), Fraction(1, 2));

  auto amb = match(used("g", {"java.lang.Number"}), {entry("g", {"int"}, 8, 2), entry("g", {"long"}, 4, 6)});
  EXPECT_EQ(amb.tier, MatchTier::PartialAmbiguous);
  EXPECT_EQ(amb.coverage->ratio(), Fraction(4, 5));
  EXPECT_EQ(amb.candidates_considered, 2u);

  auto none = match(used("h", {}), {entry("g", {}, 1, 0)});
  EXPECT_EQ(none.tier, MatchTier::NoMatch);
  EXPECT_FALSE(none.coverage);
}

TEST(MatchMethod, TierRulesForUntrustedUsage) {
  std::vector<CoverageEntry> es = {entry("f", {"int"}, 1, 0), entry("f", {"long"}, 0, 3), entry("f", {}, 2, 2)};
  EXPECT_EQ(match(used("f", {"?"}, ResolutionTier::ArityOnly), es).tier, MatchTier::PartialAmbiguous);
  EXPECT_EQ(match(used("f", {}, ResolutionTier::ArityOnly), es).tier, MatchTier::PartialUnambiguous);
  EXPECT_EQ(match(used("f", {"int"}, ResolutionTier::ArityOnly), es).tier, MatchTier::PartialAmbiguous);
  auto name = match(used("f", {}, ResolutionTier::NameOnly), es);
  EXPECT_EQ(name.tier, MatchTier::PartialAmbiguous);
  EXPECT_EQ(name.candidates_considered, 3u);
  EXPECT_EQ(name.coverage->ratio(), Fraction(1, 1));
  EXPECT_EQ(match(used("f", {}, ResolutionTier::NameOnly), {entry("f", {"int", "int"}, 0, 1)}).tier,
            MatchTier::PartialUnambiguous);
}

TEST(MatchMethod, DescriptorlessEntriesJoinEveryPool) {
  std::vector<CoverageEntry> es = {bare("f", 1, 1)};
  EXPECT_EQ(match(used("f", {"int"}), es).tier, MatchTier::PartialUnambiguous);
  es.push_back(entry("f", {"int"}, 0, 4));
  EXPECT_EQ(match(used("f", {"int"}), es).tier, MatchTier::FullMatch);
  auto amb = match(used("f", {"long"}), es);
  EXPECT_EQ(amb.tier, MatchTier::PartialAmbiguous);
  EXPECT_EQ(amb.coverage->ratio(), Fraction(1, 2));
}

TEST(MatchMethod, FullKeyWinsOverBetterCandidates) {
  std::vector<CoverageEntry> es = {entry("f", {"int"}, 0, 9), entry("f", {"long"}, 9, 0), bare("f", 9, 0)};
  auto r = match(used("f", {"int"}), es);
  EXPECT_EQ(r.tier, MatchTier::FullMatch);
  EXPECT_EQ(r.coverage->ratio(), Fraction(0, 1));
}

TEST(MatchMethod, BridgeDuplicatesTakeBestRatio) {
  std::vector<CoverageEntry> es = {entry("get", {}, 0, 2, "Ljava/lang/Object;"), entry("get", {}, 5, 0, "Ljava/lang/String;")};
  auto r = match(used("get", {}), es);
  EXPECT_EQ(r.tier, MatchTier::FullMatch);
  EXPECT_EQ(r.coverage->ratio(), Fraction(1, 1));
}

TEST(MatchMethod, ExhaustiveAgainstNaiveRules) {
  auto outcome = checks::exhaustive_matcher_sweep();
  EXPECT_GT(outcome.checked, 10000u);
  for (const auto& f : outcome.failures) ADD_FAILURE() << f;
}

TEST(MatchDataset, StatsExample) {
  UsageAggregate agg;
  agg.dependents = {"D1"};
  agg.per_method[used("a", {})] = UsageEntry{1, {"D1"}};
  agg.per_method[used("b", {"int"})] = UsageEntry{1, {"D1"}};
  agg.per_method[used("c", {})] = UsageEntry{1, {"D1"}};
  std::vector<CoverageEntry> es = {entry("a", {}, 1, 0), entry("b", {"long"}, 1, 1)};
  Diagnostics diag;
  auto ds = match_dataset(agg, es, diag);
  EXPECT_EQ(ds.stats.total, 3u);
  EXPECT_EQ(ds.stats.unambiguous_share(), Fraction(2, 3));
  EXPECT_EQ(ds.stats.unambiguous_share().percent_text(), "66.7");
  EXPECT_EQ(ds.stats.share(MatchTier::PartialAmbiguous), Fraction(0, 1));
  EXPECT_EQ(ds.stats.share(MatchTier::NoMatch).percent_text(), "33.3");
  ASSERT_EQ(ds.excluded_methods.size(), 1u);
  EXPECT_EQ(ds.excluded_methods[0].method.method_name, "c");
  EXPECT_TRUE(diag.empty());
}

TEST(MatchDataset, EdgeCases) {
  UsageAggregate agg;
  Diagnostics diag;
  EXPECT_THROW(match_dataset(agg, {}, diag), Error);
  agg.per_method[used("a", {})] = UsageEntry{2, {"D1"}};
  agg.dependents = {"D1"};
  std::vector<CoverageEntry> exact = {entry("a", {}, 1, 0)};
  EXPECT_EQ(match_dataset(agg, exact, diag).stats.share(MatchTier::FullMatch), Fraction(1, 1));
  auto empty = match_dataset(agg, {}, diag);
  EXPECT_EQ(empty.stats.share(MatchTier::NoMatch), Fraction(1, 1));
  EXPECT_EQ(diag.warnings().size(), 1u);
}

TEST(MatchDataset, RandomCorporaAgreeWithOracleAndPartition) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 300; ++round) {
    corpus::Corpus c = corpus::random_corpus(rng);
    auto agg = aggregate_usage(c.usages);
    if (agg.per_method.empty()) continue;
    Diagnostics diag;
    auto ds = match_dataset(agg, c.coverage, diag);
    ASSERT_EQ(ds.rows.size(), agg.per_method.size());
    std::uint64_t sum = 0;
    for (MatchTier t : kMatchTiers) sum += ds.stats.count(t);
    EXPECT_EQ(sum, ds.rows.size());
    auto entries = corpus::oracle_entries(c.coverage);
    for (const auto& row : ds.rows) {
      auto want = oracle::naive_match(
          {row.used.method.class_name(), row.used.method.method_name, row.used.method.param_types, row.used.tier},
          entries);
      ASSERT_EQ(row.match.tier, want.tier) << row.used.display();
      if (row.match.coverage) {
        EXPECT_EQ(row.match.coverage->covered(), want.covered);
        EXPECT_EQ(row.match.coverage->missed(), want.missed);
      }
    }
  }
}
