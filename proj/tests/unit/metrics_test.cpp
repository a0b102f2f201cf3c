#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "ecolens/metrics.hpp"
#include "oracle.hpp"
#include "shapes.hpp"

using namespace ecolens;
using shapes::RowSpec;

namespace {

ApiMethodId method(int i) { return ApiMethodId{"p", {"C"}, "m" + std::to_string(i), {}}; }

UsageKey resolved(int i) { return UsageKey{method(i), ResolutionTier::Resolved}; }

ApiInventory inventory_of(int n) {
  ApiInventory inv;
  for (int i = 0; i < n; ++i) inv.methods.insert(method(i));
  return inv;
}

const CoverageState kFull(4, 0), kPartial(2, 2), kNone(0, 4);

}  // namespace

TEST(UsageShare, SpecExamples) {
  UsageAggregate agg;
  for (int i = 0; i < 1308; ++i) agg.per_method[resolved(i)] = UsageEntry{1, {"D"}};
  auto share = usage_share(inventory_of(2923), agg);
  EXPECT_EQ(share.fraction(), Fraction(1308, 2923));
  EXPECT_EQ(share.fraction().percent_text(), "44.7");

  EXPECT_EQ(usage_share(inventory_of(1308), agg).fraction(), Fraction(1, 1));

  UsageAggregate s1;
  for (int i = 0; i < 3; ++i) s1.per_method[resolved(i)] = UsageEntry{1, {"D"}};
  EXPECT_EQ(usage_share(inventory_of(4), s1).fraction().percent_text(), "75");

  EXPECT_THROW(usage_share(ApiInventory{}, s1), Error);
}

TEST(UsageShare, UntrustedKeysAndAbsentMethods) {
  ApiInventory inv;
  inv.methods = {ApiMethodId{"p", {"C"}, "f", {"int"}}, ApiMethodId{"p", {"C"}, "f", {"long"}},
                 ApiMethodId{"p", {"C"}, "f", {"int", "int"}}, ApiMethodId{"p", {"C"}, "g", {}}};
  UsageAggregate agg;
  agg.per_method[{ApiMethodId{"p", {"C"}, "f", {"?"}}, ResolutionTier::ArityOnly}] = {1, {"D"}};
  agg.per_method[{ApiMethodId{"p", {"C"}, "f", {"?", "?"}}, ResolutionTier::ArityOnly}] = {1, {"D"}};
  agg.per_method[{ApiMethodId{"p", {"C"}, "g", {}}, ResolutionTier::NameOnly}] = {1, {"D"}};
  agg.per_method[{ApiMethodId{"p", {"C"}, "g", {}}, ResolutionTier::Resolved}] = {1, {"D"}};
  agg.per_method[{ApiMethodId{"p", {"C"}, "zz", {}}, ResolutionTier::Resolved}] = {1, {"D"}};
  auto share = usage_share(inv, agg);
  EXPECT_EQ(share.used_in_inventory, 2u);  // f(int,int) and g() once
  EXPECT_EQ(share.ambiguous.size(), 1u);
  EXPECT_EQ(share.absent.size(), 1u);
}

TEST(Distribution, SpecExamples) {
  UsageAggregate await;
  for (int i = 0; i < 53; ++i) {
    UsageEntry e;
    int deps = i < 15 ? 1 : i < 33 ? 3 : i < 41 ? 6 : 12;
    for (int d = 0; d < deps; ++d) e.dependent_names.insert(shapes::dep(d));
    e.call_count = static_cast<std::uint64_t>(deps);
    await.per_method[resolved(i)] = e;
  }
  auto dist = usage_distribution(await);
  EXPECT_EQ(dist.share(UsageBucket::One), Fraction(15, 53));
  EXPECT_EQ(dist.share(UsageBucket::One).percent_text(), "28.3");
  EXPECT_EQ(dist.total, 53u);

  UsageAggregate singles;
  for (int i = 0; i < 7; ++i) singles.per_method[resolved(i)] = UsageEntry{1, {"D"}};
  EXPECT_EQ(usage_distribution(singles).share(UsageBucket::One), Fraction(1, 1));

  UsageAggregate s1;
  s1.per_method[resolved(0)] = UsageEntry{4, {"D1", "D2"}};
  s1.per_method[resolved(1)] = UsageEntry{1, {"D1"}};
  s1.per_method[resolved(2)] = UsageEntry{1, {"D3"}};
  auto d = usage_distribution(s1);
  EXPECT_EQ(d.share(UsageBucket::One).percent_text(), "66.7");
  EXPECT_EQ(d.share(UsageBucket::TwoToFour).percent_text(), "33.3");
  EXPECT_EQ(d.count(UsageBucket::FiveToNine) + d.count(UsageBucket::TenPlus), 0u);

  EXPECT_THROW(usage_distribution(UsageAggregate{}), Error);
}

TEST(Distribution, BucketBoundaries) {
  const std::vector<std::pair<std::size_t, UsageBucket>> cases = {
      {1, UsageBucket::One},        {2, UsageBucket::TwoToFour},  {4, UsageBucket::TwoToFour},
      {5, UsageBucket::FiveToNine}, {9, UsageBucket::FiveToNine}, {10, UsageBucket::TenPlus},
      {50, UsageBucket::TenPlus}};
  for (auto [n, b] : cases) EXPECT_EQ(bucket_for(n), b) << n;
  EXPECT_EQ(to_string(UsageBucket::TwoToFour), "2-4");
  EXPECT_EQ(to_string(UsageBucket::TenPlus), "10+");
}

TEST(Ubc, PaperRowsRoundToPrintedPercent) {
  const std::vector<std::tuple<std::uint64_t, std::uint64_t, std::int64_t>> rows = {
      {1694, 2210, 77}, {685, 1046, 65}, {154, 216, 71}, {128, 179, 72}, {93, 103, 90}, {366, 509, 72}};
  for (auto [covered, used, printed] : rows) {
    UbcResult r{covered, used};
    EXPECT_EQ(r.fraction().scaled_percent(0), printed) << covered << "/" << used;
  }
  EXPECT_EQ(Fraction(1694, 2210).percent_text(2), "76.65");
}

TEST(Ubc, S1AndErrors) {
  auto s1 = shapes::dataset({{"f", {"D1", "D2"}, 4, kFull}, {"g", {"D1"}, 1, kPartial}, {"h", {"D3"}, 1, kFull}});
  auto r = usage_based_coverage(s1);
  EXPECT_EQ(r.n_covered, 3u);
  EXPECT_EQ(r.n_used, 3u);
  EXPECT_THROW(usage_based_coverage(shapes::dataset({{"f", {"D1"}, 1, std::nullopt}})), Error);
  auto mixed = shapes::dataset({{"f", {"D1"}, 1, kNone}, {"g", {"D1"}, 1, kPartial}, {"h", {"D1"}, 1, std::nullopt}});
  EXPECT_EQ(usage_based_coverage(mixed).fraction(), Fraction(1, 2));
}

TEST(Ctc, SpecExamples) {
  auto s1 = shapes::dataset({{"f", {"D1", "D2"}, 4, kFull}, {"g", {"D1"}, 1, kPartial}, {"h", {"D3"}, 1, kFull}});
  auto r = community_test_coverage(s1);
  EXPECT_EQ(r.np_fully_covered, 2u);
  EXPECT_EQ(r.np_total, 3u);
  EXPECT_EQ(r.fraction().percent_text(), "66.7");

  auto all_full = shapes::dataset({{"f", {"D1", "D2"}, 1, kFull}});
  EXPECT_EQ(community_test_coverage(all_full).fraction(), Fraction(1, 1));

  auto with_nomatch = shapes::dataset(
      {{"f", {"D1", "D2"}, 4, kFull}, {"g", {"D1"}, 1, kPartial}, {"h", {"D3"}, 1, kFull}, {"x", {"D4"}, 1, std::nullopt}});
  auto e = community_test_coverage(with_nomatch);
  EXPECT_EQ(e.np_total, 3u);
  ASSERT_EQ(e.excluded_dependents.size(), 1u);
  EXPECT_EQ(e.excluded_dependents[0].name, "D4");

  EXPECT_THROW(community_test_coverage(shapes::dataset({{"x", {"D1"}, 1, std::nullopt}})), Error);
}

TEST(Ctc, PolicyOnMixedDependents) {
  auto ds = shapes::dataset({{"f", {"D1", "D2"}, 1, kFull}, {"x", {"D1"}, 1, std::nullopt}}, {"D9"});
  auto lenient = community_test_coverage(ds, CtcPolicy::MatchedOnly);
  EXPECT_EQ(lenient.fraction(), Fraction(1, 1));
  auto strict = community_test_coverage(ds, CtcPolicy::Strict);
  EXPECT_EQ(strict.fraction(), Fraction(1, 2));
  ASSERT_EQ(strict.excluded_dependents.size(), 1u);
  EXPECT_EQ(strict.excluded_dependents[0].reason, "no library API usage");
}

TEST(Ctc, MeanOfPaperRows) {
  auto mean_of = [](std::vector<std::uint64_t> pct) {
    std::vector<Fraction> fs;
    for (auto p : pct) fs.emplace_back(p, 100);
    return mean_of_fractions(fs);
  };
  EXPECT_EQ(mean_of({30, 4, 96, 4, 7, 31, 6, 76, 54, 13}).percent_text(), "32.1");
  EXPECT_EQ(mean_of({52, 94, 100, 7, 33, 56, 24, 100, 79, 40}).percent_text(), "58.5");
  std::vector<std::uint64_t> num{1, 3}, den{2, 4};
  EXPECT_EQ(pooled_fraction(num, den), Fraction(4, 6));
  std::vector<std::uint64_t> none;
  EXPECT_THROW(pooled_fraction(none, none), Error);
}

TEST(Metrics, RandomCorporaMatchOracle) {
  std::mt19937_64 rng(1234);
  int compared = 0;
  for (int round = 0; round < 400; ++round) {
    corpus::Corpus c = corpus::random_corpus(rng);
    auto agg = aggregate_usage(c.usages);
    if (agg.per_method.empty()) continue;
    Diagnostics diag;
    auto ds = match_dataset(agg, c.coverage, diag);
    auto rows = corpus::oracle_rows(c.usages, corpus::oracle_entries(c.coverage));
    auto deps = corpus::dependent_names(c.usages);

    auto want_ubc = oracle::ubc(rows);
    if (want_ubc.used == 0) {
      EXPECT_THROW(usage_based_coverage(ds), Error);
      continue;
    }
    auto ubc = usage_based_coverage(ds);
    EXPECT_EQ(ubc.n_covered, want_ubc.covered);
    EXPECT_EQ(ubc.n_used, want_ubc.used);

    for (bool strict : {false, true}) {
      auto want = oracle::ctc(rows, deps, strict);
      auto got = community_test_coverage(ds, strict ? CtcPolicy::Strict : CtcPolicy::MatchedOnly);
      EXPECT_EQ(got.np_fully_covered, want.full);
      EXPECT_EQ(got.np_total, want.total);
      std::set<std::string> excluded;
      for (const auto& e : got.excluded_dependents) excluded.insert(e.name);
      EXPECT_EQ(excluded, want.excluded);
      EXPECT_EQ(got.np_total + got.excluded_dependents.size(), ds.dependents.size());
    }
    ++compared;
  }
  EXPECT_GT(compared, 300);
}

TEST(Metrics, RaisingCoverageIsMonotone) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 300; ++round) {
    corpus::Corpus c = corpus::random_corpus(rng);
    auto agg = aggregate_usage(c.usages);
    if (agg.per_method.empty()) continue;
    Diagnostics diag;
    auto ds = match_dataset(agg, c.coverage, diag);
    std::vector<std::size_t> matched;
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
      if (ds.rows[i].match.coverage) matched.push_back(i);
    if (matched.empty()) continue;
    auto before_u = usage_based_coverage(ds).fraction();
    auto before_c = community_test_coverage(ds).fraction();
    auto before_s = community_test_coverage(ds, CtcPolicy::Strict).fraction();

    auto raised = ds;
    auto& row = raised.rows[matched[rng() % matched.size()]];
    const CoverageState s = *row.match.coverage;
    std::uint64_t shift = s.missed() == 0 ? 0 : 1 + rng() % s.missed();
    row.match.coverage = CoverageState(s.covered() + shift, s.missed() - shift);
    EXPECT_GE(usage_based_coverage(raised).fraction(), before_u);
    EXPECT_GE(community_test_coverage(raised).fraction(), before_c);
    EXPECT_GE(community_test_coverage(raised, CtcPolicy::Strict).fraction(), before_s);
  }
}

TEST(TopUsed, OrderingAndScaleInvariance) {
  UsageAggregate agg;
  agg.per_method[resolved(0)] = UsageEntry{2, {"D1", "D2"}};
  agg.per_method[resolved(1)] = UsageEntry{9, {"D1"}};
  agg.per_method[resolved(2)] = UsageEntry{3, {"D3"}};
  agg.per_method[resolved(3)] = UsageEntry{3, {"D2"}};
  auto top1 = top_used(agg, 1);
  ASSERT_EQ(top1.size(), 1u);
  EXPECT_EQ(top1[0].key, resolved(0));
  EXPECT_EQ(top1[0].dependent_count, 2u);

  auto all = top_used(agg, 100);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(all[1].key, resolved(1));
  EXPECT_EQ(all[2].key, resolved(2));  // tie on both counts: m2 < m3
  EXPECT_EQ(all[3].key, resolved(3));
  EXPECT_THROW(top_used(agg, 0), Error);

  std::mt19937_64 rng(8);
  for (int round = 0; round < 100; ++round) {
    UsageAggregate a;
    for (int i = 0; i < 20; ++i) {
      UsageEntry e;
      for (int d = static_cast<int>(rng() % 5); d >= 0; --d) e.dependent_names.insert(shapes::dep(static_cast<int>(rng() % 8)));
      e.call_count = e.dependent_names.size() + rng() % 6;
      a.per_method[resolved(i)] = e;
    }
    auto scaled = a;
    std::uint64_t factor = 2 + rng() % 7;
    for (auto& [k, e] : scaled.per_method) e.call_count *= factor;
    std::vector<UsageKey> x, y;
    for (const auto& t : top_used(a, 10)) x.push_back(t.key);
    for (const auto& t : top_used(scaled, 10)) y.push_back(t.key);
    EXPECT_EQ(x, y);
  }
}
