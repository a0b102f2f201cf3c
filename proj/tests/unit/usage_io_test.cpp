#include <gtest/gtest.h>

#include "ecolens/extractor.hpp"

using namespace ecolens;

namespace {

std::string line(const std::string& dep, const std::string& name, const std::string& params, const std::string& tier,
                 int at = 3) {
  return R"({"dependent":")" + dep + R"(","package":"com.acme","class_chain":["Api"],"name":")" + name +
         R"(","params":)" + params + R"(,"tier":")" + tier + R"(","file":"src/X.java","line":)" +
         std::to_string(at) + "}\n";
}

}  // namespace

TEST(UsageJsonl, GroupsByDependent) {
  Diagnostics diag;
  auto groups = parse_usage_records(line("D2", "f", "[]", "resolved") + line("D1", "f", "[\"int\"]", "resolved") +
                                        line("D1", "g", "[]", "name"),
                                    diag);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].dependent, "D1");
  EXPECT_EQ(groups[0].records.size(), 2u);
  EXPECT_EQ(groups[1].records.size(), 1u);
  EXPECT_TRUE(diag.empty());
}

TEST(UsageJsonl, RejectsInvalidLines) {
  Diagnostics diag;
  std::string stream = line("D1", "f", "[]", "resolved") + line("D1", "f", "[]", "resolved", -4) +
                       line("D1", "f", "[]", "guessed") + "not json\n" + line("D1", "f g", "[]", "resolved") +
                       line("D1", "f", "[\"List<\"]", "resolved") + "\n";
  auto groups = parse_usage_records(stream, diag, "u.jsonl");
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].records.size(), 1u);
  ASSERT_EQ(diag.warnings().size(), 5u);
  EXPECT_EQ(diag.warnings()[0].line, 2u);
  EXPECT_EQ(diag.warnings()[0].source, "u.jsonl");

  Diagnostics strict(true);
  try {
    parse_usage_records(stream, strict, "u.jsonl");
    FAIL() << "strict parse accepted a negative line number";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

TEST(UsageJsonl, EmptyStreamIsEmptyCorpus) {
  Diagnostics diag;
  EXPECT_TRUE(parse_usage_records("", diag).empty());
  EXPECT_TRUE(parse_usage_records("\n\n", diag).empty());
  EXPECT_TRUE(diag.empty());
}

TEST(UsageJsonl, TierNormalizesParameters) {
  Diagnostics diag;
  auto groups = parse_usage_records(line("D", "f", R"(["java.util.List<String>", "T..."])", "resolved") +
                                        line("D", "f", R"(["Foo<", "int"])", "arity") +
                                        line("D", "f", R"(["int"])", "name"),
                                    diag);
  ASSERT_EQ(groups.size(), 1u);
  const auto& r = groups[0].records;
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].method.param_types, (std::vector<std::string>{"java.util.List", "T[]"}));
  EXPECT_EQ(r[1].method.param_types, (std::vector<std::string>{"?", "int"}));
  EXPECT_TRUE(r[2].method.param_types.empty());
  EXPECT_TRUE(diag.empty());
}

TEST(UsageJsonl, NestedClassSpellings) {
  Diagnostics diag;
  std::string doc =
      R"({"dependent":"D","package":"p","class_chain":["Outer.Inner"],"name":"f","params":[],"tier":"resolved","file":"F.java","line":1})"
      "\n"
      R"({"dependent":"D","package":"p","class_chain":["Outer$Inner"],"name":"f","params":[],"tier":"resolved","file":"F.java","line":2})";
  auto groups = parse_usage_records(doc, diag);
  ASSERT_EQ(groups.at(0).records.size(), 2u);
  EXPECT_EQ(groups[0].records[0].method, groups[0].records[1].method);
  EXPECT_EQ(groups[0].records[0].method.class_name(), "p.Outer$Inner");
}

TEST(UsageJsonl, RoundTrip) {
  std::vector<DependentUsage> usages = {
      {"a", {UsageRecord{"a", ApiMethodId{"p.q", {"A", "B"}, "f", {"int[]", "?"}}, ResolutionTier::ArityOnly, "x/Y.java", 9},
             UsageRecord{"a", ApiMethodId{"p.q", {"A"}, "<init>", {}}, ResolutionTier::Resolved, "x/Y.java", 10}}},
      {"b", {UsageRecord{"b", ApiMethodId{"p.q", {"A"}, "g", {}}, ResolutionTier::NameOnly, "Z.java", 1}}}};
  Diagnostics diag;
  auto back = parse_usage_records(usage_records_to_jsonl(usages), diag);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].records, usages[0].records);
  EXPECT_EQ(back[1].records, usages[1].records);
  EXPECT_TRUE(diag.empty());
}

TEST(UsageJsonl, ToleratesBom) {
  Diagnostics diag;
  auto groups = parse_usage_records("\xEF\xBB\xBF" + line("D", "f", "[]", "resolved"), diag);
  EXPECT_EQ(groups.size(), 1u);
  EXPECT_TRUE(diag.empty());
}
