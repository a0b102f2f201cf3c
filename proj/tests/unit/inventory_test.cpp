#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ecolens/inventory.hpp"
#include "expected.hpp"

using namespace ecolens;

namespace {

std::string slurp(const std::string& rel) { return expected::fixture(rel); }

std::set<std::string> displays(const std::vector<ApiMethodId>& ids) {
  std::set<std::string> out;
  for (const auto& id : ids) out.insert(id.display());
  return out;
}

ApiMethodId m(std::string cls, std::string name, std::vector<std::string> params = {}) {
  return ApiMethodId{"p", {std::move(cls)}, std::move(name), std::move(params)};
}

ApiInventory inv(std::string group, std::vector<ApiMethodId> ms) {
  ApiInventory out;
  out.library = {std::move(group), "lib", "1.0"};
  out.methods.insert(ms.begin(), ms.end());
  out.source_listing_count = 1;
  return out;
}

}  // namespace

TEST(Javap, SpecExamples) {
  Diagnostics diag;
  auto one = parse_javap_listing(
      "public class org.apache.commons.codec.binary.Base64 { public byte[] decode(java.lang.String); }", diag);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].package_name, "org.apache.commons.codec.binary");
  EXPECT_EQ(one[0].class_chain, std::vector<std::string>{"Base64"});
  EXPECT_EQ(one[0].method_name, "decode");
  EXPECT_EQ(one[0].param_types, std::vector<std::string>{"java.lang.String"});

  EXPECT_TRUE(parse_javap_listing("public class p.C {\n  public int count;\n}\n", diag).empty());

  auto ctor = parse_javap_listing("public class p.C { public p.C(int); }", diag);
  ASSERT_EQ(ctor.size(), 1u);
  EXPECT_EQ(ctor[0].method_name, "<init>");
  EXPECT_EQ(ctor[0].param_types, std::vector<std::string>{"int"});
  EXPECT_TRUE(diag.empty());
}

TEST(Javap, SampleFixtureYieldsExpectedSet) {
  Diagnostics diag;
  auto got = displays(parse_javap_listing(slurp("javap/sample-public.javap"), diag));
  const std::set<std::string>& want = expected::kSampleListing;

  EXPECT_EQ(got, want);
  for (const auto& w : diag.warnings()) ADD_FAILURE() << w.line << ": " << w.message;
}

TEST(Javap, NestedChainIsSplit) {
  Diagnostics diag;
  auto got = parse_javap_listing(slurp("javap/sample-public.javap"), diag);
  auto it = std::find_if(got.begin(), got.end(), [](const ApiMethodId& id) { return id.method_name == "depth"; });
  ASSERT_NE(it, got.end());
  EXPECT_EQ(it->class_chain, (std::vector<std::string>{"Outer", "Inner", "Deep"}));
}

TEST(Javap, FullVisibilityListingKeepsPublicOnly) {
  Diagnostics diag;
  auto got = displays(parse_javap_listing(slurp("javap/sample-private.javap"), diag));
  EXPECT_EQ(got, (std::set<std::string>{"com.acme.sample.Codec#<init>()", "com.acme.sample.Codec#encode(byte[])",
                                        "com.acme.sample.Codec#join(java.lang.String,java.lang.String[])"}));
}

TEST(Javap, RandomMixedVisibilityNeverLeaksNonPublic) {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> vis = {"public ", "protected ", "private ", ""};
  const std::vector<std::string> types = {"int", "java.lang.String", "long[]", "java.util.List<java.lang.String>"};
  for (int round = 0; round < 200; ++round) {
    std::ostringstream listing;
    std::set<std::string> expected;
    int classes = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < classes; ++c) {
      bool pub_class = rng() % 4 != 0;
      std::string cls = "C" + std::to_string(c);
      listing << "Compiled from \"" << cls << ".java\"\n"
              << (pub_class ? "public " : "") << "class q." << cls << " {\n";
      int members = static_cast<int>(rng() % 6);
      for (int k = 0; k < members; ++k) {
        const std::string& v = vis[rng() % vis.size()];
        std::string name = "m" + std::to_string(k);
        std::string param = types[rng() % types.size()];
        if (rng() % 5 == 0) {
          listing << "  " << v << "int field" << k << ";\n";
          continue;
        }
        listing << "  " << v << "static void " << name << "(" << param << ");\n";
        if (pub_class && v == "public ") expected.insert("q." + cls + "#" + name + "(" + canonicalize_type_name(param) + ")");
      }
      listing << "}\n";
    }
    Diagnostics diag;
    EXPECT_EQ(displays(parse_javap_listing(listing.str(), diag)), expected) << listing.str();
  }
}

TEST(Javap, MalformedLinesWarnAndStrictThrows) {
  Diagnostics lenient;
  auto got = displays(parse_javap_listing(slurp("javap/broken.javap"), lenient, "broken.javap"));
  EXPECT_EQ(got, (std::set<std::string>{"com.acme.sample.Broken#ok(int)", "com.acme.sample.Broken#fine()"}));
  ASSERT_EQ(lenient.warnings().size(), 2u);
  EXPECT_EQ(lenient.warnings()[0].line, 4u);
  EXPECT_EQ(lenient.warnings()[1].line, 5u);

  Diagnostics strict(true);
  EXPECT_THROW(parse_javap_listing(slurp("javap/broken.javap"), strict), Error);
}

TEST(Javap, MemberBeforeHeaderIsHardError) {
  Diagnostics diag;
  EXPECT_THROW(parse_javap_listing("  public void f();\n", diag), Error);
}

TEST(Javap, ListingInventoryAndConstructorToggle) {
  Diagnostics diag;
  std::vector<std::string> listings{slurp("javap/sample-public.javap")};
  ApiInventory with = inventory_from_listings({"com.acme", "sample", "1"}, listings, diag);
  ApiInventory without = inventory_from_listings({"com.acme", "sample", "1"}, listings, diag, false);
  EXPECT_EQ(with.size(), 32u);
  EXPECT_EQ(without.size(), 25u);
  EXPECT_EQ(with.source_listing_count, 1u);
  std::vector<std::string> fields_only{"public class p.C {\n  public int count;\n}\n"};
  EXPECT_THROW(inventory_from_listings({"p", "c", "1"}, fields_only, diag), Error);
}

TEST(InventoryJson, SpecExamples) {
  Diagnostics diag;
  ApiInventory s1 = parse_inventory_json(slurp("inventory/s1-lib.json"), diag);
  EXPECT_EQ(s1.size(), 4u);
  EXPECT_EQ(s1.library.artifact, "s1-lib");

  std::string dup = R"({"library":{"group":"g","artifact":"a","version":"1"},"methods":[
    {"package":"p","class_chain":["C"],"name":"f","params":["int"]},
    {"package":"p","class_chain":["C"],"name":"f","params":["int"]}]})";
  Diagnostics d2;
  EXPECT_EQ(parse_inventory_json(dup, d2).size(), 1u);
  EXPECT_EQ(d2.warnings().size(), 1u);

  Diagnostics d3;
  try {
    parse_inventory_json(R"({"library":{"group":"g","artifact":"a","version":"1"},"methods":[]})", d3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty inventory"), std::string::npos);
  }
}

TEST(InventoryJson, SchemaErrorsNamePath) {
  Diagnostics diag;
  std::string bad = R"({"library":{"group":"g","artifact":"a","version":"1"},"methods":[
    {"package":"p","class_chain":["C"],"name":"f","params":[]},
    {"package":"p","class_chain":["C"],"params":[]}]})";
  try {
    parse_inventory_json(bad, diag);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/methods/1/name"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_inventory_json("{", diag), Error);
  EXPECT_THROW(parse_inventory_json(R"({"methods":[]})", diag), Error);
}

TEST(InventoryJson, SourceSpellingOfNestedClassNormalizes) {
  Diagnostics diag;
  std::string doc = R"({"library":{"group":"g","artifact":"a","version":"1"},"methods":[
    {"package":"p","class_chain":["Outer.Inner"],"name":"f","params":["java.util.List<String>"]}]})";
  ApiInventory i = parse_inventory_json(doc, diag);
  ASSERT_EQ(i.size(), 1u);
  EXPECT_EQ(i.methods.begin()->display(), "p.Outer$Inner#f(java.util.List)");
}

TEST(InventoryJson, RoundTrip) {
  Diagnostics diag;
  std::vector<std::string> listings{slurp("javap/sample-public.javap")};
  ApiInventory original = inventory_from_listings({"com.acme", "sample", "2.0"}, listings, diag);
  ApiInventory back = parse_inventory_json(inventory_to_json(original), diag);
  EXPECT_EQ(back.methods, original.methods);
  EXPECT_EQ(back.library, original.library);
}

TEST(Merge, SpecExamples) {
  auto a = inv("g", {m("A", "f"), m("A", "g"), m("B", "h")});
  auto b = inv("g", {m("B", "h"), m("C", "i"), m("C", "j"), m("C", "k")});
  std::vector<ApiInventory> parts{a, b};
  ApiInventory merged = merge_inventories(parts);
  EXPECT_EQ(merged.size(), 6u);
  EXPECT_EQ(merged.source_listing_count, 2u);

  std::vector<ApiInventory> single{a};
  EXPECT_EQ(merge_inventories(single), a);

  std::vector<ApiInventory> clash{inv("com.a", {m("A", "f")}), inv("com.b", {m("A", "f")})};
  EXPECT_THROW(merge_inventories(clash), Error);
}

TEST(Merge, AssociativeAndCommutative) {
  std::mt19937_64 rng(5);
  auto random_inv = [&] {
    std::vector<ApiMethodId> ms;
    for (int i = static_cast<int>(rng() % 6); i >= 0; --i)
      ms.push_back(m(std::string(1, static_cast<char>('A' + rng() % 3)), std::string(1, static_cast<char>('f' + rng() % 3))));
    return inv("g", ms);
  };
  for (int round = 0; round < 100; ++round) {
    ApiInventory x = random_inv(), y = random_inv(), z = random_inv();
    std::vector<ApiInventory> xy{x, y}, yx{y, x};
    EXPECT_EQ(merge_inventories(xy).methods, merge_inventories(yx).methods);
    std::vector<ApiInventory> left{merge_inventories(xy), z};
    std::vector<ApiInventory> yz{y, z};
    std::vector<ApiInventory> right{x, merge_inventories(yz)};
    EXPECT_EQ(merge_inventories(left).methods, merge_inventories(right).methods);
  }
}

TEST(Merge, RemoveConstructors) {
  auto i = inv("g", {m("A", "<init>", {"int"}), m("A", "f")});
  remove_constructors(i);
  EXPECT_EQ(i.size(), 1u);
  EXPECT_EQ(i.methods.begin()->method_name, "f");
}
