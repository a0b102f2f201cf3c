#include <gtest/gtest.h>


#include "ecolens/extractor.hpp"
#include "expected.hpp"

using namespace ecolens;

namespace {

const LibraryCoordinates kAwaitility{"org.awaitility", "awaitility", "4.2.0"};

std::string pom(const std::string& name) { return expected::fixture("poms/" + name + ".xml"); }

bool aligned(const std::string& name, std::string_view stream, Diagnostics& diag) {
  return check_version_alignment(pom(name), kAwaitility, stream, diag, name);
}

}  // namespace

TEST(VersionAlignment, FixturesClassifyExactly) {
  for (const auto& [name, want] : expected::kPoms) {
    Diagnostics diag;
    EXPECT_EQ(aligned(name, "4.2", diag), want) << name;
    EXPECT_EQ(aligned(name, "4", diag), want && name != "old-stream") << name;
    EXPECT_TRUE(diag.empty()) << name;
  }
}

TEST(VersionAlignment, StreamPrefixes) {
  Diagnostics diag;
  EXPECT_FALSE(aligned("aligned-literal", "4.3", diag));
  EXPECT_FALSE(aligned("aligned-literal", "4.2.1.0", diag));
  EXPECT_TRUE(aligned("old-stream", "3", diag));
}

TEST(VersionAlignment, MalformedXmlIsExcludedWithWarning) {
  Diagnostics diag;
  EXPECT_FALSE(aligned("malformed", "4.2", diag));
  ASSERT_EQ(diag.warnings().size(), 1u);
  EXPECT_EQ(diag.warnings()[0].source, "malformed");

  Diagnostics strict(true);
  EXPECT_THROW(aligned("malformed", "4.2", strict), Error);
}

TEST(VersionAlignment, StreamComponentsCompareNumerically) {
  Diagnostics diag;
  std::string doc =
      "<project><dependencies><dependency><groupId>org.awaitility</groupId>"
      "<artifactId>awaitility</artifactId><version>4.20.0</version></dependency></dependencies></project>";
  EXPECT_FALSE(check_version_alignment(doc, kAwaitility, "4.2", diag));
  EXPECT_TRUE(check_version_alignment(doc, kAwaitility, "4.20", diag));
  EXPECT_THROW(check_version_alignment(doc, kAwaitility, "4.x", diag), Error);
}

TEST(VersionAlignment, ProjectVersionProperty) {
  Diagnostics diag;
  std::string doc =
      "<project><version>4.2.5</version><dependencies><dependency><groupId>org.awaitility</groupId>"
      "<artifactId>awaitility</artifactId><version>${project.version}</version></dependency></dependencies>"
      "</project>";
  EXPECT_TRUE(check_version_alignment(doc, kAwaitility, "4.2", diag));
}
