// Copyright 2026 The memfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "memfix/corpus.h"
#include "memfix/error.h"
#include "memfix/patch.h"
#include "memfix/text.h"
#include "test_support.h"

namespace memfix {
namespace {

struct StripCase {
  const char* name;
  const char* input;
  const char* expected;
  bool warns;
};

void PrintTo(const StripCase& c, std::ostream* os) { *os << c.name; }

// Expected outputs written out by hand, one case per statement shape.
const StripCase kStripCases[] = {
    {"assert_line", "void f(float y) {\n  __VERIFIER_assert(y >= 0.0f);\n  g(y);\n}\n",
     "void f(float y) {\n  g(y);\n}\n", false},
    {"no_intrinsics", "int main(void) {\n  return 0;\n}\n",
     "int main(void) {\n  return 0;\n}\n", false},
    {"assume_then_decl", "__VERIFIER_assume(x<3); int z = 1;\n", "int z = 1;\n", false},
    {"nested_parens", "{\n  __VERIFIER_assume((a + (b)) > 0);\n}\n", "{\n}\n", false},
    {"two_on_a_line", "{\n__VERIFIER_assume(a); __VERIFIER_assume(b);\n}\n", "{\n\n}\n",
     false},
    {"in_comment", "// __VERIFIER_assert(x);\nint a;\n",
     "// __VERIFIER_assert(x);\nint a;\n", false},
    {"in_string", "{ puts(\"__VERIFIER_assert(x);\"); }\n",
     "{ puts(\"__VERIFIER_assert(x);\"); }\n", false},
    {"inside_expression", "{ int r = __VERIFIER_assume(x) + 1; }\n",
     "{ int r = __VERIFIER_assume(x) + 1; }\n", true},
    {"after_brace", "if (c) { __VERIFIER_assume(c); }\n", "if (c) { }\n", false},
    {"declaration", "extern void __VERIFIER_assume(int cond);\nint a;\n",
     "extern void __VERIFIER_assume(int cond);\nint a;\n", false},
    {"multi_line_call", "{\n  __VERIFIER_assert(\n      a > 0);\n  return a;\n}\n",
     "{\n  return a;\n}\n", false},
};

class StripTest : public ::testing::TestWithParam<StripCase> {};

TEST_P(StripTest, MatchesHandWrittenOutput) {
  const StripCase& c = GetParam();
  std::vector<std::string> warnings;
  EXPECT_EQ(StripVerifierIntrinsics(c.input, &warnings), c.expected);
  EXPECT_EQ(!warnings.empty(), c.warns);
}

TEST_P(StripTest, IsIdempotent) {
  const std::string once = StripVerifierIntrinsics(GetParam().input);
  EXPECT_EQ(StripVerifierIntrinsics(once), once);
}

INSTANTIATE_TEST_SUITE_P(Fixture, StripTest, ::testing::ValuesIn(kStripCases),
                         [](const auto& info) { return std::string(info.param.name); });

TEST(StripTest, WholeSeedCorpusLosesEveryIntrinsicCall) {
  const SeedCorpus corpus = LoadSeedCorpus(testing::Fixture("seed_corpus"));
  ASSERT_EQ(corpus.samples.size(), 5u);
  // Only the extern declarations may still mention the intrinsics.
  for (const Sample& s : corpus.samples) {
    for (const std::string& line : LineBuffer::Split(s.source_text).lines) {
      if (line.find("__VERIFIER_assume") == std::string::npos &&
          line.find("__VERIFIER_assert") == std::string::npos) {
        continue;
      }
      EXPECT_TRUE(line.starts_with("extern void ")) << s.id << ": " << line;
    }
  }
  EXPECT_TRUE(corpus.warnings.empty());
}

Sample Make(std::string id, std::string text) {
  Sample s;
  s.id = std::move(id);
  s.source_text = std::move(text);
  return s;
}

TEST(DedupeTest, TrailingSpacesCollapse) {
  auto out = Dedupe({Make("a", "int x;\n"), Make("b", "int x;   \n")});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].id, "a");
}

TEST(DedupeTest, DistinctSamplesSurvive) {
  auto out = Dedupe({Make("a", "int x;"), Make("b", "int y;"), Make("c", "int z;")});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].id, "a");
  EXPECT_EQ(out[1].id, "b");
  EXPECT_EQ(out[2].id, "c");
}

TEST(DedupeTest, StrippingCollapsesSevenPairsOutOf505) {
  std::vector<Sample> raw;
  for (int i = 0; i < 498; ++i) {
    const std::string n = std::to_string(i);
    raw.push_back(Make("s" + n, "int f" + n + "(void) { return " + n + "; }\n"));
  }
  // Seven variants that differ only by an assume and layout.
  for (int i = 0; i < 7; ++i) {
    const std::string n = std::to_string(i * 50);
    raw.push_back(Make("d" + n, "int f" + n + "(void) {\n  __VERIFIER_assume(1);\n"
                                "  return " + n + ";\n}\n"));
  }
  ASSERT_EQ(raw.size(), 505u);
  std::set<std::string> hashes;
  for (Sample& s : raw) {
    s.source_text = StripVerifierIntrinsics(s.source_text);
    hashes.insert(StripWhitespace(s.source_text));
  }
  const auto out = Dedupe(raw);
  EXPECT_EQ(out.size(), hashes.size());
  EXPECT_EQ(out.size(), 498u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].id, "s" + std::to_string(i));
  }
}

TEST(DedupeTest, IdempotentAndNeverGrows) {
  std::vector<Sample> raw = {Make("a", "x"), Make("b", " x"), Make("c", "y"),
                             Make("d", "y\n"), Make("e", "z")};
  const auto once = Dedupe(raw);
  EXPECT_LE(once.size(), raw.size());
  const auto twice = Dedupe(once);
  ASSERT_EQ(twice.size(), once.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(twice[i].id, once[i].id);
}

const char* kLoop =
    "int sum(int *a, int n) {\n"
    "  int s = 0;\n"
    "  for (int i = 0; i < n; i++) {\n"
    "    s += a[i];\n"
    "  }\n"
    "  return s;\n"
    "}\n";

PatchFile LoopPatch() {
  PatchHunk h;
  h.context_before = {"int sum(int *a, int n) {", "  int s = 0;"};
  h.removed = {"  for (int i = 0; i < n; i++) {"};
  h.added = {"  for (int i = 0; i <= n; i++) {"};
  h.context_after = {"    s += a[i];"};
  h.anchor_line = 3;
  return {"RelationalReplace-3-23", "sum.c", {h}};
}

TEST(ApplyPatchTest, EmptyPatchIsIdentity) {
  EXPECT_EQ(ApplyPatch(kLoop, PatchFile{}), kLoop);
}

TEST(ApplyPatchTest, OneHunkChangesExactlyOneLine) {
  const std::string out = ApplyPatch(kLoop, LoopPatch());
  const auto a = LineBuffer::Split(kLoop);
  const auto b = LineBuffer::Split(out);
  ASSERT_EQ(a.size(), b.size());
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differing += a.lines[i] != b.lines[i];
  EXPECT_EQ(differing, 1);
  EXPECT_EQ(b.lines[2], "  for (int i = 0; i <= n; i++) {");
}

TEST(ApplyPatchTest, InverseRestoresBase) {
  const PatchFile p = LoopPatch();
  EXPECT_EQ(ApplyPatch(ApplyPatch(kLoop, p), InvertPatch(p)), kLoop);
}

TEST(ApplyPatchTest, StaleContextIsRejected) {
  PatchFile p = LoopPatch();
  p.hunks[0].removed = {"  for (int j = 0; j < n; j++) {"};
  try {
    ApplyPatch(kLoop, p);
    FAIL() << "expected ContextMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kContextMismatch);
  }
}

TEST(ApplyPatchTest, OverlappingHunksAreRejected) {
  PatchFile p = LoopPatch();
  p.hunks.push_back(p.hunks[0]);
  try {
    ApplyPatch(kLoop, p);
    FAIL() << "expected OverlappingHunks";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlappingHunks);
  }
}

TEST(ApplyPatchTest, UnifiedDiffRoundTrip) {
  const PatchFile p = LoopPatch();
  const PatchFile parsed = ParseUnifiedDiff(ToUnifiedDiff(p), p.id);
  EXPECT_EQ(ApplyPatch(kLoop, parsed), ApplyPatch(kLoop, p));
}

TEST(ApplyPatchTest, TwoHunksRoundTrip) {
  std::string base;
  for (int i = 1; i <= 20; ++i) base += "x" + std::to_string(i) + ";\n";
  PatchHunk a{{"x1;"}, {"x2;"}, {"y2;", "y2b;"}, {"x3;"}, 2};
  PatchHunk b{{"x9;"}, {"x10;", "x11;"}, {}, {"x12;"}, 10};
  PatchFile p{"two", "", {a, b}};
  const std::string out = ApplyPatch(base, p);
  EXPECT_NE(out, base);
  EXPECT_EQ(ApplyPatch(out, InvertPatch(p)), base);
  EXPECT_EQ(ApplyPatch(base, ParseUnifiedDiff(ToUnifiedDiff(p))), out);
}

}  // namespace
}  // namespace memfix
