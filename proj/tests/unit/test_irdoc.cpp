#include "accb/irdoc/ir.hpp"
#include "generators.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace accb;
using namespace accb::irdoc;
using accvalidate::DirectiveKind;

namespace {

IrDocument build(const test::Front &f) {
  return build_intermediate(f.src, f.directives);
}

const PragmaTag *first_pragma(std::span<const IrTag> tags) {
  for (const IrTag &t : tags)
    if (const auto *p = t.pragma())
      return p;
  return nullptr;
}

const ForLoopTag *first_loop(std::span<const IrTag> tags) {
  for (const IrTag &t : tags)
    if (const auto *f = t.forloop())
      return f;
  return nullptr;
}

std::size_t count_for_statements(const cfront::NormalizedSource &src) {
  std::size_t n = 0;
  for (const auto &t : src.tokens)
    n += t.is_keyword("for");
  return n;
}

const char *const programs[] = {
    "int main() { int i, n = 4; float a[4];\n"
    "#pragma acc kernels copy(a)\n"
    "{\n#pragma acc loop independent\nfor (i = 0; i < n; i++) a[i] = i;\n}\n"
    "return 0; }\n",

    "float a[8], b[8];\nvoid f(int n) { int i, t;\n"
    "#pragma acc data copyin(a) copyout(b)\n{\n"
    "  for (t = 0; t < 3; t++) {\n"
    "#pragma acc kernels\n"
    "#pragma acc loop independent\n    for (i = 0; i < n; i++) b[i] = a[i] + t;\n"
    "  }\n"
    "#pragma acc kernels\n  { b[0] = 1; }\n}\n"
    "  if (n) f(n - 1); else for (;;) break;\n}\n",

    "int main() {\n  for (int k = 0; k < 3; ++k)\n    if (k) k++;\n  return 0;\n}\n",
};

} // namespace

TEST(Build, ListingNest) {
  auto f = test::front(test::read_file("golden/matmul_listing.c"));
  ASSERT_TRUE(f.diagnostics.empty());
  IrDocument doc = build(f);
  const auto &main_tags = doc.tags;
  // The data pragma sits inside main's body, which is one long ccode run.
  const PragmaTag *data = first_pragma(main_tags);
  ASSERT_TRUE(data);
  EXPECT_EQ(data->directive.kind, DirectiveKind::data);
  const PragmaTag *kern = first_pragma(data->children);
  ASSERT_TRUE(kern);
  EXPECT_EQ(kern->directive.kind, DirectiveKind::kernels);
  const PragmaTag *loop = first_pragma(kern->children);
  ASSERT_TRUE(loop);
  EXPECT_EQ(loop->directive.kind, DirectiveKind::loop);
  const ForLoopTag *outer = first_loop(loop->children);
  ASSERT_TRUE(outer);
  EXPECT_EQ(outer->init, "i=0");
  EXPECT_EQ(outer->cond, "i<LEN");
  EXPECT_EQ(outer->step, "++i");
  EXPECT_EQ(outer->governor, "#pragma acc loop independent");
  const PragmaTag *inner_loop = first_pragma(outer->body);
  ASSERT_TRUE(inner_loop);
  const ForLoopTag *j = first_loop(inner_loop->children);
  ASSERT_TRUE(j);
  const ForLoopTag *l = first_loop(j->body);
  ASSERT_TRUE(l);
  EXPECT_FALSE(l->governor);
  EXPECT_EQ(render(doc.tags), f.src.text);
}

TEST(Build, NoPragmasNoLoops) {
  auto f = test::front("int x;\nint main() { return x; }\n");
  IrDocument doc = build(f);
  ASSERT_EQ(doc.tags.size(), 1u);
  EXPECT_EQ(doc.tags[0].kind(), TagKind::ccode);
}

TEST(Build, UndirectedLoop) {
  auto f = test::front("void g(int n, int *a) { int i; for(i=0;i<n;++i){a[i]=0;} }");
  IrDocument doc = build(f);
  auto counts = count_tags(doc);
  EXPECT_EQ(counts.forloop, 1u);
  EXPECT_EQ(counts.pragma, 0u);
  const ForLoopTag *loop = first_loop(doc.tags);
  ASSERT_TRUE(loop);
  EXPECT_FALSE(loop->governor);
  EXPECT_EQ(loop->header, "for(i=0;i<n;++i)");
}

TEST(Build, TagConservation) {
  for (const char *text : programs) {
    auto f = test::front(text);
    ASSERT_FALSE(has_errors(f.diagnostics)) << text;
    IrDocument doc = build(f);
    auto counts = count_tags(doc);
    EXPECT_EQ(counts.pragma, f.directives.size());
    EXPECT_EQ(counts.forloop, count_for_statements(f.src));
    EXPECT_EQ(render(doc.tags), f.src.text);
  }
}

TEST(Serialize, Examples) {
  IrDocument one{{IrTag{CCodeTag{"int x;"}}}};
  EXPECT_EQ(serialize_ir(one), "<accir><ccode>int x;</ccode></accir>\n");
  IrDocument lt{{IrTag{CCodeTag{"a<b && c>d"}}}};
  EXPECT_NE(serialize_ir(lt).find("<ccode>a&lt;b &amp;&amp; c&gt;d</ccode>"),
            std::string::npos);

  auto f = test::front("void k(int n, float *a) {\n#pragma acc kernels\n"
                       "#pragma acc loop independent\nfor (int i = 0; i < n; i++) "
                       "a[i] = 0;\n}");
  std::string xml = serialize_ir(build(f));
  auto at = xml.find("<pragma directive=\"kernels\"");
  ASSERT_NE(at, std::string::npos);
  EXPECT_LT(at, xml.find("<forloop"));
  EXPECT_LT(xml.find("</forloop>"), xml.rfind("</pragma>"));
}

TEST(Serialize, RoundTripOnPrograms) {
  for (const char *text : programs) {
    auto f = test::front(text);
    IrDocument doc = build(f);
    EXPECT_EQ(deserialize_ir(serialize_ir(doc)), doc);
  }
}

// Random documents mixing all three tag kinds with text full of characters
// that need escaping.
TEST(Serialize, RoundTripGenerated) {
  std::mt19937 rng(2024);
  for (int iter = 0; iter < 1000; ++iter) {
    IrDocument doc = test::random_ir_document(rng);
    std::string xml = serialize_ir(doc);
    IrDocument back = deserialize_ir(xml);
    ASSERT_EQ(back, doc) << xml;
    ASSERT_EQ(serialize_ir(back), xml);
  }
}

TEST(Serialize, Malformed) {
  auto code = [](std::string_view xml) {
    try {
      deserialize_ir(xml);
    } catch (const CompileError &e) {
      return e.code();
    }
    return std::string("ok");
  };
  EXPECT_EQ(code("<accir></accir>"), "ok");
  EXPECT_EQ(code("<accir><ccode>x</accir>"), "E_INTERNAL");
  EXPECT_EQ(code("<accir><bogus/></accir>"), "E_INTERNAL");
  EXPECT_EQ(code("<accir><ccode>&nope;</ccode></accir>"), "E_INTERNAL");
  EXPECT_EQ(code("<accir>"), "E_INTERNAL");
}

TEST(Revert, ListingNestsKernelsInData) {
  auto f = test::front(test::read_file("golden/matmul_listing.c"));
  IrDocument doc = build(f);
  Reverted r = revert(doc);
  attach_functions(r.table, f.ast);
  EXPECT_NE(r.host.find("__accb_region_0();"), std::string::npos);
  EXPECT_EQ(r.host.find("__accb_region_1"), std::string::npos);
  EXPECT_EQ(r.host.find("#pragma acc"), std::string::npos);
  ASSERT_EQ(r.table.size(), 2u);
  const Region &data = r.table.regions[0];
  const Region &kern = r.table.regions[1];
  EXPECT_EQ(data.kind, DirectiveKind::data);
  EXPECT_EQ(kern.kind, DirectiveKind::kernels);
  EXPECT_EQ(data.function, "main");
  EXPECT_EQ(kern.parent, 0);
  EXPECT_EQ(data.nested, std::vector<int>{1});
  EXPECT_NE(render(data.body).find("__accb_region_1();"), std::string::npos);
  ASSERT_EQ(kern.directives.size(), 2u);
  EXPECT_EQ(kern.directives[0].kind, DirectiveKind::data);
  EXPECT_EQ(r.table.find("__accb_region_1"), &kern);
  EXPECT_EQ(reinline(r.host, r.table), f.src.text);
}

TEST(Revert, NoPragmas) {
  auto f = test::front("int main() { return 0; }\n");
  Reverted r = revert(build(f));
  EXPECT_EQ(r.host, f.src.text);
  EXPECT_TRUE(r.table.empty());
}

TEST(Revert, SiblingsInSourceOrder) {
  auto f = test::front("float a[4];\nint main() {\n"
                       "#pragma acc kernels copy(a)\n{ a[0] = 1; }\n"
                       "#pragma acc kernels copy(a)\n{ a[1] = 2; }\n}\n");
  Reverted r = revert(build(f));
  ASSERT_EQ(r.table.size(), 2u);
  auto p0 = r.host.find("__accb_region_0();");
  auto p1 = r.host.find("__accb_region_1();");
  ASSERT_NE(p0, std::string::npos);
  ASSERT_NE(p1, std::string::npos);
  EXPECT_LT(p0, p1);
  EXPECT_FALSE(r.table.regions[0].parent);
  EXPECT_FALSE(r.table.regions[1].parent);
}

TEST(Revert, LosslessOnPrograms) {
  for (const char *text : programs) {
    auto f = test::front(text);
    IrDocument doc = build(f);
    Reverted r = revert(doc);
    EXPECT_EQ(reinline(r.host, r.table), f.src.text) << text;
    // One dummy call per region across host and region bodies.
    std::string all = r.host;
    for (const Region &reg : r.table.regions)
      all += render(reg.body);
    for (const Region &reg : r.table.regions) {
      std::string call = dummy_call(reg.id);
      auto first = all.find(call);
      ASSERT_NE(first, std::string::npos);
      EXPECT_EQ(all.find(call, first + 1), std::string::npos);
    }
  }
}
