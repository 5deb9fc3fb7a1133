#include "accb/cfront/ast.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace accb;
using namespace accb::cfront;

namespace {

std::vector<Token> significant(std::string_view src) {
  std::vector<Token> out;
  for (Token &t : tokenize(src))
    if (!t.is_trivia())
      out.push_back(std::move(t));
  return out;
}

std::string code_of(const auto &fn) {
  try {
    fn();
  } catch (const CompileError &e) {
    return e.code();
  }
  return "";
}

} // namespace

TEST(Lexer, SimpleDeclaration) {
  auto toks = significant("int a=1;");
  ASSERT_EQ(toks.size(), 5u);
  EXPECT_EQ(toks[0].kind, TokenKind::keyword);
  EXPECT_EQ(toks[1].kind, TokenKind::identifier);
  EXPECT_EQ(toks[2].text, "=");
  EXPECT_EQ(toks[3].kind, TokenKind::literal);
  EXPECT_EQ(toks[4].text, ";");
  EXPECT_EQ(toks[1].location, (SourceLocation{1, 5}));
}

TEST(Lexer, PragmaIsOneToken) {
  auto toks = tokenize("#pragma acc kernels\n{ }\n");
  ASSERT_FALSE(toks.empty());
  EXPECT_EQ(toks[0].kind, TokenKind::pragma_line);
  EXPECT_EQ(toks[0].text, "#pragma acc kernels");
  EXPECT_TRUE(toks[0].is_acc_pragma());
}

TEST(Lexer, ContinuedPragma) {
  auto toks = tokenize("  #pragma acc data \\\n copy(a[0:n])\nx;");
  auto it = std::find_if(toks.begin(), toks.end(), [](const Token &t) {
    return t.kind == TokenKind::pragma_line;
  });
  ASSERT_NE(it, toks.end());
  EXPECT_EQ(it->text, "#pragma acc data \\\n copy(a[0:n])");
}

TEST(Lexer, OtherDirectivesAreSeparateKind) {
  auto toks = significant("#include <stdio.h>\n#define N 4\n");
  ASSERT_EQ(toks.size(), 2u);
  EXPECT_EQ(toks[0].kind, TokenKind::directive_line);
  EXPECT_EQ(toks[1].text, "#define N 4");
  EXPECT_FALSE(toks[0].is_acc_pragma());
}

TEST(Lexer, UnterminatedString) {
  EXPECT_EQ(code_of([] { tokenize("char *s = \"abc"); }), "E_LEX");
  EXPECT_EQ(code_of([] { tokenize("/* open"); }), "E_LEX");
  EXPECT_EQ(code_of([] { tokenize("char c = 'x"); }), "E_LEX");
}

TEST(Lexer, LiteralsAndOperators) {
  auto toks = significant("x <<= 0x1Fu; y = 1.5e-3f; s = L\"w\"; p->q++;");
  std::vector<std::string> texts;
  for (auto &t : toks)
    texts.push_back(t.text);
  std::vector<std::string> want{"x", "<<=", "0x1Fu", ";", "y", "=", "1.5e-3f", ";",
                                "s", "=", "L\"w\"", ";", "p", "->", "q", "++", ";"};
  EXPECT_EQ(texts, want);
}

TEST(Lexer, RoundTripFuzz) {
  // Random byte soup drawn from C-ish fragments must survive a round trip.
  const char *pieces[] = {"int", " ", "\n", "a", "1", "0x2", "+", "+=", "(", ")",
                          "{", "}", ";", "/* c */", "// l\n", "\"s\\\"t\"", "'c'",
                          "#pragma acc kernels\n", "#define X 1\n", "\t", "->",
                          "...", "1.0f", "@", "$", "\\\n", "\r\n"};
  std::mt19937 rng(7);
  for (int iter = 0; iter < 2000; ++iter) {
    std::string src;
    int n = rng() % 40;
    for (int k = 0; k < n; ++k)
      src += pieces[rng() % std::size(pieces)];
    auto toks = tokenize(src);
    ASSERT_EQ(concat(toks), src);
    SourceLocation loc{1, 1};
    for (const Token &t : toks) {
      ASSERT_EQ(t.location, loc);
      loc = advance_location(loc, t.text);
    }
  }
}

TEST(Normalize, IfBody) {
  EXPECT_EQ(normalize_text("if (x) y=1;").text, "if (x) { y=1; }");
}

TEST(Normalize, ForBody) {
  EXPECT_EQ(normalize_text("for(i=0;i<n;++i) s+=a[i];").text,
            "for(i=0;i<n;++i) { s+=a[i]; }");
}

TEST(Normalize, NestedAndElse) {
  EXPECT_EQ(normalize_text("for(;;) if (a) b; else c;").text,
            "for(;;) { if (a) { b; } else { c; } }");
  EXPECT_EQ(normalize_text("if (a) b; else if (c) d;").text,
            "if (a) { b; } else if (c) { d; }");
  EXPECT_EQ(normalize_text("do x++; while (x < 3);").text,
            "do { x++; } while (x < 3);");
  EXPECT_EQ(normalize_text("while (k) { k--; }").text, "while (k) { k--; }");
}

TEST(Normalize, PragmaInBody) {
  std::string out = normalize_text("for (i=0;i<n;i++)\n#pragma acc loop\nfor(;;) x;")
                        .text;
  EXPECT_EQ(out, "for (i=0;i<n;i++) {\n#pragma acc loop\nfor(;;) { x; } }");
}

TEST(Normalize, Unbalanced) {
  EXPECT_EQ(code_of([] { normalize_text("int f() { if (x) ;"); }), "E_PARSE");
  EXPECT_EQ(code_of([] { normalize_text("int f() ( }"); }), "E_PARSE");
}

TEST(Normalize, ProvenanceMapsBack) {
  auto n = normalize_text("if (x)\n  y = 1;\nz;");
  ASSERT_EQ(n.tokens.size(), n.provenance.size());
  for (std::size_t i = 0; i < n.tokens.size(); ++i) {
    if (n.provenance[i].inserted()) {
      EXPECT_TRUE(n.tokens[i].text == "{" || n.tokens[i].text == "}" ||
                  n.tokens[i].text == " " || n.tokens[i].text == "\n");
    }
  }
  // `z` is on line 3 both before and after.
  auto z = std::find_if(n.tokens.begin(), n.tokens.end(),
                        [](const Token &t) { return t.text == "z"; });
  EXPECT_EQ(n.provenance[z - n.tokens.begin()].original, (SourceLocation{3, 1}));
}

// Removing inserted tokens gives back the original token sequence, and a
// second normalization changes nothing.
TEST(Normalize, SubsequenceAndIdempotence) {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    std::string src = test::control_statement_program(rng);
    auto first = normalize_text(src);
    std::string kept;
    for (std::size_t i = 0; i < first.tokens.size(); ++i)
      if (!first.provenance[i].inserted())
        kept += first.tokens[i].text;
    ASSERT_EQ(kept, src);
    ASSERT_EQ(normalize_text(first.text).text, first.text) << src;
    ASSERT_NO_THROW(parse_ast(first)) << first.text;
  }
}

TEST(Parser, FixedSizeArray) {
  auto ast = parse_ast(normalize_text("float a[10];"));
  ASSERT_EQ(ast.declarations.size(), 1u);
  const Declarator &d = ast.declarations[0].declarators[0];
  EXPECT_EQ(d.name, "a");
  EXPECT_TRUE(d.fixed_size());
  EXPECT_EQ(d.extents[0].value, 10);
  EXPECT_EQ(ast.declarations[0].type.text, "float");
}

TEST(Parser, Pointer) {
  auto ast = parse_ast(normalize_text("float *a;"));
  const Declarator &d = ast.declarations[0].declarators[0];
  EXPECT_EQ(d.pointer_depth, 1);
  EXPECT_FALSE(d.is_array());
}

TEST(Parser, TypedefStruct) {
  auto ast = parse_ast(
      normalize_text("typedef struct point { float x, y; } point;\npoint p;"));
  EXPECT_NE(ast.type_declaration("point"), nullptr);
  EXPECT_NE(ast.type_declaration("struct point"), nullptr);
  auto v = ast.lookup("p", 1000);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->type->text, "point");
  EXPECT_FALSE(ast.is_arithmetic("point"));
}

TEST(Parser, ArithmeticTypes) {
  auto ast = parse_ast(normalize_text("typedef float real; typedef real *rp;"
                                      "enum color { RED, GREEN = 4, BLUE };"));
  EXPECT_TRUE(ast.is_arithmetic("unsigned long"));
  EXPECT_TRUE(ast.is_arithmetic("const double"));
  EXPECT_TRUE(ast.is_arithmetic("real"));
  EXPECT_FALSE(ast.is_arithmetic("rp"));
  EXPECT_TRUE(ast.is_arithmetic("enum color"));
  auto table = ast.constant_table();
  (void)table;
  EXPECT_NE(ast.enumerator("BLUE"), nullptr);
}

TEST(Parser, Errors) {
  EXPECT_EQ(code_of([] { parse_ast(normalize_text("void f(){ goto x; }")); }),
            "E_PARSE");
  EXPECT_EQ(code_of([] { parse_ast(normalize_text("void f(){ x: ; }")); }),
            "E_PARSE");
  EXPECT_EQ(code_of([] { parse_ast(normalize_text("int f(int a, ...);")); }),
            "E_PARSE");
  EXPECT_EQ(code_of([] { parse_ast(normalize_text("void (*fp)(int);")); }),
            "E_PARSE");
  EXPECT_EQ(code_of([] {
              parse_ast(normalize_text("int f(){return 0;}\nint f(){return 1;}"));
            }),
            "E_DUP");
  EXPECT_EQ(code_of([] {
              parse_ast(normalize_text("struct s { int a; };\nstruct s { int b; };"));
            }),
            "E_DUP");
}

TEST(Parser, ErrorLocationIsOriginal) {
  try {
    parse_ast(normalize_text("void f() {\n  if (a) b;\n  goto out;\n}"));
    FAIL();
  } catch (const CompileError &e) {
    EXPECT_EQ(e.diagnostic().location, (SourceLocation{3, 3}));
  }
}

TEST(Parser, FunctionsAndScopes) {
  auto n = normalize_text("int g;\n"
                          "float sq(float x) { return x*x; }\n"
                          "int main() { int n = 4; float a[8];\n"
                          "  for (int i = 0; i < n; i++) a[i] = sq(i);\n"
                          "  { int g = 2; g++; }\n"
                          "  return g; }\n");
  auto ast = parse_ast(n);
  ASSERT_EQ(ast.functions.size(), 2u);
  EXPECT_EQ(ast.functions[1].name, "main");
  auto pos_of = [&](std::string_view text, int nth) {
    for (std::size_t i = 0; i < n.tokens.size(); ++i)
      if (n.tokens[i].text == text && nth-- == 0)
        return i;
    return n.tokens.size();
  };
  // `i` inside the for body resolves to the for-init declaration.
  auto i_use = ast.lookup("i", pos_of("i", 3));
  ASSERT_TRUE(i_use);
  EXPECT_EQ(i_use->origin, DeclOrigin::local);
  // Inner block `g` shadows the global; the final `g` sees the global.
  EXPECT_EQ(ast.lookup("g", pos_of("g", 2))->origin, DeclOrigin::local);
  EXPECT_EQ(ast.lookup("g", pos_of("g", 3))->origin, DeclOrigin::global);
  EXPECT_EQ(ast.lookup("x", pos_of("x", 1))->origin, DeclOrigin::parameter);
  EXPECT_FALSE(ast.lookup("x", pos_of("n", 0)));
  EXPECT_TRUE(ast.lookup("a", pos_of("a", 1))->declarator->fixed_size());
}

TEST(ConstEval, Expressions) {
  std::map<std::string, long long, std::less<>> t{{"N", 8}};
  EXPECT_EQ(evaluate_constant("N*N+1", t), 65);
  EXPECT_EQ(evaluate_constant("(N << 2) / 3", t), 10);
  EXPECT_EQ(evaluate_constant("0x10 - 010", t), 8);
  EXPECT_EQ(evaluate_constant("N > 4 ? -1 : 1", t), -1);
  EXPECT_EQ(evaluate_constant("'A'", t), 65);
  EXPECT_FALSE(evaluate_constant("n + 1", t));
  EXPECT_FALSE(evaluate_constant("1 / 0", t));
}

TEST(ConstEval, MacroTable) {
  auto ast = parse_ast(normalize_text("#define M (N*2)\n#define N 16\nint x;"));
  auto t = ast.constant_table();
  EXPECT_EQ(t.at("N"), 16);
  EXPECT_EQ(t.at("M"), 32);
}
