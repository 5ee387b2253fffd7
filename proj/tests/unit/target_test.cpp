#include <gtest/gtest.h>

#include "fjobf/cps.hpp"
#include "fjobf/target_ast.hpp"
#include "fjobf/target_interp.hpp"
#include "harness.hpp"

namespace fjobf::testing {
namespace {

using namespace fjobf::target;

const char* kPreludeFunctions = "void id_raise(Exception e) { return; }\n";

TargetProgram program(const std::string& body) {
  return canonicalize(parse_target("type ExCont = Exception => void;\ntype NmCont = void => void;\n" + body + "\n" +
                                   kPreludeFunctions));
}

TargetCallResult run(const TargetProgram& p, const std::string& cls, const std::string& m, Value arg,
                     TargetOptions o = {}) {
  TargetInterpreter in(p, o);
  Location self = in.instantiate(cls, {{"f", Value::int_(0)}});
  return in.call(self, m, arg);
}

TEST(TargetTypes, ArrowsAssociateRight) {
  FunType t = cps_func_type();
  EXPECT_TRUE(t.is_arrow());
  EXPECT_EQ(t.arity(), 2);
  EXPECT_EQ(t.from(), exn_cont_type());
  EXPECT_EQ(t.to().from(), nm_cont_type());
  EXPECT_EQ(print_type(t), "(Exception => void) => (void => void) => void");
  EXPECT_EQ(print_type(t, standard_aliases()), "CpsFunc");
  EXPECT_EQ(print_type(FunType::arrow(exn_cont_type(), void_type()), standard_aliases()), "ExCont => void");
  TargetProgram p = parse_target("type F = int => int;\nint g(F => F h) { return 1; }\n");
  const auto& ty = *p.functions[0].params[0].type;
  EXPECT_EQ(print_type(ty), "(int => int) => int => int");
}

TEST(TargetParse, PreludeRoundTrips) {
  TargetProgram p = parse_target(cps::prelude_text());
  EXPECT_EQ(p.functions.size(), 5u);
  std::string printed = print_target(p);
  EXPECT_EQ(parse_target(printed), p);
  EXPECT_EQ(print_target(parse_target(printed)), printed);
  EXPECT_EQ(p.functions, cps::emit_prelude());
}

TEST(TargetParse, PreludeGolden) {
  TargetProgram p;
  p.aliases = standard_aliases();
  p.functions = cps::emit_prelude();
  EXPECT_EQ(print_target(p), read_file(std::filesystem::path(FJOBF_GOLDEN_DIR) / "prelude.fjl"));
}

TEST(TargetParse, ReferenceListingRoundTrips) {
  TargetProgram p = load_target_corpus("fib_reference.fjl");
  std::string printed = print_target(p);
  EXPECT_EQ(parse_target(printed), p);
  // The combinators in the listing are the ones the translator emits.
  for (const auto& f : cps::emit_prelude()) {
    const TargetMethod* g = p.find_function(f.name);
    ASSERT_NE(g, nullptr) << f.name;
    EXPECT_EQ(*g, f) << f.name;
  }
}

TEST(TargetParse, SyntaxErrorsHavePositions) {
  try {
    parse_target("int f(int x) {\n  return x +;\n}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Syntax);
    EXPECT_EQ(e.pos().line, 2);
  }
}

TEST(TargetIndex, ReferenceDisplayNames) {
  TargetProgram p = load_target_corpus("fib_reference.fjl");
  ProgramIndex idx(p);
  for (const char* d : {"λ_7", "λ_18", "λ_35", "λ_52", "λ_52′", "λ_68", "λ_68′", "λ_70", "λ_78", "λ_78′"})
    EXPECT_GE(idx.find_by_display(d), 0) << d;
  EXPECT_GE(idx.find_by_display("seq"), 0);
  EXPECT_GE(idx.find_by_display("get"), 0);
  int l18 = idx.find_by_display("λ_18");
  EXPECT_EQ(idx.at(l18).top, idx.method_id("FibGen", "get"));
  // Frame of get holds the block lambdas and every declaration inside them.
  const auto& fv = idx.frame_vars(idx.method_id("FibGen", "get"));
  for (const char* v : {"this", "x", "i", "res", "get1", "get_cps", "pseq", "nk_res", "ign"})
    EXPECT_NE(std::find(fv.begin(), fv.end(), v), fv.end()) << v;
}

TEST(TargetInterp, CurriedParamsAreFreshPerApplication) {
  auto p = program(
      "class A { int f;\n"
      "  int m(int x) {\n"
      "    int n;\n"
      "    int => int => int add = (int a) -> (int b) -> { return a + b; };\n"
      "    int => int add2 = add(2);\n"
      "    int => int add5 = add(5);\n"
      "    n = add2(x) + add5(x);\n"
      "    return n;\n"
      "  }\n"
      "}\n");
  EXPECT_EQ(run(p, "A", "m", Value::int_(1)).value, Value::int_(9));
}

TEST(TargetInterp, LambdasShareTheFrame) {
  auto p = program(
      "class A { int f;\n"
      "  int m(int x) {\n"
      "    int count;\n"
      "    NmCont bump = n -> { count = count + x; this.f = this.f + 1; return; };\n"
      "    count = 0;\n"
      "    void a = bump();\n"
      "    void b = bump();\n"
      "    return count + this.f;\n"
      "  }\n"
      "}\n");
  EXPECT_EQ(run(p, "A", "m", Value::int_(5)).value, Value::int_(12));
}

TEST(TargetInterp, DeclarationsInLambdasLiveInTheFrame) {
  auto p = program(
      "class A { int f;\n"
      "  int m(int x) {\n"
      "    NmCont set = n -> { int y = x + 1; return; };\n"
      "    void a = set();\n"
      "    return y;\n"
      "  }\n"
      "}\n");
  EXPECT_EQ(run(p, "A", "m", Value::int_(5)).value, Value::int_(6));
}

TEST(TargetInterp, ArityMismatchIsAnError) {
  auto p = program(
      "class A { int f;\n"
      "  int m(int x) {\n"
      "    int => int => int add = (int a) -> (int b) -> { return a + b; };\n"
      "    int r = add(1, 2);\n"
      "    return r;\n"
      "  }\n"
      "}\n");
  EXPECT_THROW(run(p, "A", "m", Value::int_(0)), Error);
}

TEST(TargetInterp, IdRaiseMarksException) {
  auto p = program(
      "class A { int f;\n"
      "  int m(int x) {\n"
      "    if (x < 0) {\n"
      "      void a = id_raise(new Exception());\n"
      "    } else {\n"
      "      this.f = x;\n"
      "    }\n"
      "    return x;\n"
      "  }\n"
      "}\n");
  auto raised = run(p, "A", "m", Value::int_(-1));
  EXPECT_TRUE(raised.raised);
  EXPECT_EQ(raised.payload.kind, Value::Kind::Loc);
  EXPECT_FALSE(run(p, "A", "m", Value::int_(1)).raised);
}

TEST(TargetInterp, StepBudget) {
  auto p = program(
      "class A { int f;\n"
      "  int m(int x) { int r = this.m(x); return r; }\n"
      "}\n");
  TargetOptions o;
  o.step_budget = 1000;
  try {
    run(p, "A", "m", Value::int_(0), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
  }
}

TEST(TargetInterp, HooksReportBindingsAndCalls) {
  TargetProgram p = cps::translate_program(load_corpus("fib.ssafj"));
  std::set<std::pair<int, int>> calls;
  std::size_t closures = 0;
  TargetOptions o;
  o.on_call = [&](int a, int b) { calls.insert({a, b}); };
  o.on_bind = [&](int, const std::string&, const Value& v) { closures += v.kind == Value::Kind::Closure; };
  TargetInterpreter in(p, o);
  Location self = in.instantiate("FibGen", {{"f1", Value::int_(0)}, {"f2", Value::int_(1)}, {"lpos", Value::int_(1)}});
  auto r = in.call(self, "get", Value::int_(4));
  EXPECT_EQ(r.value, Value::int_(3));
  EXPECT_GT(closures, 10u);
  int seq = in.index().function_id("seq");
  bool calls_seq = false;
  for (const auto& [a, b] : calls) calls_seq |= b == seq;
  EXPECT_TRUE(calls_seq);
}

}  // namespace
}  // namespace fjobf::testing
