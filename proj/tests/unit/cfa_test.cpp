#include <gtest/gtest.h>

#include "cfa_util.hpp"
#include "fjobf/cfa.hpp"
#include "fjobf/cps.hpp"
#include "harness.hpp"

namespace fjobf::testing {
namespace {

using namespace fjobf::cfa;
namespace t = fjobf::target;
using Names = std::set<std::string>;

const char* kSingleSeq =
    "class P { int f;\n"
    "  int m(int x) {\n"
    "    int res;\n"
    "    CpsFunc a = (ExCont raise) -> (NmCont k) -> { return k(); };\n"
    "    CpsFunc b = (ExCont raise) -> (NmCont k) -> { return k(); };\n"
    "    CpsFunc ab = seq(a, b);\n"
    "    NmCont => void ab_raise = ab(id_raise);\n"
    "    NmCont done = n -> { return; };\n"
    "    void ign = ab_raise(done);\n"
    "    return res;\n"
    "  }\n"
    "}\n";

class Reference : public ::testing::Test {
 protected:
  t::TargetProgram prog = load_target_corpus("fib_reference.fjl");
  t::ProgramIndex idx{prog};
};

TEST_F(Reference, ZeroCfaMergesSeqFormals) {
  auto r = solve_0cfa(idx);
  EXPECT_EQ(pts(idx, r, "seq", "first"), (Names{"λ_18", "λ_78"}));
  EXPECT_EQ(pts(idx, r, "seq", "second"), (Names{"λ_35", "λ_68"}));
  EXPECT_EQ(pts(idx, r, "seq", "first_raise"), (Names{"λ_18′", "λ_78′"}));
  EXPECT_EQ(pts(idx, r, "seq", "second_raise"), (Names{"λ_35′", "λ_68′"}));
}

TEST_F(Reference, ZeroCfaOtherwiseSingletons) {
  auto r = solve_0cfa(idx);
  auto names = variable_names(idx);
  std::set<std::string> merged = {"first", "second", "first_raise", "second_raise"};
  for (const auto& v : r.variables()) {
    if (idx.at(v.owner).display == "seq" && merged.count(v.name)) continue;
    EXPECT_LE(r.points_to(v).size(), 1u) << names[v];
  }
}

TEST_F(Reference, ZeroCfaCombinatorFormals) {
  auto r = solve_0cfa(idx);
  EXPECT_EQ(pts(idx, r, "loop", "cond"), (Names{"λ_8"}));
  EXPECT_EQ(pts(idx, r, "ifelse", "cond"), (Names{"λ_9"}));
  EXPECT_EQ(pts(idx, r, "loop", "visitor"), (Names{"λ_28"}));
  EXPECT_EQ(pts(idx, r, "loop", "exit"), (Names{"λ_31"}));
  EXPECT_EQ(pts(idx, r, "ifelse", "th"), (Names{"λ_26"}));
  EXPECT_EQ(pts(idx, r, "trycatch", "tr"), (Names{"λ_90"}));
  EXPECT_EQ(pts(idx, r, "trycatch", "hdl"), (Names{"λ_23"}));
}

TEST_F(Reference, OneCfaSplitsBySite) {
  auto r = solve_kcfa(idx, 1);
  auto first = pts_by_context(idx, r, "seq", "first");
  auto second = pts_by_context(idx, r, "seq", "second");
  using Ctx = std::map<std::string, Names>;
  EXPECT_EQ(first, (Ctx{{"12", {"λ_78"}}, {"13", {"λ_18"}}}));
  EXPECT_EQ(second, (Ctx{{"12", {"λ_35"}}, {"13", {"λ_68"}}}));
  EXPECT_EQ(pts_by_context(idx, r, "seq", "first_raise"), (Ctx{{"12", {"λ_78′"}}, {"13", {"λ_18′"}}}));
  EXPECT_EQ(pts_by_context(idx, r, "seq", "second_raise"), (Ctx{{"12", {"λ_35′"}}, {"13", {"λ_68′"}}}));
}

TEST_F(Reference, ContextsRefineMonotonically) {
  auto r0 = solve(idx, 0), r1 = solve(idx, 1), r2 = solve(idx, 2);
  for (const auto& v : r0.variables()) {
    auto s0 = r0.points_to(v), s1 = r1.points_to(v), s2 = r2.points_to(v);
    EXPECT_TRUE(std::includes(s0.begin(), s0.end(), s1.begin(), s1.end())) << v.name;
    EXPECT_TRUE(std::includes(s1.begin(), s1.end(), s2.begin(), s2.end())) << v.name;
  }
}

TEST_F(Reference, SolutionIsAFixpointAndDeterministic) {
  for (int k : {0, 1, 2}) {
    auto r = solve(idx, k);
    EXPECT_TRUE(is_fixpoint(idx, r)) << k;
    EXPECT_EQ(solve(idx, k), r) << k;
    EXPECT_GT(r.iterations, 0u);
  }
}

TEST_F(Reference, CallersOfLambdas) {
  auto r = solve_0cfa(idx);
  // The get1 block lambda is applied from inside seq only.
  std::set<int> from;
  for (const auto& s : callers(r, idx.find_by_display("λ_18"))) from.insert(s.callable);
  EXPECT_EQ(displays(idx, from), (Names{"λ_68′"}));
  EXPECT_TRUE(callers(r, idx.find_by_display("λ_52′")).size() >= 1);
}

TEST_F(Reference, JoinAtSeesEnclosingScopes) {
  auto r = solve_0cfa(idx);
  int inner = idx.find_by_display("λ_70");
  SiteId site{inner, 0};
  auto st = join_at(idx, r, site);
  EXPECT_TRUE(st.count("second"));
  EXPECT_TRUE(st.count("raise"));
  EXPECT_EQ(st.at("second").size(), 2u);
}

TEST(Cfa, SingleSeqCallIsPrecise) {
  auto p = with_prelude(kSingleSeq);
  t::ProgramIndex idx(p);
  auto r0 = solve_0cfa(idx);
  EXPECT_EQ(pts(idx, r0, "seq", "first").size(), 1u);
  EXPECT_EQ(pts(idx, r0, "seq", "second").size(), 1u);
  EXPECT_NE(pts(idx, r0, "seq", "first"), pts(idx, r0, "seq", "second"));
  auto r1 = solve_kcfa(idx, 1);
  for (const auto& v : r0.variables()) EXPECT_EQ(r0.points_to(v), r1.points_to(v)) << v.name;
}

TEST(Cfa, NoLambdasNoBindings) {
  auto p = t::canonicalize(t::parse_target("class A { int f; int m(int x) { int y; y = x + 1; return y; } }"));
  t::ProgramIndex idx(p);
  auto r = solve_0cfa(idx);
  for (const auto& v : r.variables()) EXPECT_TRUE(r.points_to(v).empty()) << v.name;
  for (const auto& e : r.edges) EXPECT_NE(idx.at(e.callee).kind, t::Callable::Kind::Lambda);
}

TEST(Cfa, AbstractEvalAndFlow) {
  auto p = with_prelude(kSingleSeq);
  t::ProgramIndex idx(p);
  auto r = solve_0cfa(idx);
  auto la = r.points_to({idx.method_id("P", "m"), "a"});
  ASSERT_EQ(la.size(), 1u);
  int a = *la.begin();
  AbstractState sigma{{"a", {a}}, {"b", {}}};
  EXPECT_EQ(abstract_eval(idx, sigma, t::var("a")), std::set<int>{a});
  EXPECT_EQ(abstract_eval(idx, sigma, t::var("seq")), std::set<int>{idx.function_id("seq")});
  EXPECT_TRUE(abstract_eval(idx, sigma, t::var("missing")).empty());

  ReturnTable none;
  auto s1 = flow(idx, t::assign("b", t::var("a")), sigma, none);
  EXPECT_EQ(s1.at("b"), std::set<int>{a});
  // Strong update.
  auto s2 = flow(idx, t::assign("a", t::var("b0")), s1, none);
  EXPECT_TRUE(s2.at("a").empty());
  EXPECT_EQ(flow(idx, t::ret(t::var("a")), sigma, none), sigma);

  auto rets = return_table(r);
  auto s3 = flow(idx, t::assign("c", t::apply(t::var("seq"), {t::var("a"), t::var("b")})), sigma, rets);
  EXPECT_EQ(s3.at("c"), r.points_to({idx.method_id("P", "m"), "ab"}));
  EXPECT_EQ(s3.at("c").size(), 1u);
}

TEST(Cfa, FlowLambdaBindsFormals) {
  auto p = with_prelude(kSingleSeq);
  t::ProgramIndex idx(p);
  auto r = solve_0cfa(idx);
  auto f = flow_lambda(idx, r, idx.function_id("seq"));
  ASSERT_EQ(f.size(), 2u);
  int m = idx.method_id("P", "m");
  EXPECT_EQ(f.at("first"), r.points_to({m, "a"}));
  EXPECT_EQ(f.at("second"), r.points_to({m, "b"}));
}

TEST(Cfa, OwnTranslationHasPerSiteSingletonsUnderOneCfa) {
  auto p = t::canonicalize(cps::translate_program(load_corpus("fib.ssafj")));
  t::ProgramIndex idx(p);
  auto r0 = solve_0cfa(idx);
  auto r1 = solve_kcfa(idx, 1);
  EXPECT_GT(pts(idx, r0, "seq", "first").size(), 2u);
  for (const char* v : {"first", "second"}) {
    auto per = pts_by_context(idx, r1, "seq", v);
    EXPECT_GE(per.size(), 2u);
    for (const auto& [ctx, s] : per) EXPECT_EQ(s.size(), 1u) << v << " at " << ctx;
  }
}

TEST(Cfa, NamesAndContexts) {
  t::TargetProgram prog = load_target_corpus("fib_reference.fjl");
  t::ProgramIndex idx(prog);
  auto r = solve_kcfa(idx, 1);
  auto names = variable_names(idx);
  int seq = idx.function_id("seq");
  EXPECT_EQ(names.at({seq, "first"}), "first");
  // `raise` is bound in many lambdas, so its name carries the owner.
  bool qualified = false;
  for (const auto& [v, n] : names) qualified |= v.name == "raise" && n.find('@') != std::string::npos;
  EXPECT_TRUE(qualified);
  EXPECT_EQ(display_context(r, {}), "root");
}

}  // namespace
}  // namespace fjobf::testing
