// Source and translated programs agree on every observable of a call
// sequence: outcome, value, printed lines and the receiver heap.
#include <map>

#include <gtest/gtest.h>

#include "fjobf/cps.hpp"
#include "gen.hpp"
#include "harness.hpp"

namespace fjobf::testing {
namespace {

std::string explain(const report::DiffReport& d) {
  for (const auto& p : d.pairs)
    if (!p.agree()) return p.input.to_json().dump() + "\n" + report::DiffReport{{p}}.to_json().dump(1);
  return {};
}

void expect_agree(const source::SourceProgram& p, const std::vector<report::Sequence>& in, bool flatten) {
  auto violations = source::validate(p);
  ASSERT_TRUE(violations.empty()) << violations.front().rule << ": " << violations.front().message << "\n"
                                  << source::print_source(p);
  auto d = differential(p, in, flatten);
  EXPECT_TRUE(d.agree()) << source::print_source(p) << "\n" << explain(d);
}

TEST(Differential, RandomProgramsUnflattened) {
  for_cases(kPropertyCases, 1000, [](std::mt19937_64& rng, int) {
    auto p = random_program(rng);
    expect_agree(p, random_inputs(rng), false);
  });
}

TEST(Differential, RandomProgramsFlattened) {
  for_cases(kPropertyCases, 5000, [](std::mt19937_64& rng, int) {
    auto p = random_program(rng);
    expect_agree(p, random_inputs(rng), true);
  });
}

// Guards against the generator drifting into programs that never raise or
// never print, which would make the agreement above vacuous.
TEST(Differential, GeneratorCoversOutcomes) {
  std::map<report::Outcome, int> outcomes;
  int printed = 0;
  for_cases(64, 1000, [&](std::mt19937_64& rng, int) {
    auto p = random_program(rng);
    for (const auto& pr : differential(p, random_inputs(rng), false).pairs)
      for (const auto& r : pr.source) {
        outcomes[r.outcome]++;
        printed += !r.printed.empty();
      }
  });
  EXPECT_GT(outcomes[report::Outcome::Normal], 0);
  EXPECT_GT(outcomes[report::Outcome::Exception], 0);
  EXPECT_GT(printed, 0);
}

TEST(Differential, DeepNesting) {
  GenOptions o;
  o.max_depth = 5;
  o.max_blocks = 4;
  o.methods = 2;
  for_cases(64, 9000, [&](std::mt19937_64& rng, int) {
    auto p = random_program(rng, o);
    expect_agree(p, random_inputs(rng), true);
  });
}

TEST(Differential, MultiEntryWhileAfterPreprocessing) {
  for (int throws = 1; throws <= 4; ++throws) {
    SCOPED_TRACE(throws);
    auto raw = multi_entry_program(throws);
    if (throws >= 2) EXPECT_FALSE(source::validate(raw).empty());
    auto p = source::preprocess_while_entries(raw);
    std::vector<report::Sequence> in(1);
    in[0].cls = "Main";
    for (int x = -1; x <= throws; ++x) in[0].calls.push_back({"m0", Value::int_(x)});
    expect_agree(p, in, false);
    expect_agree(p, in, true);
  }
}

}  // namespace
}  // namespace fjobf::testing
