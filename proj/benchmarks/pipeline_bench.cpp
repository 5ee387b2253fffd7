#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "fjobf/cfa.hpp"
#include "fjobf/cps.hpp"
#include "fjobf/target_interp.hpp"
#include "gen.hpp"
#include "report.hpp"

namespace fj = fjobf;
namespace t = fjobf::target;
using fjobf::testing::GenOptions;

namespace {

fj::source::SourceProgram generated(int methods, int blocks) {
  std::mt19937_64 rng(20261014 + methods * 31 + blocks);
  GenOptions o;
  o.methods = methods;
  o.max_blocks = blocks;
  return fj::source::preprocess_while_entries(fj::testing::random_program(rng, o));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fj::source::SourceProgram fib() {
  return fj::source::preprocess_while_entries(
      fj::source::parse_source(read_file(std::string(FJOBF_CORPUS_DIR) + "/fib.ssafj")));
}

fj::report::Sequence fib_calls(int n) {
  fj::report::Sequence s;
  s.cls = "FibGen";
  s.state = {{"f1", fj::Value::int_(0)}, {"f2", fj::Value::int_(1)}, {"lpos", fj::Value::int_(1)}};
  s.calls.push_back({"get", fj::Value::int_(n)});
  return s;
}

void BM_Translate(benchmark::State& st) {
  auto p = generated(static_cast<int>(st.range(0)), 3);
  fj::cps::TranslateOptions o;
  o.flatten = false;
  for (auto _ : st) benchmark::DoNotOptimize(fj::cps::translate_program(p, o));
}
BENCHMARK(BM_Translate)->Arg(1)->Arg(4)->Arg(8);

void BM_Flatten(benchmark::State& st) {
  fj::cps::TranslateOptions o;
  o.flatten = false;
  auto tp = fj::cps::translate_program(generated(static_cast<int>(st.range(0)), 3), o);
  for (auto _ : st) benchmark::DoNotOptimize(fj::cps::flatten_program(tp));
}
BENCHMARK(BM_Flatten)->Arg(1)->Arg(4)->Arg(8);

void BM_SourceInterp(benchmark::State& st) {
  auto p = fib();
  auto seq = fib_calls(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fj::report::run_source(p, seq, 10000000));
}
BENCHMARK(BM_SourceInterp)->Arg(10)->Arg(40)->Arg(80);

void BM_TargetInterp(benchmark::State& st) {
  auto tp = t::canonicalize(fj::cps::translate_program(fib()));
  auto seq = fib_calls(static_cast<int>(st.range(0)));
  for (auto _ : st)
    t::run_on_large_stack([&] { benchmark::DoNotOptimize(fj::report::run_target(tp, seq, 10000000)); });
}
BENCHMARK(BM_TargetInterp)->Arg(10)->Arg(40)->Arg(80)->UseRealTime();

void BM_Cfa(benchmark::State& st) {
  int k = static_cast<int>(st.range(0));
  auto tp = t::canonicalize(fj::cps::translate_program(generated(static_cast<int>(st.range(1)), 2)));
  t::ProgramIndex idx(tp);
  for (auto _ : st) benchmark::DoNotOptimize(fj::cfa::solve(idx, k));
  st.counters["callables"] = idx.size();
}
BENCHMARK(BM_Cfa)->Args({0, 1})->Args({0, 2})->Args({0, 4})->Args({1, 1})->Args({1, 2})->Unit(benchmark::kMillisecond);

void BM_CfaFibReference(benchmark::State& st) {
  auto tp = t::parse_target(read_file(std::string(FJOBF_CORPUS_DIR) + "/fib_reference.fjl"));
  t::ProgramIndex idx(tp);
  for (auto _ : st) benchmark::DoNotOptimize(fj::cfa::solve(idx, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_CfaFibReference)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode from another compiler
// release, so the entry point is defined here.
BENCHMARK_MAIN();
