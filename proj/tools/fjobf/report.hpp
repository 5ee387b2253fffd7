#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fjobf/cfa.hpp"
#include "fjobf/cps.hpp"
#include "fjobf/source_ast.hpp"
#include "fjobf/target_ast.hpp"
#include "fjobf/values.hpp"

// Run, diff and analysis reports shared by the command-line tool, the
// acceptance suite and the benchmarks.
namespace fjobf::report {

using nlohmann::json;

enum class Outcome { Normal, Exception, ResourceLimit };
const char* outcome_name(Outcome o);

struct RunReport {
  Outcome outcome = Outcome::Normal;
  std::string value;  // heap-canonical rendering
  std::vector<std::string> printed;
  std::uint64_t steps = 0;
  std::string heap;  // receiver object after the call

  json to_json() const;
};

struct Call {
  std::string method;
  Value arg;
};

// One fresh object and the calls made on it in order.
struct Sequence {
  std::string cls;
  std::map<std::string, Value> state;
  std::vector<Call> calls;

  json to_json() const;
};

Value value_from_json(const json& j);
json value_to_json(const Value& v);
// `3`, `-1`, `true`, `false`, `null`, or a quoted string.
Value parse_value(const std::string& text);
// `f1=0,f2=1` or repeated `name=value` items.
std::map<std::string, Value> parse_state(const std::vector<std::string>& items);

// Accepts a list of sequences, or a bare list of integers used as one
// sequence on `default_class`.
std::vector<Sequence> parse_inputs(const json& j, const std::string& default_class = "");

std::vector<RunReport> run_source(const source::SourceProgram& p, const Sequence& seq, std::uint64_t budget);
std::vector<RunReport> run_target(const target::TargetProgram& p, const Sequence& seq, std::uint64_t budget);

struct DiffPair {
  Sequence input;
  std::vector<RunReport> source, target;
  std::vector<std::string> fields;  // what disagreed; empty when agreeing
  bool agree() const { return fields.empty(); }
};

struct DiffReport {
  std::vector<DiffPair> pairs;
  bool agree() const;
  json to_json() const;
};

std::vector<std::string> compare(const std::vector<RunReport>& a, const std::vector<RunReport>& b);
DiffReport diff(const source::SourceProgram& src, const target::TargetProgram& tgt,
                const std::vector<Sequence>& inputs, std::uint64_t budget);

json analysis_json(const target::ProgramIndex& index, const cfa::AnalysisResult& r, const cfa::Cfg& g);
json cfg_json(const cfa::Cfg& g);

}  // namespace fjobf::report
