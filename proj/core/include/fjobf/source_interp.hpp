#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fjobf/source_ast.hpp"
#include "fjobf/values.hpp"

namespace fjobf::source {

using LEnv = std::map<std::string, Value>;

struct ExceptionOutcome {
  Value payload;
  LEnv env;
  Label label;
};

struct BlockOutcome {
  bool raised = false;
  Value value;   // normal: block value; raised: payload
  LEnv env;
  Label label;   // exit label, or the label carried by the exception
};

struct MethodOutcome {
  bool raised = false;
  Value value;
  Label label;  // raised only
};

inline constexpr std::uint64_t kDefaultStepBudget = 1'000'000;

struct InterpOptions {
  std::uint64_t step_budget = kDefaultStepBudget;
  // Called on every block entry with (label, pred, env before the block).
  std::function<void(const Label&, const Label&, const LEnv&)> on_block;
};

// Reference interpreter. The store is owned by the interpreter and grows
// monotonically; environments are passed by value.
class Interpreter {
 public:
  explicit Interpreter(const SourceProgram& prog, InterpOptions opts = {});

  Store& store() { return store_; }
  const Store& store() const { return store_; }
  const std::vector<std::string>& printed() const { return printed_; }
  std::uint64_t steps() const { return steps_; }

  // Allocates an object of class `cls` with every field null, then applies
  // the given field values.
  Location instantiate(const std::string& cls, const std::map<std::string, Value>& state = {});

  MethodOutcome call(Location receiver, const std::string& method, const Value& arg);

  MethodOutcome eval_method(const SourceMethod& md, const Value& receiver, const Value& arg);
  BlockOutcome eval_blocks(const std::vector<Block>& blocks, const Label& pred, LEnv lenv);
  BlockOutcome eval_block(const Block& block, const Label& pred, LEnv lenv);
  LEnv eval_assignments(const std::vector<Assignment>& as, LEnv lenv);
  Value eval_expr(const Expr& e, const LEnv& lenv);

  const SourceClass& class_of(Location l, Pos pos = {}) const;

 private:
  const SourceProgram& prog_;
  InterpOptions opts_;
  Store store_;
  std::vector<std::string> printed_;
  std::uint64_t steps_ = 0;
};

// Parallel phi resolution. If no phi names `incoming` the env is returned
// unchanged; if only some do, that is a missing-operand error.
LEnv resolve_phis(const std::vector<Phi>& phis, const Label& incoming, LEnv lenv);

}  // namespace fjobf::source
