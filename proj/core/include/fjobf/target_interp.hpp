#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fjobf/target_ast.hpp"
#include "fjobf/values.hpp"

namespace fjobf::target {

inline constexpr std::uint64_t kDefaultTargetBudget = 1'000'000;
inline constexpr std::size_t kDefaultMaxDepth = 100'000;

// Budget from FJOBF_STEP_BUDGET if set to a positive integer, else `fallback`.
std::uint64_t step_budget_from_env(std::uint64_t fallback);

struct TargetOptions {
  std::uint64_t step_budget = kDefaultTargetBudget;  // applications and method calls
  std::size_t max_depth = kDefaultMaxDepth;
  // A variable declared by callable `owner` received `value`.
  std::function<void(int owner, const std::string& name, const Value& value)> on_bind;
  // Callable `caller` applied or called `callee`.
  std::function<void(int caller, int callee)> on_call;
};

struct TargetCallResult {
  Value value;
  bool raised = false;  // the built-in id_raise continuation was applied
  Value payload;
};

// Interpreter for FJ_lambda. One mutable frame per method or function
// activation; lambda parameters live in a fresh scope chained to the
// closure's captured scope.
class TargetInterpreter {
 public:
  explicit TargetInterpreter(const TargetProgram& prog, TargetOptions opts = {});

  const ProgramIndex& index() const { return index_; }
  Store& store() { return store_; }
  const Store& store() const { return store_; }
  const std::vector<std::string>& printed() const { return printed_; }
  std::uint64_t steps() const { return steps_; }

  Location instantiate(const std::string& cls, const std::map<std::string, Value>& state = {});

  // Runs on a thread with a large stack, since CPS code nests deeply.
  TargetCallResult call(Location receiver, const std::string& method, const Value& arg);

  // Direct entry points, usable from tests on the caller's stack.
  Value eval_method(int callable, const Value& receiver, const std::vector<Value>& args, int caller = -1);
  Value apply(const Value& fn, const std::vector<Value>& args, int caller = -1);

 private:
  struct Scope {
    std::int64_t parent = -1;
    int owner = -1;
    std::map<std::string, Value, std::less<>> vars;
  };
  struct Ctx {
    std::uint32_t scope;
    int callable;
  };

  const TargetProgram& prog_;
  ProgramIndex index_;
  TargetOptions opts_;
  Store store_;
  std::vector<Scope> scopes_;
  std::vector<std::string> printed_;
  std::uint64_t steps_ = 0;
  std::size_t depth_ = 0;
  bool raised_ = false;
  Value payload_;
  int id_raise_ = -1;

  std::uint32_t new_scope(std::int64_t parent, int owner);
  void bind(std::uint32_t scope, const std::string& name, Value v);
  void tick(Pos pos);

  std::optional<Value> exec(const std::vector<Stmt>& ss, const Ctx& c);
  Value eval(const Expr& e, const Ctx& c);
  Value lookup(const std::string& name, const Ctx& c, Pos pos) const;
  void assign(const std::string& name, Value v, const Ctx& c, Pos pos);
  Value call_callable(int callee, std::uint32_t captured, const Value& receiver, std::vector<Value> args, Pos pos);
};

// Runs `fn` on a thread with a `stack_bytes` stack and rethrows whatever it
// threw on the calling thread.
void run_on_large_stack(const std::function<void()>& fn, std::size_t stack_bytes = std::size_t{512} << 20);

}  // namespace fjobf::target
