#include "fjobf/target_interp.hpp"

#include <pthread.h>

#include <cstdlib>
#include <exception>

namespace fjobf::target {

std::uint64_t step_budget_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("FJOBF_STEP_BUDGET");
  if (!s || !*s) return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0' || v == 0) return fallback;
  return v;
}

namespace {

struct ThreadJob {
  const std::function<void()>* fn;
  std::exception_ptr err;
};

void* thread_main(void* p) {
  auto* job = static_cast<ThreadJob*>(p);
  try {
    (*job->fn)();
  } catch (...) {
    job->err = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void run_on_large_stack(const std::function<void()>& fn, std::size_t stack_bytes) {
  ThreadJob job{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, stack_bytes);
  pthread_t th;
  int rc = pthread_create(&th, &attr, &thread_main, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();  // fall back to the current stack
    return;
  }
  pthread_join(th, nullptr);
  if (job.err) std::rethrow_exception(job.err);
}

TargetInterpreter::TargetInterpreter(const TargetProgram& prog, TargetOptions opts)
    : prog_(prog), index_(prog), opts_(std::move(opts)) {
  id_raise_ = index_.function_id("id_raise");
}

Location TargetInterpreter::instantiate(const std::string& cls, const std::map<std::string, Value>& state) {
  Object o;
  o.cls = cls;
  if (cls != "Exception") {
    const TargetClass* c = prog_.find_class(cls);
    if (!c) throw Error(ErrorKind::Eval, "unknown class " + cls);
    for (const auto& f : c->fields) o.fields[f.name] = Value::null();
  }
  for (const auto& [f, v] : state) {
    if (!o.fields.count(f)) throw Error(ErrorKind::Eval, "class " + cls + " has no field " + f);
    o.fields[f] = v;
  }
  return store_.alloc(std::move(o));
}

TargetCallResult TargetInterpreter::call(Location receiver, const std::string& method, const Value& arg) {
  const std::string& cls = store_.at(receiver).cls;
  int id = index_.method_id(cls, method);
  if (id < 0) throw Error(ErrorKind::Eval, "class " + cls + " has no method " + method);
  raised_ = false;
  payload_ = Value::null();
  TargetCallResult out;
  run_on_large_stack([&] { out.value = eval_method(id, Value::location(receiver), {arg}); });
  out.raised = raised_;
  out.payload = payload_;
  return out;
}

Value TargetInterpreter::eval_method(int callable, const Value& receiver, const std::vector<Value>& args, int caller) {
  if (opts_.on_call && caller >= 0) opts_.on_call(caller, callable);
  return call_callable(callable, 0, receiver, args, {});
}

Value TargetInterpreter::apply(const Value& fn, const std::vector<Value>& args, int caller) {
  if (fn.kind != Value::Kind::Closure) throw Error(ErrorKind::Eval, "applying a non-function value " + render(fn));
  if (opts_.on_call && caller >= 0) opts_.on_call(caller, fn.callable);
  return call_callable(fn.callable, fn.scope, Value::null(), args, {});
}

std::uint32_t TargetInterpreter::new_scope(std::int64_t parent, int owner) {
  scopes_.push_back({parent, owner, {}});
  return static_cast<std::uint32_t>(scopes_.size() - 1);
}

void TargetInterpreter::bind(std::uint32_t scope, const std::string& name, Value v) {
  Scope& s = scopes_[scope];
  if (opts_.on_bind) opts_.on_bind(s.owner, name, v);
  s.vars[name] = std::move(v);
}

void TargetInterpreter::tick(Pos pos) {
  if (++steps_ > opts_.step_budget)
    throw Error(ErrorKind::ResourceLimit, "step budget of " + std::to_string(opts_.step_budget) + " exhausted", pos);
}

Value TargetInterpreter::call_callable(int callee, std::uint32_t captured, const Value& receiver,
                                       std::vector<Value> args, Pos pos) {
  tick(pos);
  if (++depth_ > opts_.max_depth) {
    depth_ = 0;
    throw Error(ErrorKind::ResourceLimit, "call depth limit of " + std::to_string(opts_.max_depth) + " exceeded", pos);
  }
  struct DepthGuard {
    std::size_t& d;
    ~DepthGuard() {
      if (d > 0) --d;
    }
  } guard{depth_};

  const Callable& c = index_.at(callee);
  const auto& params = c.params();
  // A one-parameter function may be applied to no argument; the parameter
  // is then null.
  if (params.size() == 1 && args.empty()) args.push_back(Value::null());
  if (params.size() != args.size())
    throw Error(ErrorKind::Eval,
                c.display + " expects " + std::to_string(params.size()) + " arguments, got " +
                    std::to_string(args.size()),
                pos);

  if (callee == id_raise_ && !raised_) {
    raised_ = true;
    payload_ = args[0];
  }

  std::uint32_t scope;
  if (c.kind == Callable::Kind::Lambda) {
    scope = new_scope(captured, callee);
    for (std::size_t i = 0; i < params.size(); ++i) bind(scope, params[i].name, args[i]);
  } else {
    scope = new_scope(-1, callee);
    Scope& s = scopes_[scope];
    for (const auto& v : index_.frame_vars(callee)) s.vars.emplace(v, Value::null());
    if (c.kind == Callable::Kind::Method) bind(scope, "this", receiver);
    for (std::size_t i = 0; i < params.size(); ++i) bind(scope, params[i].name, args[i]);
    for (const auto& l : c.method->locals)
      if (l.init) bind(scope, l.name, Value::closure(index_.lambda_id(l.init->get()), scope));
  }
  auto r = exec(c.body(), Ctx{scope, callee});
  return r ? *r : Value::null();
}

std::optional<Value> TargetInterpreter::exec(const std::vector<Stmt>& ss, const Ctx& c) {
  for (const auto& s : ss) {
    std::optional<Value> out;
    bool done = std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign>) {
            assign(n.var, eval(n.value, c), c, s.pos);
          } else if constexpr (std::is_same_v<T, FieldAssign>) {
            Value o = eval(n.obj, c);
            if (o.kind != Value::Kind::Loc) throw Error(ErrorKind::Eval, "field update on a non-object", s.pos);
            Value v = eval(n.value, c);
            Object& obj = store_.at(o.loc, s.pos);
            if (!obj.fields.count(n.field)) throw Error(ErrorKind::Eval, obj.cls + " has no field " + n.field, s.pos);
            obj.fields[n.field] = std::move(v);
          } else if constexpr (std::is_same_v<T, Return>) {
            out = n.value ? eval(*n.value, c) : Value::null();
            return true;
          } else if constexpr (std::is_same_v<T, IfElse>) {
            Value cond = eval(n.cond, c);
            if (cond.kind != Value::Kind::Bool) throw Error(ErrorKind::Eval, "if condition is not a boolean", s.pos);
            out = exec(cond.b ? n.then_body : n.else_body, c);
            return out.has_value();
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            eval(n.expr, c);
          } else {
            printed_.push_back(render(eval(n.value, c)));
          }
          return false;
        },
        s.node);
    if (done) return out;
  }
  return std::nullopt;
}

Value TargetInterpreter::lookup(const std::string& name, const Ctx& c, Pos pos) const {
  for (std::int64_t s = c.scope; s >= 0; s = scopes_[static_cast<std::size_t>(s)].parent) {
    const auto& vars = scopes_[static_cast<std::size_t>(s)].vars;
    if (auto it = vars.find(name); it != vars.end()) return it->second;
  }
  if (int f = index_.function_id(name); f >= 0) return Value::closure(f, 0);
  throw Error(ErrorKind::Unbound, "unbound variable " + name, pos);
}

void TargetInterpreter::assign(const std::string& name, Value v, const Ctx& c, Pos pos) {
  for (std::int64_t s = c.scope; s >= 0; s = scopes_[static_cast<std::size_t>(s)].parent) {
    auto& vars = scopes_[static_cast<std::size_t>(s)].vars;
    if (vars.count(name)) {
      bind(static_cast<std::uint32_t>(s), name, std::move(v));
      return;
    }
  }
  throw Error(ErrorKind::Unbound, "assignment to undeclared variable " + name, pos);
}

Value TargetInterpreter::eval(const Expr& e, const Ctx& c) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Const>) {
          switch (n.kind) {
            case Const::Kind::Int: return Value::int_(n.i);
            case Const::Kind::Bool: return Value::bool_(n.b);
            case Const::Kind::Str: return Value::str(n.s);
            case Const::Kind::Null: return Value::null();
          }
          return Value::null();
        } else if constexpr (std::is_same_v<T, Var>) {
          return lookup(n.name, c, e.pos);
        } else if constexpr (std::is_same_v<T, This>) {
          return lookup("this", c, e.pos);
        } else if constexpr (std::is_same_v<T, New>) {
          return Value::location(instantiate(n.type.str()));
        } else if constexpr (std::is_same_v<T, FieldAccess>) {
          Value o = eval(*n.obj, c);
          if (o.kind != Value::Kind::Loc) throw Error(ErrorKind::Eval, "field read on a non-object", e.pos);
          const Object& obj = store_.at(o.loc, e.pos);
          auto it = obj.fields.find(n.field);
          if (it == obj.fields.end()) throw Error(ErrorKind::Eval, obj.cls + " has no field " + n.field, e.pos);
          return it->second;
        } else if constexpr (std::is_same_v<T, BinOp>) {
          Value a = eval(*n.lhs, c);
          Value b = eval(*n.rhs, c);
          return apply_operator(n.op, a, b, e.pos);
        } else if constexpr (std::is_same_v<T, LambdaExpr>) {
          return Value::closure(index_.lambda_id(n.lam.get()), c.scope);
        } else if constexpr (std::is_same_v<T, Apply>) {
          Value fn = eval(*n.fn, c);
          std::vector<Value> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(eval(a, c));
          if (fn.kind != Value::Kind::Closure)
            throw Error(ErrorKind::Eval, "applying a non-function value " + render(fn), e.pos);
          if (opts_.on_call) opts_.on_call(c.callable, fn.callable);
          return call_callable(fn.callable, fn.scope, Value::null(), std::move(args), e.pos);
        } else {
          Value recv = eval(*n.recv, c);
          if (recv.kind != Value::Kind::Loc) throw Error(ErrorKind::Eval, "method receiver is not an object", e.pos);
          Value arg = eval(*n.arg, c);
          const std::string& cls = store_.at(recv.loc, e.pos).cls;
          int id = index_.method_id(cls, n.method);
          if (id < 0) throw Error(ErrorKind::Eval, "class " + cls + " has no method " + n.method, e.pos);
          if (opts_.on_call) opts_.on_call(c.callable, id);
          return call_callable(id, 0, recv, {std::move(arg)}, e.pos);
        }
      },
      e.node);
}

}  // namespace fjobf::target
