#include "fjobf/source_interp.hpp"

namespace fjobf::source {

LEnv resolve_phis(const std::vector<Phi>& phis, const Label& incoming, LEnv lenv) {
  std::size_t named = 0;
  for (const auto& p : phis)
    if (p.operand_for(incoming)) ++named;
  if (named == 0) return lenv;
  std::vector<std::pair<std::string, Value>> writes;
  for (const auto& p : phis) {
    const std::string* src = p.operand_for(incoming);
    if (!src)
      throw Error(ErrorKind::MissingPhiOperand, "phi for " + p.target + " has no operand for " + incoming, p.pos);
    auto it = lenv.find(*src);
    if (it == lenv.end()) throw Error(ErrorKind::Unbound, "unbound phi operand " + *src, p.pos);
    writes.emplace_back(p.target, it->second);
  }
  for (auto& [k, v] : writes) lenv[k] = std::move(v);
  return lenv;
}

Interpreter::Interpreter(const SourceProgram& prog, InterpOptions opts) : prog_(prog), opts_(std::move(opts)) {}

Location Interpreter::instantiate(const std::string& cls, const std::map<std::string, Value>& state) {
  Object o;
  o.cls = cls;
  if (cls != "Exception") {
    const SourceClass* c = prog_.find_class(cls);
    if (!c) throw Error(ErrorKind::Eval, "unknown class " + cls);
    for (const auto& f : c->fields) o.fields[f.name] = Value::null();
  }
  for (const auto& [f, v] : state) {
    if (!o.fields.count(f)) throw Error(ErrorKind::Eval, "class " + cls + " has no field " + f);
    o.fields[f] = v;
  }
  return store_.alloc(std::move(o));
}

const SourceClass& Interpreter::class_of(Location l, Pos pos) const {
  const Object& o = store_.at(l, pos);
  const SourceClass* c = prog_.find_class(o.cls);
  if (!c) throw Error(ErrorKind::Internal, "object of unknown class " + o.cls, pos);
  return *c;
}

MethodOutcome Interpreter::call(Location receiver, const std::string& method, const Value& arg) {
  const SourceClass& c = class_of(receiver);
  const SourceMethod* m = c.find_method(method);
  if (!m) throw Error(ErrorKind::Eval, "class " + c.name + " has no method " + method);
  return eval_method(*m, Value::location(receiver), arg);
}

MethodOutcome Interpreter::eval_method(const SourceMethod& md, const Value& receiver, const Value& arg) {
  LEnv lenv;
  lenv["this"] = receiver;
  lenv[md.param.name] = arg;
  for (const auto& d : md.locals) lenv[d.name] = Value::null();
  BlockOutcome r = eval_blocks(md.body, "L0", std::move(lenv));
  if (r.raised) return {true, r.value, r.label};
  return {false, r.value, {}};
}

BlockOutcome Interpreter::eval_blocks(const std::vector<Block>& blocks, const Label& pred, LEnv lenv) {
  BlockOutcome out;
  out.env = std::move(lenv);
  out.label = pred;
  for (const auto& b : blocks) {
    out = eval_block(b, out.label, std::move(out.env));
    // An exception keeps the label of the block that raised it.
    if (out.raised) return out;
  }
  return out;
}

BlockOutcome Interpreter::eval_block(const Block& block, const Label& pred, LEnv lenv) {
  if (++steps_ > opts_.step_budget)
    throw Error(ErrorKind::ResourceLimit, "step budget of " + std::to_string(opts_.step_budget) + " exhausted",
                block.pos);
  if (opts_.on_block) opts_.on_block(block.label, pred, lenv);
  const Label& l = block.label;

  return std::visit(
      [&](const auto& s) -> BlockOutcome {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Assigns>) {
          LEnv e = eval_assignments(s.items, std::move(lenv));
          return {false, Value::null(), std::move(e), l};
        } else if constexpr (std::is_same_v<T, Return>) {
          Value v = eval_expr(s.value, lenv);
          return {false, std::move(v), std::move(lenv), l};
        } else if constexpr (std::is_same_v<T, Throw>) {
          Value v = eval_expr(s.value, lenv);
          return {true, std::move(v), std::move(lenv), l};
        } else if constexpr (std::is_same_v<T, MethodCall>) {
          Value recv = eval_expr(s.receiver, lenv);
          if (recv.kind != Value::Kind::Loc)
            throw Error(ErrorKind::Eval, "method receiver is not an object", block.pos);
          const SourceClass& c = class_of(recv.loc, block.pos);
          const SourceMethod* md = c.find_method(s.method);
          if (!md) throw Error(ErrorKind::Internal, "class " + c.name + " has no method " + s.method, block.pos);
          Value arg = eval_expr(s.arg, lenv);
          MethodOutcome r = eval_method(*md, recv, arg);
          if (r.raised) return {true, r.value, std::move(lenv), l};
          lenv[s.target] = r.value;
          return {false, Value::null(), std::move(lenv), l};
        } else if constexpr (std::is_same_v<T, IfElse>) {
          Value c = eval_expr(s.cond, lenv);
          if (c.kind != Value::Kind::Bool) throw Error(ErrorKind::Eval, "if condition is not a boolean", block.pos);
          BlockOutcome r = eval_blocks(c.b ? s.then_blocks : s.else_blocks, l, std::move(lenv));
          if (r.raised) return r;
          r.env = resolve_phis(s.join_phis, r.label, std::move(r.env));
          r.label = l;
          return r;
        } else if constexpr (std::is_same_v<T, TryCatch>) {
          BlockOutcome r = eval_blocks(s.try_blocks, l, std::move(lenv));
          if (!r.raised) {
            r.env = resolve_phis(s.join_phis, r.label, std::move(r.env));
            r.label = l;
            return r;
          }
          LEnv handler_env = resolve_phis(s.raise_phis, r.label, std::move(r.env));
          handler_env[s.exn_var] = r.value;
          BlockOutcome h = eval_blocks(s.catch_blocks, r.label, std::move(handler_env));
          if (h.raised) return h;
          h.env = resolve_phis(s.join_phis, h.label, std::move(h.env));
          h.label = l;
          return h;
        } else if constexpr (std::is_same_v<T, While>) {
          Label from = pred;
          bool first = true;
          while (true) {
            if (!first && ++steps_ > opts_.step_budget)
              throw Error(ErrorKind::ResourceLimit,
                          "step budget of " + std::to_string(opts_.step_budget) + " exhausted", block.pos);
            if (!first && opts_.on_block) opts_.on_block(l, from, lenv);
            first = false;
            lenv = resolve_phis(s.phis, from, std::move(lenv));
            Value c = eval_expr(s.cond, lenv);
            if (c.kind != Value::Kind::Bool)
              throw Error(ErrorKind::Eval, "while condition is not a boolean", block.pos);
            if (!c.b) return {false, Value::null(), std::move(lenv), l};
            BlockOutcome r = eval_blocks(s.body, l, std::move(lenv));
            if (r.raised) return r;
            from = r.label;
            lenv = std::move(r.env);
          }
        }
      },
      block.body);
}

LEnv Interpreter::eval_assignments(const std::vector<Assignment>& as, LEnv lenv) {
  for (const auto& a : as) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarAssign>) {
            Value v = eval_expr(n.value, lenv);
            lenv[n.var] = std::move(v);
          } else if constexpr (std::is_same_v<T, FieldAssign>) {
            Value o = eval_expr(n.obj, lenv);
            if (o.kind != Value::Kind::Loc) throw Error(ErrorKind::Eval, "field update on a non-object", a.pos);
            Value v = eval_expr(n.value, lenv);
            Object& obj = store_.at(o.loc, a.pos);
            if (!obj.fields.count(n.field))
              throw Error(ErrorKind::Internal, obj.cls + " has no field " + n.field, a.pos);
            obj.fields[n.field] = std::move(v);
          } else {
            printed_.push_back(render(eval_expr(n.value, lenv)));
          }
        },
        a.node);
  }
  return lenv;
}

Value Interpreter::eval_expr(const Expr& e, const LEnv& lenv) {
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
          auto it = lenv.find(n.name);
          if (it == lenv.end()) throw Error(ErrorKind::Unbound, "unbound variable " + n.name, e.pos);
          return it->second;
        } else if constexpr (std::is_same_v<T, This>) {
          auto it = lenv.find("this");
          if (it == lenv.end()) throw Error(ErrorKind::Unbound, "this is unbound", e.pos);
          return it->second;
        } else if constexpr (std::is_same_v<T, FieldAccess>) {
          Value o = eval_expr(*n.obj, lenv);
          if (o.kind != Value::Kind::Loc) throw Error(ErrorKind::Eval, "field read on a non-object", e.pos);
          const Object& obj = store_.at(o.loc, e.pos);
          auto it = obj.fields.find(n.field);
          if (it == obj.fields.end()) throw Error(ErrorKind::Internal, obj.cls + " has no field " + n.field, e.pos);
          return it->second;
        } else if constexpr (std::is_same_v<T, New>) {
          return Value::location(instantiate(n.type.str()));
        } else {
          Value a = eval_expr(*n.lhs, lenv);
          Value b = eval_expr(*n.rhs, lenv);
          return apply_operator(n.op, a, b, e.pos);
        }
      },
      e.node);
}

}  // namespace fjobf::source
