#include "fjobf/target_ast.hpp"

#include <functional>
#include <set>

namespace fjobf::target {

FunType FunType::arrow(FunType from, FunType to) {
  FunType t;
  t.from_ = std::make_shared<const FunType>(std::move(from));
  t.to_ = std::make_shared<const FunType>(std::move(to));
  return t;
}

bool FunType::operator==(const FunType& o) const {
  if (is_arrow() != o.is_arrow()) return false;
  if (!is_arrow()) return base_ == o.base_;
  return from() == o.from() && to() == o.to();
}

FunType base_type(TypeName t) { return FunType(std::move(t)); }
FunType void_type() { return FunType(TypeName::void_()); }
FunType exn_cont_type() { return FunType::arrow(TypeName::exception(), void_type()); }
FunType nm_cont_type() { return FunType::arrow(void_type(), void_type()); }
FunType cps_func_type() { return FunType::arrow(exn_cont_type(), FunType::arrow(nm_cont_type(), void_type())); }

std::vector<std::pair<std::string, FunType>> standard_aliases() {
  return {{"ExCont", exn_cont_type()}, {"NmCont", nm_cont_type()}, {"CpsFunc", cps_func_type()}};
}

bool Apply::operator==(const Apply& o) const { return fn == o.fn && args == o.args; }
bool LambdaExpr::operator==(const LambdaExpr& o) const { return lam == o.lam; }
bool IfElse::operator==(const IfElse& o) const {
  return cond == o.cond && then_body == o.then_body && else_body == o.else_body;
}

const TargetMethod* TargetClass::find_method(std::string_view n) const {
  for (const auto& m : methods)
    if (m.name == n) return &m;
  return nullptr;
}

const TargetClass* TargetProgram::find_class(std::string_view n) const {
  for (const auto& c : classes)
    if (c.name == n) return &c;
  return nullptr;
}

const TargetMethod* TargetProgram::find_function(std::string_view n) const {
  for (const auto& f : functions)
    if (f.name == n) return &f;
  return nullptr;
}

Expr var(std::string n) { return Expr{Var{std::move(n)}, {}}; }
Expr apply(Expr fn, std::vector<Expr> args) { return Expr{Apply{Box<Expr>(std::move(fn)), std::move(args)}, {}}; }
Expr lambda_expr(Lambda l) { return Expr{LambdaExpr{Box<Lambda>(std::move(l))}, {}}; }
Stmt stmt(decltype(Stmt::node) n) { return Stmt{std::move(n), {}}; }
Stmt ret(Expr e) { return stmt(Return{std::move(e)}); }
Stmt ret_void() { return stmt(Return{}); }
Stmt assign(std::string v, Expr e) { return stmt(Assign{std::nullopt, std::move(v), std::move(e)}); }

// ---- index -------------------------------------------------------------------

ProgramIndex::ProgramIndex(const TargetProgram& p) : prog_(p) {
  for (const auto& c : p.classes)
    for (const auto& m : c.methods) add_top(Callable::Kind::Method, c.name, m);
  for (const auto& f : p.functions) add_top(Callable::Kind::Function, {}, f);

  std::map<std::string, int> name_count;
  for (const auto& c : callables_)
    if (!c.lambda) name_count[c.method->name]++;
  for (auto& c : callables_) {
    if (c.lambda) continue;
    c.display = c.method->name;
    if (name_count[c.method->name] > 1 && c.kind == Callable::Kind::Method) c.display = c.cls + "." + c.method->name;
  }
}

void ProgramIndex::add_top(Callable::Kind kind, const std::string& cls, const TargetMethod& m) {
  int id = size();
  Callable c;
  c.kind = kind;
  c.cls = cls;
  c.method = &m;
  c.top = id;
  callables_.push_back(c);
  if (kind == Callable::Kind::Function) functions_.emplace(m.name, id);
  else methods_.emplace(std::make_pair(cls, m.name), id);

  auto& vars = frame_vars_[id];
  std::set<std::string> seen;
  auto add = [&](const std::string& n) {
    if (seen.insert(n).second) vars.push_back(n);
  };
  if (kind == Callable::Kind::Method) add("this");
  for (const auto& prm : m.params) add(prm.name);
  for (const auto& l : m.locals) add(l.name);
  // `K X = E` declarations anywhere below, including nested lambda bodies.
  std::function<void(const std::vector<Stmt>&)> decls = [&](const std::vector<Stmt>& ss) {
    std::function<void(const Expr&)> in_expr = [&](const Expr& e) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LambdaExpr>) {
              decls(n.lam->body);
            } else if constexpr (std::is_same_v<T, Apply>) {
              in_expr(*n.fn);
              for (const auto& a : n.args) in_expr(a);
            } else if constexpr (std::is_same_v<T, MethodCall>) {
              in_expr(*n.recv);
              in_expr(*n.arg);
            } else if constexpr (std::is_same_v<T, FieldAccess>) {
              in_expr(*n.obj);
            } else if constexpr (std::is_same_v<T, BinOp>) {
              in_expr(*n.lhs);
              in_expr(*n.rhs);
            }
          },
          e.node);
    };
    for (const auto& s : ss) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>) {
              if (n.decl) add(n.var);
              in_expr(n.value);
            } else if constexpr (std::is_same_v<T, FieldAssign>) {
              in_expr(n.obj);
              in_expr(n.value);
            } else if constexpr (std::is_same_v<T, Return>) {
              if (n.value) in_expr(*n.value);
            } else if constexpr (std::is_same_v<T, IfElse>) {
              in_expr(n.cond);
              decls(n.then_body);
              decls(n.else_body);
            } else if constexpr (std::is_same_v<T, ExprStmt>) {
              in_expr(n.expr);
            } else {
              in_expr(n.value);
            }
          },
          s.node);
    }
  };
  for (const auto& l : m.locals)
    if (l.init) decls((*l.init)->body);
  decls(m.body);

  for (const auto& l : m.locals)
    if (l.init) add_lambda(**l.init, id, id);
  scan_stmts(m.body, id, id);
}

void ProgramIndex::add_lambda(const Lambda& l, int parent, int top) {
  int id = size();
  Callable c;
  c.kind = Callable::Kind::Lambda;
  c.lambda = &l;
  c.parent = parent;
  c.top = top;
  c.display = l.id.display.empty() ? "lambda#" + std::to_string(lambdas_.size()) : l.id.display;
  callables_.push_back(c);
  by_lambda_.emplace(&l, id);
  lambdas_.push_back(id);
  scan_stmts(l.body, id, top);
}

void ProgramIndex::scan_stmts(const std::vector<Stmt>& ss, int parent, int top) {
  for (const auto& s : ss) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign>) {
            scan_expr(n.value, parent, top);
          } else if constexpr (std::is_same_v<T, FieldAssign>) {
            scan_expr(n.obj, parent, top);
            scan_expr(n.value, parent, top);
          } else if constexpr (std::is_same_v<T, Return>) {
            if (n.value) scan_expr(*n.value, parent, top);
          } else if constexpr (std::is_same_v<T, IfElse>) {
            scan_expr(n.cond, parent, top);
            scan_stmts(n.then_body, parent, top);
            scan_stmts(n.else_body, parent, top);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            scan_expr(n.expr, parent, top);
          } else {
            scan_expr(n.value, parent, top);
          }
        },
        s.node);
  }
}

void ProgramIndex::scan_expr(const Expr& e, int parent, int top) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LambdaExpr>) {
          add_lambda(*n.lam, parent, top);
        } else if constexpr (std::is_same_v<T, Apply>) {
          scan_expr(*n.fn, parent, top);
          for (const auto& a : n.args) scan_expr(a, parent, top);
        } else if constexpr (std::is_same_v<T, MethodCall>) {
          scan_expr(*n.recv, parent, top);
          scan_expr(*n.arg, parent, top);
        } else if constexpr (std::is_same_v<T, FieldAccess>) {
          scan_expr(*n.obj, parent, top);
        } else if constexpr (std::is_same_v<T, BinOp>) {
          scan_expr(*n.lhs, parent, top);
          scan_expr(*n.rhs, parent, top);
        }
      },
      e.node);
}

int ProgramIndex::lambda_id(const Lambda* l) const {
  auto it = by_lambda_.find(l);
  if (it == by_lambda_.end()) throw Error(ErrorKind::Internal, "lambda not in program index");
  return it->second;
}

int ProgramIndex::function_id(std::string_view name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? -1 : it->second;
}

int ProgramIndex::method_id(std::string_view cls, std::string_view name) const {
  auto it = methods_.find({std::string(cls), std::string(name)});
  return it == methods_.end() ? -1 : it->second;
}

std::vector<int> ProgramIndex::methods_named(std::string_view name) const {
  std::vector<int> out;
  for (const auto& [k, id] : methods_)
    if (k.second == name) out.push_back(id);
  return out;
}

int ProgramIndex::find_by_display(std::string_view display) const {
  for (int i = 0; i < size(); ++i)
    if (callables_[static_cast<std::size_t>(i)].display == display) return i;
  return -1;
}

}  // namespace fjobf::target
