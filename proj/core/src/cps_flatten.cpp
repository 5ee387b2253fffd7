#include <set>

#include "fjobf/cps.hpp"

namespace fjobf::cps {

namespace t = fjobf::target;

namespace {

const std::size_t kMaxNameLength = 40;
const std::size_t kShortName = 20;

t::FunType object_type() { return t::base_type(source::TypeName::class_("Object")); }

void names_in(const std::vector<t::Stmt>& ss, std::set<std::string>& out);

void names_in(const t::Lambda& l, std::set<std::string>& out) {
  for (const auto& p : l.params) out.insert(p.name);
  names_in(l.body, out);
}

void names_in(const t::Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, t::Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, t::LambdaExpr>) {
          names_in(*n.lam, out);
        } else if constexpr (std::is_same_v<T, t::Apply>) {
          names_in(*n.fn, out);
          for (const auto& a : n.args) names_in(a, out);
        } else if constexpr (std::is_same_v<T, t::MethodCall>) {
          names_in(*n.recv, out);
          names_in(*n.arg, out);
        } else if constexpr (std::is_same_v<T, t::FieldAccess>) {
          names_in(*n.obj, out);
        } else if constexpr (std::is_same_v<T, t::BinOp>) {
          names_in(*n.lhs, out);
          names_in(*n.rhs, out);
        }
      },
      e.node);
}

void names_in(const std::vector<t::Stmt>& ss, std::set<std::string>& out) {
  for (const auto& s : ss) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, t::Assign>) {
            out.insert(n.var);
            names_in(n.value, out);
          } else if constexpr (std::is_same_v<T, t::FieldAssign>) {
            names_in(n.obj, out);
            names_in(n.value, out);
          } else if constexpr (std::is_same_v<T, t::Return>) {
            if (n.value) names_in(*n.value, out);
          } else if constexpr (std::is_same_v<T, t::IfElse>) {
            names_in(n.cond, out);
            names_in(n.then_body, out);
            names_in(n.else_body, out);
          } else if constexpr (std::is_same_v<T, t::ExprStmt>) {
            names_in(n.expr, out);
          } else {
            names_in(n.value, out);
          }
        },
        s.node);
  }
}

class Flattener {
 public:
  Flattener(const t::TargetMethod& md, const std::vector<t::TargetMethod>& functions,
            const std::map<std::string, t::FunType>& method_types)
      : md_(md), method_types_(method_types) {
    for (const auto& f : functions) {
      functions_[f.name] = f.ret;
      used_.insert(f.name);
    }
    used_.insert("this");
    for (const auto& p : md.params) {
      used_.insert(p.name);
      if (p.type) types_[p.name] = *p.type;
    }
    for (const auto& l : md.locals) {
      used_.insert(l.name);
      types_[l.name] = l.type;
      if (l.init) names_in(**l.init, used_);
    }
    names_in(md.body, used_);
  }

  t::TargetMethod run() {
    t::TargetMethod out = md_;
    for (auto& l : out.locals)
      if (l.init) **l.init = lambda(**l.init);
    out.body = stmts(md_.body, true);
    for (auto& l : extra_) out.locals.push_back(std::move(l));
    return out;
  }

 private:
  const t::TargetMethod& md_;
  const std::map<std::string, t::FunType>& method_types_;
  std::map<std::string, t::FunType> functions_;
  std::map<std::string, t::FunType> types_;
  std::set<std::string> used_;
  std::vector<t::LocalDecl> extra_;
  std::map<std::string, int> counters_;

  std::string fresh(std::string base) {
    if (base.size() > kMaxNameLength) base = base.substr(0, kMaxNameLength);
    std::string n = base;
    for (int i = 2; used_.count(n); ++i) n = base + "_" + std::to_string(i);
    used_.insert(n);
    return n;
  }

  t::FunType type_of(const t::Expr& e) {
    return std::visit(
        [&](const auto& n) -> t::FunType {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, t::Const>) {
            switch (n.kind) {
              case t::Const::Kind::Int: return t::base_type(source::TypeName::int_());
              case t::Const::Kind::Bool: return t::base_type(source::TypeName::bool_());
              default: return object_type();
            }
          } else if constexpr (std::is_same_v<T, t::Var>) {
            if (auto it = types_.find(n.name); it != types_.end()) return it->second;
            return object_type();
          } else if constexpr (std::is_same_v<T, t::Apply>) {
            if (auto* v = std::get_if<t::Var>(&n.fn->node); v && !types_.count(v->name))
              if (auto it = functions_.find(v->name); it != functions_.end()) return it->second;
            t::FunType ft = type_of(*n.fn);
            return ft.is_arrow() ? ft.to() : object_type();
          } else if constexpr (std::is_same_v<T, t::MethodCall>) {
            if (auto it = method_types_.find(n.method); it != method_types_.end()) return it->second;
            return object_type();
          } else if constexpr (std::is_same_v<T, t::BinOp>) {
            if (n.op == "+" || n.op == "-") return t::base_type(source::TypeName::int_());
            return t::base_type(source::TypeName::bool_());
          } else if constexpr (std::is_same_v<T, t::New>) {
            return t::base_type(n.type);
          } else if constexpr (std::is_same_v<T, t::LambdaExpr>) {
            const t::Lambda& l = *n.lam;
            for (const auto& p : l.params)
              if (p.type) types_.emplace(p.name, *p.type);
            t::FunType ret = t::void_type();
            for (const auto& s : l.body)
              if (auto* r = std::get_if<t::Return>(&s.node); r && r->value) ret = type_of(*r->value);
            if (l.params.empty()) return t::FunType::arrow(t::void_type(), ret);
            for (auto it = l.params.rbegin(); it != l.params.rend(); ++it)
              ret = t::FunType::arrow(it->type ? *it->type : object_type(), ret);
            return ret;
          } else {
            return object_type();
          }
        },
        e.node);
  }

  t::Lambda lambda(const t::Lambda& l) {
    t::Lambda out = l;
    for (const auto& p : l.params)
      if (p.type) types_.emplace(p.name, *p.type);
    out.body = stmts(l.body, false);
    return out;
  }

  std::vector<t::Stmt> stmts(const std::vector<t::Stmt>& ss, bool method_level) {
    std::vector<t::Stmt> out;
    for (const auto& s : ss) {
      std::vector<t::Stmt> pre;
      t::Stmt res = std::visit(
          [&](const auto& n) -> t::Stmt {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t::Assign>) {
              t::Assign a{n.decl, n.var, root(n.value, pre, method_level, n.var)};
              if (n.decl) types_.emplace(n.var, *n.decl);
              return {std::move(a), s.pos};
            } else if constexpr (std::is_same_v<T, t::FieldAssign>) {
              t::Expr obj = atom(n.obj, pre, method_level, n.field);
              return {t::FieldAssign{std::move(obj), n.field, root(n.value, pre, method_level, n.field)}, s.pos};
            } else if constexpr (std::is_same_v<T, t::Return>) {
              if (!n.value) return s;
              return {t::Return{root(*n.value, pre, method_level, "ret")}, s.pos};
            } else if constexpr (std::is_same_v<T, t::IfElse>) {
              t::Expr c = root(n.cond, pre, method_level, "cond");
              return {t::IfElse{std::move(c), stmts(n.then_body, method_level), stmts(n.else_body, method_level)},
                      s.pos};
            } else if constexpr (std::is_same_v<T, t::ExprStmt>) {
              return {t::ExprStmt{root(n.expr, pre, method_level, "val")}, s.pos};
            } else {
              return {t::Print{root(n.value, pre, method_level, "msg")}, s.pos};
            }
          },
          s.node);
      for (auto& p : pre) out.push_back(std::move(p));
      out.push_back(std::move(res));
    }
    return out;
  }

  static std::string label_of(const t::Expr& e, std::size_t i) {
    if (auto* v = std::get_if<t::Var>(&e.node)) return v->name;
    return std::to_string(i);
  }

  // The expression at the top of a statement: one application whose
  // function and arguments are atomic.
  t::Expr root(const t::Expr& e, std::vector<t::Stmt>& pre, bool ml, const std::string& hint) {
    return std::visit(
        [&](const auto& n) -> t::Expr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, t::Apply>) {
            t::Expr fn = std::holds_alternative<t::Var>(n.fn->node) ? *n.fn : atom(*n.fn, pre, ml, hint);
            std::string fname = label_of(fn, 0);
            std::vector<t::Expr> args;
            for (std::size_t i = 0; i < n.args.size(); ++i)
              args.push_back(atom(n.args[i], pre, ml, fname + "_arg" + std::to_string(i)));
            return t::Expr{t::Apply{Box<t::Expr>(std::move(fn)), std::move(args)}, e.pos};
          } else if constexpr (std::is_same_v<T, t::MethodCall>) {
            t::Expr recv = atom(*n.recv, pre, ml, n.method + "_recv");
            t::Expr arg = atom(*n.arg, pre, ml, n.method + "_arg");
            return t::Expr{t::MethodCall{Box<t::Expr>(std::move(recv)), n.method, Box<t::Expr>(std::move(arg))},
                           e.pos};
          } else if constexpr (std::is_same_v<T, t::LambdaExpr>) {
            return t::lambda_expr(lambda(*n.lam));
          } else {
            return atom(e, pre, ml, hint);
          }
        },
        e.node);
  }

  // `first_raise` for short all-variable applications, else `seq_3`.
  std::string app_name(const t::Expr& e) {
    std::string fn = "tmp";
    std::string n;
    bool simple = true;
    if (auto* a = std::get_if<t::Apply>(&e.node)) {
      fn = label_of(*a->fn, 0);
      n = fn;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        simple &= std::holds_alternative<t::Var>(a->args[i].node);
        n += "_" + label_of(a->args[i], i);
      }
    } else if (auto* m = std::get_if<t::MethodCall>(&e.node)) {
      fn = m->method;
      simple = std::holds_alternative<t::Var>(m->arg->node);
      n = fn + "_" + label_of(*m->arg, 0);
    }
    if (simple && n.size() <= kShortName) return n;
    return fn + "_" + std::to_string(++counters_[fn]);
  }

  t::Expr hoist(t::Expr value, std::vector<t::Stmt>& pre, bool ml, const std::string& base) {
    t::FunType ty = type_of(value);
    std::string name = fresh(base);
    types_.emplace(name, ty);
    if (!ml) {
      pre.push_back(t::stmt(t::Assign{ty, name, std::move(value)}));
    } else if (auto* l = std::get_if<t::LambdaExpr>(&value.node)) {
      extra_.push_back({ty, name, std::move(l->lam)});
    } else {
      extra_.push_back({ty, name, std::nullopt});
      pre.push_back(t::assign(name, std::move(value)));
    }
    return t::var(name);
  }

  t::Expr atom(const t::Expr& e, std::vector<t::Stmt>& pre, bool ml, const std::string& hint) {
    return std::visit(
        [&](const auto& n) -> t::Expr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, t::Apply> || std::is_same_v<T, t::MethodCall>) {
            t::Expr r = root(e, pre, ml, hint);
            std::string base = app_name(r);
            return hoist(std::move(r), pre, ml, base);
          } else if constexpr (std::is_same_v<T, t::LambdaExpr>) {
            return hoist(t::lambda_expr(lambda(*n.lam)), pre, ml, hint);
          } else if constexpr (std::is_same_v<T, t::FieldAccess>) {
            return t::Expr{t::FieldAccess{Box<t::Expr>(atom(*n.obj, pre, ml, hint)), n.field}, e.pos};
          } else if constexpr (std::is_same_v<T, t::BinOp>) {
            t::Expr l = atom(*n.lhs, pre, ml, hint);
            t::Expr r = atom(*n.rhs, pre, ml, hint);
            return t::Expr{t::BinOp{n.op, Box<t::Expr>(std::move(l)), Box<t::Expr>(std::move(r))}, e.pos};
          } else {
            return e;
          }
        },
        e.node);
  }
};

}  // namespace

t::TargetMethod flatten(const t::TargetMethod& md, const std::vector<t::TargetMethod>& functions) {
  std::map<std::string, t::FunType> none;
  return Flattener(md, functions, none).run();
}

t::TargetProgram flatten_program(const t::TargetProgram& p) {
  std::map<std::string, t::FunType> method_types;
  for (const auto& c : p.classes)
    for (const auto& m : c.methods) method_types.emplace(m.name, m.ret);
  const std::vector<t::TargetMethod> functions = p.functions.empty() ? emit_prelude() : p.functions;
  t::TargetProgram out = p;
  for (auto& c : out.classes)
    for (auto& m : c.methods) m = Flattener(m, functions, method_types).run();
  return out;
}

}  // namespace fjobf::cps
