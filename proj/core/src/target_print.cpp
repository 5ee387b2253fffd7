#include <algorithm>
#include <sstream>

#include "fjobf/target_ast.hpp"

namespace fjobf::target {
namespace {

using Aliases = std::vector<std::pair<std::string, FunType>>;

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

// Larger aliases are tried first so CpsFunc wins over its parts.
Aliases by_size(Aliases a) {
  std::stable_sort(a.begin(), a.end(), [](const auto& x, const auto& y) { return x.second.arity() > y.second.arity(); });
  return a;
}

std::string type_str(const FunType& t, const Aliases& aliases) {
  for (const auto& [name, ty] : aliases)
    if (ty.is_arrow() && ty == t) return name;
  if (!t.is_arrow()) return t.base().str();
  std::string from = type_str(t.from(), aliases);
  bool aliased = from.find(' ') == std::string::npos;
  if (t.from().is_arrow() && !aliased) from = "(" + from + ")";
  return from + " => " + type_str(t.to(), aliases);
}

int prec(const Expr& e) {
  if (std::holds_alternative<LambdaExpr>(e.node)) return 0;
  if (auto* b = std::get_if<BinOp>(&e.node)) return (b->op == "+" || b->op == "-") ? 2 : 1;
  return 3;
}

class Printer {
 public:
  Printer(std::ostream& os, Aliases aliases) : os_(os), aliases_(by_size(std::move(aliases))) {}

  void program(const TargetProgram& p) {
    // Each alias is written in terms of the ones before it.
    for (std::size_t i = 0; i < p.aliases.size(); ++i) {
      Aliases earlier = by_size(Aliases(p.aliases.begin(), p.aliases.begin() + static_cast<std::ptrdiff_t>(i)));
      os_ << "type " << p.aliases[i].first << " = " << type_str(p.aliases[i].second, earlier) << ";\n";
    }
    for (const auto& c : p.classes) klass(c);
    for (const auto& f : p.functions) method(f, 0);
  }

  void method(const TargetMethod& m, int ind) {
    indent(ind);
    os_ << type(m.ret) << ' ' << m.name << '(';
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (i) os_ << ", ";
      param(m.params[i]);
    }
    os_ << ") {\n";
    for (const auto& l : m.locals) {
      indent(ind + 2);
      os_ << type(l.type) << ' ' << l.name;
      if (l.init) {
        os_ << " = ";
        lambda(**l.init, ind + 2);
      }
      os_ << ";\n";
    }
    stmts(m.body, ind + 2);
    indent(ind);
    os_ << "}\n";
  }

  void expr(const Expr& e, int ind) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Const>) {
            switch (n.kind) {
              case Const::Kind::Int: os_ << n.i; break;
              case Const::Kind::Bool: os_ << (n.b ? "true" : "false"); break;
              case Const::Kind::Str: os_ << quote(n.s); break;
              case Const::Kind::Null: os_ << "null"; break;
            }
          } else if constexpr (std::is_same_v<T, Var>) {
            os_ << n.name;
          } else if constexpr (std::is_same_v<T, This>) {
            os_ << "this";
          } else if constexpr (std::is_same_v<T, New>) {
            os_ << "new " << n.type.str() << "()";
          } else if constexpr (std::is_same_v<T, Apply>) {
            operand(*n.fn, 3, ind);
            os_ << '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
              if (i) os_ << ", ";
              expr(n.args[i], ind);
            }
            os_ << ')';
          } else if constexpr (std::is_same_v<T, MethodCall>) {
            operand(*n.recv, 3, ind);
            os_ << '.' << n.method << '(';
            expr(*n.arg, ind);
            os_ << ')';
          } else if constexpr (std::is_same_v<T, FieldAccess>) {
            operand(*n.obj, 3, ind);
            os_ << '.' << n.field;
          } else if constexpr (std::is_same_v<T, BinOp>) {
            int p = prec(e);
            operand(*n.lhs, p, ind);
            os_ << ' ' << n.op << ' ';
            operand(*n.rhs, p + 1, ind);
          } else if constexpr (std::is_same_v<T, LambdaExpr>) {
            lambda(*n.lam, ind);
          }
        },
        e.node);
  }

 private:
  std::ostream& os_;
  Aliases aliases_;

  std::string type(const FunType& t) const { return type_str(t, aliases_); }
  void indent(int n) { os_ << std::string(static_cast<std::size_t>(n), ' '); }

  void param(const Param& p) {
    if (p.type) os_ << type(*p.type) << ' ';
    os_ << p.name;
  }

  void operand(const Expr& e, int min_prec, int ind) {
    if (prec(e) < min_prec) {
      os_ << '(';
      expr(e, ind);
      os_ << ')';
    } else {
      expr(e, ind);
    }
  }

  void klass(const TargetClass& c) {
    os_ << "class " << c.name << " {\n";
    for (const auto& f : c.fields) os_ << "  " << f.type.str() << ' ' << f.name << ";\n";
    for (const auto& m : c.methods) method(m, 2);
    os_ << "}\n";
  }

  void lambda(const Lambda& l, int ind) {
    if (l.params.size() == 1 && !l.params[0].type) {
      os_ << l.params[0].name;
    } else {
      os_ << '(';
      for (std::size_t i = 0; i < l.params.size(); ++i) {
        if (i) os_ << ", ";
        param(l.params[i]);
      }
      os_ << ')';
    }
    os_ << " -> ";
    if (l.body.size() == 1) {
      if (auto* r = std::get_if<Return>(&l.body[0].node); r && r->value &&
                                                          std::holds_alternative<LambdaExpr>(r->value->node)) {
        expr(*r->value, ind);
        return;
      }
    }
    if (l.body.empty()) {
      os_ << "{ }";
      return;
    }
    os_ << "{\n";
    stmts(l.body, ind + 2);
    indent(ind);
    os_ << '}';
  }

  void stmts(const std::vector<Stmt>& ss, int ind) {
    for (const auto& s : ss) statement(s, ind);
  }

  void statement(const Stmt& s, int ind) {
    indent(ind);
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign>) {
            if (n.decl) os_ << type(*n.decl) << ' ';
            os_ << n.var << " = ";
            expr(n.value, ind);
            os_ << ";\n";
          } else if constexpr (std::is_same_v<T, FieldAssign>) {
            operand(n.obj, 3, ind);
            os_ << '.' << n.field << " = ";
            expr(n.value, ind);
            os_ << ";\n";
          } else if constexpr (std::is_same_v<T, Return>) {
            os_ << "return";
            if (n.value) {
              os_ << ' ';
              expr(*n.value, ind);
            }
            os_ << ";\n";
          } else if constexpr (std::is_same_v<T, IfElse>) {
            os_ << "if (";
            expr(n.cond, ind);
            os_ << ") {\n";
            stmts(n.then_body, ind + 2);
            indent(ind);
            os_ << "} else {\n";
            stmts(n.else_body, ind + 2);
            indent(ind);
            os_ << "}\n";
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            expr(n.expr, ind);
            os_ << ";\n";
          } else {
            os_ << "System.out.println(";
            expr(n.value, ind);
            os_ << ");\n";
          }
        },
        s.node);
  }
};

}  // namespace

std::string print_type(const FunType& t, const std::vector<std::pair<std::string, FunType>>& aliases) {
  return type_str(t, by_size(aliases));
}

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  Printer(os, {}).expr(e, 0);
  return os.str();
}

std::string print_method(const TargetMethod& m, const std::vector<std::pair<std::string, FunType>>& aliases) {
  std::ostringstream os;
  Printer(os, aliases).method(m, 0);
  return os.str();
}

std::string print_target(const TargetProgram& p) {
  std::ostringstream os;
  Printer(os, p.aliases).program(p);
  return os.str();
}

TargetProgram canonicalize(const TargetProgram& p) { return parse_target(print_target(p)); }

}  // namespace fjobf::target
