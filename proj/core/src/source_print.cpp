#include <sstream>

#include "fjobf/source_ast.hpp"

namespace fjobf::source {
namespace {

int precedence(const std::string& op) { return (op == "+" || op == "-") ? 2 : 1; }

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

void expr(std::ostream& os, const Expr& e);

void operand(std::ostream& os, const Expr& e, int min_prec) {
  auto* b = std::get_if<BinOp>(&e.node);
  if (b && precedence(b->op) < min_prec) {
    os << '(';
    expr(os, e);
    os << ')';
  } else {
    expr(os, e);
  }
}

void expr(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Const>) {
          switch (n.kind) {
            case Const::Kind::Int: os << n.i; break;
            case Const::Kind::Bool: os << (n.b ? "true" : "false"); break;
            case Const::Kind::Str: os << quote(n.s); break;
            case Const::Kind::Null: os << "null"; break;
          }
        } else if constexpr (std::is_same_v<T, Var>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, This>) {
          os << "this";
        } else if constexpr (std::is_same_v<T, New>) {
          os << "new " << n.type.str() << "()";
        } else if constexpr (std::is_same_v<T, FieldAccess>) {
          operand(os, *n.obj, 3);
          os << '.' << n.field;
        } else if constexpr (std::is_same_v<T, BinOp>) {
          int p = precedence(n.op);
          operand(os, *n.lhs, p);
          os << ' ' << n.op << ' ';
          operand(os, *n.rhs, p + 1);
        }
      },
      e.node);
}

void phis(std::ostream& os, const std::vector<Phi>& ps) {
  os << "join {";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) os << "; ";
    os << ps[i].target << " = phi(";
    for (std::size_t j = 0; j < ps[i].operands.size(); ++j) {
      if (j) os << ", ";
      os << ps[i].operands[j].first << ':' << ps[i].operands[j].second;
    }
    os << ')';
  }
  os << '}';
}

class Printer {
 public:
  explicit Printer(std::ostream& os) : os_(os) {}

  void program(const SourceProgram& p) {
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
      if (i) os_ << '\n';
      klass(p.classes[i]);
    }
  }

 private:
  std::ostream& os_;

  void indent(int n) { os_ << std::string(static_cast<std::size_t>(n), ' '); }

  void klass(const SourceClass& c) {
    os_ << "class " << c.name << " {\n";
    for (const auto& f : c.fields) {
      indent(2);
      os_ << f.type.str() << ' ' << f.name << ";\n";
    }
    for (const auto& m : c.methods) method(m);
    os_ << "}\n";
  }

  void method(const SourceMethod& m) {
    indent(2);
    os_ << m.ret.str() << ' ' << m.name << '(' << m.param.type.str() << ' ' << m.param.name << ") {\n";
    for (const auto& v : m.locals) {
      indent(4);
      os_ << v.type.str() << ' ' << v.name << ";\n";
    }
    blocks(m.body, 4);
    indent(2);
    os_ << "}\n";
  }

  void blocks(const std::vector<Block>& bs, int ind) {
    for (const auto& b : bs) block(b, ind);
  }

  void assignment(const Assignment& a) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarAssign>) {
            os_ << n.var << " = ";
            expr(os_, n.value);
          } else if constexpr (std::is_same_v<T, FieldAssign>) {
            operand(os_, n.obj, 3);
            os_ << '.' << n.field << " = ";
            expr(os_, n.value);
          } else {
            os_ << "System.out.println(";
            expr(os_, n.value);
            os_ << ')';
          }
        },
        a.node);
    os_ << ";";
  }

  void block(const Block& b, int ind) {
    indent(ind);
    os_ << b.label << ": ";
    int body_ind = ind + static_cast<int>(b.label.size()) + 2;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Assigns>) {
            if (s.items.empty()) {
              os_ << "{ }\n";
              return;
            }
            for (std::size_t i = 0; i < s.items.size(); ++i) {
              if (i) indent(body_ind);
              assignment(s.items[i]);
              os_ << '\n';
            }
          } else if constexpr (std::is_same_v<T, Return>) {
            os_ << "return ";
            expr(os_, s.value);
            os_ << ";\n";
          } else if constexpr (std::is_same_v<T, Throw>) {
            os_ << "throw ";
            expr(os_, s.value);
            os_ << ";\n";
          } else if constexpr (std::is_same_v<T, MethodCall>) {
            os_ << s.target << " = ";
            operand(os_, s.receiver, 3);
            os_ << '.' << s.method << '(';
            expr(os_, s.arg);
            os_ << ");\n";
          } else if constexpr (std::is_same_v<T, TryCatch>) {
            os_ << "try {\n";
            blocks(s.try_blocks, ind + 4);
            indent(ind);
            os_ << "} ";
            phis(os_, s.raise_phis);
            os_ << " catch (" << s.exn_type.str() << ' ' << s.exn_var << ") {\n";
            blocks(s.catch_blocks, ind + 4);
            indent(ind);
            os_ << "} ";
            phis(os_, s.join_phis);
            os_ << '\n';
          } else if constexpr (std::is_same_v<T, While>) {
            phis(os_, s.phis);
            os_ << " while (";
            expr(os_, s.cond);
            os_ << ") {\n";
            blocks(s.body, ind + 4);
            indent(ind);
            os_ << "}\n";
          } else if constexpr (std::is_same_v<T, IfElse>) {
            os_ << "if (";
            expr(os_, s.cond);
            os_ << ") {\n";
            blocks(s.then_blocks, ind + 4);
            indent(ind);
            os_ << "} else {\n";
            blocks(s.else_blocks, ind + 4);
            indent(ind);
            os_ << "} ";
            phis(os_, s.join_phis);
            os_ << '\n';
          }
        },
        b.body);
  }
};

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  expr(os, e);
  return os.str();
}

std::string print_source(const SourceProgram& p) {
  std::ostringstream os;
  Printer(os).program(p);
  return os.str();
}

}  // namespace fjobf::source
