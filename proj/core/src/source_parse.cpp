#include <set>

#include "fjobf/lexer.hpp"
#include "fjobf/source_ast.hpp"

namespace fjobf::source {
namespace {

struct CallParts {
  Expr receiver;
  std::string method;
  Expr arg;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : ts_(tokenize(text)) {}

  SourceProgram program() {
    SourceProgram p;
    while (!ts_.at_end()) {
      if (ts_.accept_punct(";")) continue;
      p.classes.push_back(class_decl());
    }
    return p;
  }

 private:
  TokenStream ts_;
  std::set<Label> labels_;  // labels of the method being parsed

  bool at_type(std::size_t ahead = 0) const { return ts_.is_ident(ahead); }

  TypeName type() {
    const Token& t = ts_.peek();
    if (t.kind != Tok::Ident) ts_.fail("expected a type but found " + describe(t));
    ts_.next();
    if (t.text == "int") return TypeName::int_();
    if (t.text == "bool" || t.text == "boolean" || t.text == "Boolean") return TypeName::bool_();
    if (t.text == "void") return TypeName::void_();
    if (t.text == "Exception") return TypeName::exception();
    return TypeName::class_(t.text);
  }

  // `T a, b, c;`
  void decl_list(std::vector<VarDecl>& out) {
    TypeName t = type();
    do {
      const Token& n = ts_.peek();
      std::string name = ts_.expect_ident("variable name");
      out.push_back({t, name, n.pos});
    } while (ts_.accept_punct(","));
    ts_.expect_punct(";");
  }

  SourceClass class_decl() {
    SourceClass c;
    c.pos = ts_.expect_keyword("class").pos;
    c.name = ts_.expect_ident("class name");
    ts_.expect_punct("{");
    while (!ts_.is_punct("}")) {
      if (ts_.at_end()) ts_.fail("unterminated class body");
      if (ts_.accept_punct(";")) continue;
      if (at_type() && ts_.is_ident(1) && ts_.is_punct("(", 2)) {
        c.methods.push_back(method());
      } else {
        decl_list(c.fields);
      }
    }
    ts_.expect_punct("}");
    return c;
  }

  SourceMethod method() {
    SourceMethod m;
    m.pos = ts_.peek().pos;
    m.ret = type();
    m.name = ts_.expect_ident("method name");
    ts_.expect_punct("(");
    m.param.pos = ts_.peek().pos;
    m.param.type = type();
    m.param.name = ts_.expect_ident("parameter name");
    if (ts_.is_punct(",")) ts_.fail("methods take exactly one parameter");
    ts_.expect_punct(")");
    ts_.expect_punct("{");
    labels_.clear();
    while (!ts_.is_punct("}")) {
      if (ts_.at_end()) ts_.fail("unterminated method body");
      if (ts_.accept_punct(";")) continue;
      if (at_label()) break;
      decl_list(m.locals);
    }
    m.body = blocks();
    ts_.expect_punct("}");
    return m;
  }

  bool at_label() const { return ts_.is_ident() && ts_.is_punct(":", 1); }

  std::vector<Block> blocks() {
    std::vector<Block> out;
    while (true) {
      while (ts_.accept_punct(";")) {
      }
      if (!at_label()) break;
      out.push_back(block());
    }
    return out;
  }

  Block block() {
    Block b;
    const Token& lt = ts_.peek();
    b.pos = lt.pos;
    b.label = ts_.expect_ident("label");
    if (!labels_.insert(b.label).second)
      throw Error(ErrorKind::DuplicateLabel, "duplicate label " + b.label, lt.pos);
    ts_.expect_punct(":");
    if (ts_.accept_punct("{")) {
      if (ts_.accept_punct("}")) {
        b.body = Assigns{};
      } else {
        b.body = statement();
        ts_.expect_punct("}");
      }
      ts_.accept_punct(";");
    } else {
      b.body = statement();
    }
    return b;
  }

  BlockBody statement() {
    if (ts_.is_keyword("return")) {
      ts_.next();
      Return r{expr()};
      ts_.expect_punct(";");
      return r;
    }
    if (ts_.is_keyword("throw")) {
      ts_.next();
      Throw t{expr()};
      ts_.expect_punct(";");
      return t;
    }
    if (ts_.is_keyword("try")) return try_catch();
    if (ts_.is_keyword("join")) return while_loop();
    if (ts_.is_keyword("if")) return if_else();
    return assigns_or_call();
  }

  std::vector<Block> braced_blocks() {
    ts_.expect_punct("{");
    auto bs = blocks();
    ts_.expect_punct("}");
    return bs;
  }

  // `join { x = phi(L1:a, L2:b); ... }` or with parentheses.
  std::vector<Phi> join_clause(bool required) {
    std::vector<Phi> out;
    if (!ts_.is_keyword("join")) {
      if (required) ts_.fail("expected 'join' but found " + describe(ts_.peek()));
      return out;
    }
    ts_.next();
    std::string close;
    if (ts_.accept_punct("{")) close = "}";
    else if (ts_.accept_punct("(")) close = ")";
    else ts_.fail("expected '{' or '(' after join");
    while (!ts_.is_punct(close)) {
      if (ts_.accept_punct(";") || ts_.accept_punct(",")) continue;
      out.push_back(phi());
    }
    ts_.expect_punct(close);
    return out;
  }

  Phi phi() {
    Phi p;
    p.pos = ts_.peek().pos;
    p.target = ts_.expect_ident("phi target");
    ts_.expect_punct("=");
    ts_.expect_keyword("phi");
    ts_.expect_punct("(");
    while (!ts_.is_punct(")")) {
      if (ts_.accept_punct(",")) continue;
      std::string lab = ts_.expect_ident("label");
      ts_.expect_punct(":");
      std::string var = ts_.expect_ident("phi operand");
      p.operands.emplace_back(std::move(lab), std::move(var));
    }
    ts_.expect_punct(")");
    return p;
  }

  BlockBody try_catch() {
    ts_.expect_keyword("try");
    TryCatch t;
    t.try_blocks = braced_blocks();
    t.raise_phis = join_clause(false);
    ts_.expect_keyword("catch");
    ts_.expect_punct("(");
    t.exn_type = type();
    t.exn_var = ts_.expect_ident("exception variable");
    ts_.expect_punct(")");
    t.catch_blocks = braced_blocks();
    t.join_phis = join_clause(false);
    ts_.accept_punct(";");
    return t;
  }

  BlockBody while_loop() {
    While w;
    w.phis = join_clause(true);
    ts_.expect_keyword("while");
    ts_.expect_punct("(");
    w.cond = expr();
    ts_.expect_punct(")");
    w.body = braced_blocks();
    ts_.accept_punct(";");
    return w;
  }

  BlockBody if_else() {
    ts_.expect_keyword("if");
    IfElse s;
    ts_.expect_punct("(");
    s.cond = expr();
    ts_.expect_punct(")");
    s.then_blocks = braced_blocks();
    ts_.expect_keyword("else");
    s.else_blocks = braced_blocks();
    s.join_phis = join_clause(false);
    ts_.accept_punct(";");
    return s;
  }

  bool at_assignment_end() const { return ts_.is_punct("}") || at_label() || ts_.at_end(); }

  BlockBody assigns_or_call() {
    // x = e.m(e);  occupies the whole block.
    if (ts_.is_ident() && ts_.is_punct("=", 1)) {
      auto m = ts_.mark();
      std::string target = ts_.next().text;
      ts_.next();
      std::optional<CallParts> call;
      postfix(&call);
      if (call && ts_.is_punct(";")) {
        ts_.next();
        if (!at_assignment_end())
          ts_.fail("a method call must occupy its own block");
        return MethodCall{target, std::move(call->receiver), call->method, std::move(call->arg)};
      }
      ts_.reset(m);
    }
    Assigns a;
    do {
      a.items.push_back(assignment());
    } while (!at_assignment_end() && !ts_.is_punct(";"));
    return a;
  }

  Assignment assignment() {
    Assignment a;
    a.pos = ts_.peek().pos;
    if (ts_.is_keyword("System") && ts_.is_punct(".", 1)) {
      ts_.next();
      ts_.expect_punct(".");
      ts_.expect_keyword("out");
      ts_.expect_punct(".");
      ts_.expect_keyword("println");
      ts_.expect_punct("(");
      a.node = Print{expr()};
      ts_.expect_punct(")");
      ts_.expect_punct(";");
      return a;
    }
    Expr lhs = postfix(nullptr);
    ts_.expect_punct("=");
    Expr rhs = expr();
    ts_.expect_punct(";");
    if (auto* v = std::get_if<Var>(&lhs.node)) {
      a.node = VarAssign{v->name, std::move(rhs)};
    } else if (auto* f = std::get_if<FieldAccess>(&lhs.node)) {
      a.node = FieldAssign{std::move(*f->obj), f->field, std::move(rhs)};
    } else {
      throw Error(ErrorKind::Syntax, "invalid assignment target", a.pos);
    }
    return a;
  }

  Expr expr() {
    Expr l = additive();
    while (ts_.is_punct("<") || ts_.is_punct(">") || ts_.is_punct("==")) {
      Pos p = ts_.peek().pos;
      std::string op = ts_.next().text;
      l = make_binop(op, std::move(l), additive(), p);
    }
    return l;
  }

  Expr additive() {
    Expr l = postfix(nullptr);
    while (ts_.is_punct("+") || ts_.is_punct("-")) {
      Pos p = ts_.peek().pos;
      std::string op = ts_.next().text;
      l = make_binop(op, std::move(l), postfix(nullptr), p);
    }
    return l;
  }

  Expr postfix(std::optional<CallParts>* call) {
    Expr e = primary();
    while (ts_.is_punct(".")) {
      ts_.next();
      Pos p = ts_.peek().pos;
      std::string name = ts_.expect_ident("field or method name");
      if (ts_.is_punct("(")) {
        if (!call) ts_.fail("method calls are only allowed as `x = e.m(e);` blocks");
        ts_.next();
        Expr arg = expr();
        ts_.expect_punct(")");
        *call = CallParts{std::move(e), name, std::move(arg)};
        return Expr{};
      }
      e = Expr{FieldAccess{Box<Expr>(std::move(e)), name}, p};
    }
    return e;
  }

  Expr primary() {
    const Token& t = ts_.peek();
    Pos p = t.pos;
    switch (t.kind) {
      case Tok::Int: {
        auto v = t.ival;
        ts_.next();
        return make_int(v, p);
      }
      case Tok::String: {
        std::string s = t.text;
        ts_.next();
        return make_str(std::move(s), p);
      }
      case Tok::Ident: {
        std::string n = t.text;
        ts_.next();
        if (n == "true") return make_bool(true, p);
        if (n == "false") return make_bool(false, p);
        if (n == "null") return Expr{Const{}, p};
        if (n == "this") return Expr{This{}, p};
        if (n == "new") {
          TypeName ty = type();
          ts_.expect_punct("(");
          ts_.expect_punct(")");
          return Expr{New{ty}, p};
        }
        return make_var(std::move(n), p);
      }
      case Tok::Punct:
        if (t.text == "-" && ts_.peek(1).kind == Tok::Int) {
          ts_.next();
          auto v = ts_.next().ival;
          return make_int(-v, p);
        }
        if (t.text == "(") {
          ts_.next();
          Expr e = expr();
          ts_.expect_punct(")");
          return e;
        }
        break;
      case Tok::End:
        break;
    }
    ts_.fail("expected an expression but found " + describe(t));
  }
};

}  // namespace

SourceProgram parse_source(std::string_view text) { return Parser(text).program(); }

}  // namespace fjobf::source
