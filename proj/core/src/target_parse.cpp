#include <algorithm>
#include <map>
#include <set>

#include "fjobf/lexer.hpp"
#include "fjobf/target_ast.hpp"

namespace fjobf::target {
namespace {

const std::set<std::string, std::less<>> kKeywords = {"return", "if", "else", "new", "this", "true",
                                                      "false", "null", "class", "type"};

class Parser {
 public:
  explicit Parser(std::string_view text) : ts_(tokenize(text)) {}

  TargetProgram program() {
    TargetProgram p;
    while (!ts_.at_end()) {
      if (ts_.accept_punct(";")) continue;
      if (ts_.is_keyword("type") && ts_.is_ident(1) && ts_.is_punct("=", 2)) {
        ts_.next();
        std::string name = ts_.expect_ident("alias name");
        ts_.expect_punct("=");
        FunType t = type();
        ts_.expect_punct(";");
        aliases_[name] = t;
        p.aliases.emplace_back(name, t);
      } else if (ts_.is_keyword("class")) {
        p.classes.push_back(class_decl());
      } else {
        p.functions.push_back(method());
      }
    }
    return p;
  }

 private:
  TokenStream ts_;
  std::map<std::string, FunType, std::less<>> aliases_;

  // ---- types -----------------------------------------------------------------

  std::optional<FunType> try_base() {
    std::size_t m = ts_.mark();
    if (ts_.accept_punct("(")) {
      auto t = try_type();
      if (t && ts_.accept_punct(")")) return t;
      ts_.reset(m);
      return std::nullopt;
    }
    const Token& t = ts_.peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text)) return std::nullopt;
    ts_.next();
    if (auto it = aliases_.find(t.text); it != aliases_.end()) return it->second;
    if (t.text == "int") return base_type(TypeName::int_());
    if (t.text == "bool" || t.text == "boolean" || t.text == "Boolean") return base_type(TypeName::bool_());
    if (t.text == "void") return void_type();
    if (t.text == "Exception") return base_type(TypeName::exception());
    return base_type(TypeName::class_(t.text));
  }

  // Never throws; on failure the stream is left where it was.
  std::optional<FunType> try_type() {
    std::size_t m = ts_.mark();
    auto from = try_base();
    if (!from) return std::nullopt;
    if (ts_.accept_punct("=>")) {
      auto to = try_type();
      if (!to) {
        ts_.reset(m);
        return std::nullopt;
      }
      return FunType::arrow(*from, *to);
    }
    return from;
  }

  FunType type() {
    auto t = try_type();
    if (!t) ts_.fail("expected a type but found " + describe(ts_.peek()));
    return *t;
  }

  // `K name` followed by one of `follow`, without consuming anything.
  bool at_decl(std::initializer_list<std::string_view> follow) {
    std::size_t m = ts_.mark();
    bool ok = false;
    if (try_type() && ts_.is_ident() && !kKeywords.count(ts_.peek().text)) {
      for (auto f : follow) ok = ok || ts_.is_punct(f, 1);
    }
    ts_.reset(m);
    return ok;
  }

  // ---- declarations ------------------------------------------------------------

  TargetClass class_decl() {
    TargetClass c;
    c.pos = ts_.expect_keyword("class").pos;
    c.name = ts_.expect_ident("class name");
    ts_.expect_punct("{");
    while (!ts_.accept_punct("}")) {
      if (ts_.accept_punct(";")) continue;
      if (at_decl({"("})) {
        c.methods.push_back(method());
        continue;
      }
      FunType t = type();
      if (t.is_arrow()) ts_.fail("fields must have a base type");
      do c.fields.push_back({t.base(), ts_.expect_ident("field name")});
      while (ts_.accept_punct(","));
      ts_.expect_punct(";");
    }
    return c;
  }

  Param param() {
    std::size_t m = ts_.mark();
    if (auto t = try_type(); t && ts_.is_ident() && !kKeywords.count(ts_.peek().text))
      return {t, ts_.expect_ident()};
    ts_.reset(m);
    return {std::nullopt, ts_.expect_ident("parameter name")};
  }

  TargetMethod method() {
    TargetMethod md;
    md.pos = ts_.peek().pos;
    md.ret = type();
    md.name = ts_.expect_ident("method name");
    ts_.expect_punct("(");
    if (!ts_.accept_punct(")")) {
      do md.params.push_back(param());
      while (ts_.accept_punct(","));
      ts_.expect_punct(")");
    }
    ts_.expect_punct("{");
    while (!ts_.accept_punct("}")) {
      if (ts_.accept_punct(";")) continue;
      if (at_decl({"=", ",", ";"})) {
        Pos pos = ts_.peek().pos;
        FunType t = type();
        std::string name = ts_.expect_ident();
        if (ts_.accept_punct("=")) {
          Expr value = expr();
          end_stmt();
          if (auto* l = std::get_if<LambdaExpr>(&value.node)) {
            md.locals.push_back({t, name, std::move(l->lam)});
          } else {
            md.locals.push_back({t, name, std::nullopt});
            md.body.push_back({Assign{std::nullopt, name, std::move(value)}, pos});
          }
          continue;
        }
        md.locals.push_back({t, name, std::nullopt});
        while (ts_.accept_punct(",")) md.locals.push_back({t, ts_.expect_ident(), std::nullopt});
        ts_.expect_punct(";");
        continue;
      }
      md.body.push_back(statement());
    }
    return md;
  }

  // ---- statements --------------------------------------------------------------

  // `;` may be left out after a closing brace or before one.
  bool end_stmt() {
    if (ts_.accept_punct(";")) return true;
    if (ts_.previous().kind == Tok::Punct && ts_.previous().text == "}") return true;
    if (ts_.is_punct("}")) return false;
    ts_.fail("expected ';' but found " + describe(ts_.peek()));
  }

  std::vector<Stmt> block() {
    ts_.expect_punct("{");
    std::vector<Stmt> out;
    while (!ts_.accept_punct("}")) {
      if (ts_.accept_punct(";")) continue;
      out.push_back(statement());
    }
    return out;
  }

  bool at_print() const {
    return ts_.is_keyword("System") && ts_.is_punct(".", 1) && ts_.is_keyword("out", 2) && ts_.is_punct(".", 3) &&
           ts_.is_keyword("println", 4);
  }

  Stmt statement() {
    Pos pos = ts_.peek().pos;
    if (ts_.accept_keyword("return")) {
      if (ts_.accept_punct(";") || ts_.is_punct("}")) return {Return{}, pos};
      Expr e = expr();
      end_stmt();
      return {Return{std::move(e)}, pos};
    }
    if (ts_.accept_keyword("if")) {
      ts_.expect_punct("(");
      Expr c = expr();
      ts_.expect_punct(")");
      IfElse s{std::move(c), block(), {}};
      if (ts_.accept_keyword("else")) s.else_body = block();
      return {std::move(s), pos};
    }
    if (at_print()) {
      for (int i = 0; i < 5; ++i) ts_.next();
      ts_.expect_punct("(");
      Expr e = expr();
      ts_.expect_punct(")");
      end_stmt();
      return {Print{std::move(e)}, pos};
    }
    if (at_decl({"="})) {
      FunType t = type();
      std::string name = ts_.expect_ident();
      ts_.expect_punct("=");
      Expr e = expr();
      end_stmt();
      return {Assign{t, name, std::move(e)}, pos};
    }
    Expr lhs = expr();
    if (ts_.accept_punct("=")) {
      Expr rhs = expr();
      end_stmt();
      if (auto* v = std::get_if<Var>(&lhs.node)) return {Assign{std::nullopt, v->name, std::move(rhs)}, pos};
      if (auto* f = std::get_if<FieldAccess>(&lhs.node))
        return {FieldAssign{std::move(*f->obj), f->field, std::move(rhs)}, pos};
      throw Error(ErrorKind::Syntax, "cannot assign to this expression", pos);
    }
    // A trailing expression without `;` is the value of the body.
    if (!end_stmt()) return {Return{std::move(lhs)}, pos};
    return {ExprStmt{std::move(lhs)}, pos};
  }

  // ---- expressions -------------------------------------------------------------

  Expr expr() {
    Expr lhs = additive();
    while (ts_.is_punct("<") || ts_.is_punct(">") || ts_.is_punct("==")) {
      Pos pos = ts_.peek().pos;
      std::string op = ts_.next().text;
      Expr rhs = additive();
      lhs = Expr{BinOp{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}, pos};
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = postfix();
    while (ts_.is_punct("+") || ts_.is_punct("-")) {
      Pos pos = ts_.peek().pos;
      std::string op = ts_.next().text;
      Expr rhs = postfix();
      lhs = Expr{BinOp{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}, pos};
    }
    return lhs;
  }

  Expr postfix() {
    Expr e = primary();
    if (std::holds_alternative<LambdaExpr>(e.node)) return e;
    while (true) {
      Pos pos = ts_.peek().pos;
      if (ts_.accept_punct("(")) {
        std::vector<Expr> args;
        if (!ts_.accept_punct(")")) {
          do args.push_back(expr());
          while (ts_.accept_punct(","));
          ts_.expect_punct(")");
        }
        e = Expr{Apply{Box<Expr>(std::move(e)), std::move(args)}, pos};
      } else if (ts_.is_punct(".") && ts_.is_ident(1) && ts_.is_punct("(", 2)) {
        ts_.next();
        std::string m = ts_.expect_ident();
        ts_.expect_punct("(");
        Expr arg = expr();
        ts_.expect_punct(")");
        e = Expr{MethodCall{Box<Expr>(std::move(e)), m, Box<Expr>(std::move(arg))}, pos};
      } else if (ts_.is_punct(".") && ts_.is_ident(1)) {
        ts_.next();
        e = Expr{FieldAccess{Box<Expr>(std::move(e)), ts_.expect_ident()}, pos};
      } else {
        return e;
      }
    }
  }

  std::optional<std::vector<Param>> try_lambda_params() {
    std::size_t m = ts_.mark();
    if (ts_.is_ident() && ts_.is_punct("->", 1) && !kKeywords.count(ts_.peek().text)) {
      std::string n = ts_.expect_ident();
      ts_.next();
      return std::vector<Param>{{std::nullopt, n}};
    }
    if (!ts_.accept_punct("(")) return std::nullopt;
    std::vector<Param> ps;
    try {
      if (!ts_.accept_punct(")")) {
        do ps.push_back(param());
        while (ts_.accept_punct(","));
        ts_.expect_punct(")");
      }
    } catch (const Error&) {
      ts_.reset(m);
      return std::nullopt;
    }
    if (!ts_.accept_punct("->")) {
      ts_.reset(m);
      return std::nullopt;
    }
    return ps;
  }

  static Expr int_const(std::int64_t v, Pos pos) {
    Const c;
    c.kind = Const::Kind::Int;
    c.i = v;
    return Expr{c, pos};
  }

  Expr primary() {
    const Token& t = ts_.peek();
    Pos pos = t.pos;
    if (auto ps = try_lambda_params()) {
      Lambda l;
      l.pos = pos;
      l.params = std::move(*ps);
      if (ts_.is_punct("{")) {
        l.body = block();
      } else {
        Pos bp = ts_.peek().pos;
        l.body.push_back({Return{expr()}, bp});
      }
      return Expr{LambdaExpr{Box<Lambda>(std::move(l))}, pos};
    }
    if (t.kind == Tok::Int) {
      ts_.next();
      return int_const(t.ival, pos);
    }
    if (ts_.is_punct("-") && ts_.peek(1).kind == Tok::Int) {
      ts_.next();
      std::int64_t v = ts_.next().ival;
      return int_const(-v, pos);
    }
    if (t.kind == Tok::String) {
      ts_.next();
      Const c;
      c.kind = Const::Kind::Str;
      c.s = t.text;
      return Expr{c, pos};
    }
    if (ts_.accept_keyword("true") || ts_.accept_keyword("false")) {
      Const c;
      c.kind = Const::Kind::Bool;
      c.b = ts_.previous().text == "true";
      return Expr{c, pos};
    }
    if (ts_.accept_keyword("null")) return Expr{Const{}, pos};
    if (ts_.accept_keyword("this")) return Expr{This{}, pos};
    if (ts_.accept_keyword("new")) {
      std::string cls = ts_.expect_ident("class name");
      ts_.expect_punct("(");
      ts_.expect_punct(")");
      return Expr{New{cls == "Exception" ? TypeName::exception() : TypeName::class_(cls)}, pos};
    }
    if (ts_.accept_punct("(")) {
      Expr e = expr();
      ts_.expect_punct(")");
      return e;
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      ts_.next();
      return Expr{Var{t.text}, pos};
    }
    ts_.fail("expected an expression but found " + describe(t));
  }
};

// ---- lambda naming -----------------------------------------------------------

void collect(std::vector<Stmt>& ss, std::vector<Lambda*>& out);

void collect(Expr& e, std::vector<Lambda*>& out) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LambdaExpr>) {
          out.push_back(n.lam.get());
          collect(n.lam->body, out);
        } else if constexpr (std::is_same_v<T, Apply>) {
          collect(*n.fn, out);
          for (auto& a : n.args) collect(a, out);
        } else if constexpr (std::is_same_v<T, MethodCall>) {
          collect(*n.recv, out);
          collect(*n.arg, out);
        } else if constexpr (std::is_same_v<T, FieldAccess>) {
          collect(*n.obj, out);
        } else if constexpr (std::is_same_v<T, BinOp>) {
          collect(*n.lhs, out);
          collect(*n.rhs, out);
        }
      },
      e.node);
}

void collect(std::vector<Stmt>& ss, std::vector<Lambda*>& out) {
  for (auto& s : ss) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Assign> || std::is_same_v<T, Print>) {
            collect(n.value, out);
          } else if constexpr (std::is_same_v<T, FieldAssign>) {
            collect(n.obj, out);
            collect(n.value, out);
          } else if constexpr (std::is_same_v<T, Return>) {
            if (n.value) collect(*n.value, out);
          } else if constexpr (std::is_same_v<T, IfElse>) {
            collect(n.cond, out);
            collect(n.then_body, out);
            collect(n.else_body, out);
          } else {
            collect(n.expr, out);
          }
        },
        s.node);
  }
}

void collect(TargetMethod& m, std::vector<Lambda*>& out) {
  for (auto& l : m.locals) {
    if (!l.init) continue;
    out.push_back(l.init->get());
    collect((*l.init)->body, out);
  }
  collect(m.body, out);
}

std::string primes(std::size_t n) {
  static const char* const kMarks[] = {"", "′", "″", "‴"};
  if (n < 4) return kMarks[n];
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += "′";
  return s;
}

// λ_<line>, then ′ ″ ‴ for later lambdas starting on the same line.
void name_lambdas(TargetProgram& p) {
  std::vector<Lambda*> all;
  for (auto& c : p.classes)
    for (auto& m : c.methods) collect(m, all);
  for (auto& f : p.functions) collect(f, all);
  std::stable_sort(all.begin(), all.end(), [](const Lambda* a, const Lambda* b) {
    return std::make_pair(a->pos.line, a->pos.col) < std::make_pair(b->pos.line, b->pos.col);
  });
  std::map<int, std::size_t> per_line;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Lambda* l = all[i];
    l->id.ordinal = static_cast<int>(i);
    l->id.display = "λ_" + std::to_string(l->pos.line) + primes(per_line[l->pos.line]++);
  }
}

}  // namespace

TargetProgram parse_target(std::string_view text) {
  TargetProgram p = Parser(text).program();
  name_lambdas(p);
  return p;
}

}  // namespace fjobf::target
