#include <algorithm>
#include <cctype>

#include "fjobf/cps.hpp"

namespace fjobf::cps {

namespace s = fjobf::source;
namespace t = fjobf::target;

namespace {

const char* const kReserved[] = {"input", "res", "ex"};
const char* const kPrelude[] = {"loop", "seq", "trycatch", "ifelse", "id_raise"};

t::Stmt assign_stmt(const std::string& v, t::Expr e) { return t::assign(v, std::move(e)); }

t::Expr call(const std::string& fn, std::vector<t::Expr> args) { return t::apply(t::var(fn), std::move(args)); }

// `() -> { return e; }`
t::Expr thunk(t::Expr e) {
  t::Lambda l;
  l.body.push_back(t::ret(std::move(e)));
  return t::lambda_expr(std::move(l));
}

void collect_expr_vars(const s::Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, s::FieldAccess>) {
          collect_expr_vars(*n.obj, out);
          out.insert(n.field);
        } else if constexpr (std::is_same_v<T, s::BinOp>) {
          collect_expr_vars(*n.lhs, out);
          collect_expr_vars(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, s::New>) {
          out.insert(n.type.str());
        }
      },
      e.node);
}

std::set<std::string> source_identifiers(const s::SourceProgram& prog, const s::SourceMethod& md) {
  std::set<std::string> out;
  for (const auto& c : prog.classes) {
    out.insert(c.name);
    for (const auto& f : c.fields) out.insert(f.name);
    for (const auto& m : c.methods) out.insert(m.name);
  }
  out.insert(md.param.name);
  for (const auto& d : md.locals) out.insert(d.name);
  for (const auto& v : s::assigned_vars(md)) out.insert(v);
  auto phis = [&](const std::vector<s::Phi>& ps) {
    for (const auto& p : ps)
      for (const auto& [l, v] : p.operands) out.insert(v);
  };
  s::for_each_block(md.body, [&](const s::Block& b) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, s::Assigns>) {
            for (const auto& a : n.items) {
              std::visit(
                  [&](const auto& x) {
                    using A = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<A, s::FieldAssign>) {
                      collect_expr_vars(x.obj, out);
                      out.insert(x.field);
                    }
                    collect_expr_vars(x.value, out);
                  },
                  a.node);
            }
          } else if constexpr (std::is_same_v<T, s::Return> || std::is_same_v<T, s::Throw>) {
            collect_expr_vars(n.value, out);
          } else if constexpr (std::is_same_v<T, s::MethodCall>) {
            collect_expr_vars(n.receiver, out);
            collect_expr_vars(n.arg, out);
          } else if constexpr (std::is_same_v<T, s::TryCatch>) {
            phis(n.raise_phis);
            phis(n.join_phis);
          } else if constexpr (std::is_same_v<T, s::While>) {
            phis(n.phis);
            collect_expr_vars(n.cond, out);
          } else {
            phis(n.join_phis);
            collect_expr_vars(n.cond, out);
          }
        },
        b.body);
  });
  return out;
}

bool is_numbered(const s::Label& l) {
  return l.size() > 1 && l[0] == 'L' &&
         std::all_of(l.begin() + 1, l.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

std::vector<PhiPair> resolve_phi_pairs(const std::vector<s::Phi>& phis, const s::Label& l) {
  std::vector<PhiPair> out;
  for (const auto& p : phis) {
    const std::string* src = p.operand_for(l);
    if (!src) throw Error(ErrorKind::Translate, "phi for " + p.target + " has no operand for " + l, p.pos);
    out.push_back({p.target, t::var(*src)});
  }
  return out;
}

// ---- context -------------------------------------------------------------------

TransContext::TransContext(const s::SourceProgram& prog, const s::SourceClass& cls, const s::SourceMethod& md)
    : prog_(prog), cls_(cls), md_(md), order_(s::label_order(md)), used_(source_identifiers(prog, md)) {
  for (const char* r : kReserved)
    if (used_.count(r))
      throw Error(ErrorKind::Translate, std::string("identifier '") + r + "' is reserved by the translation", md.pos);
  for (const char* f : kPrelude)
    if (used_.count(f))
      throw Error(ErrorKind::Translate, std::string("identifier '") + f + "' clashes with a combinator", md.pos);
  for (const auto& c : prog.classes)
    for (const auto& m : c.methods)
      if (m.name.size() > 4 && m.name.compare(m.name.size() - 4, 4, "_cps") == 0 &&
          c.find_method(m.name.substr(0, m.name.size() - 4)))
        throw Error(ErrorKind::Translate, "method " + m.name + " clashes with a generated method", m.pos);
  for (const char* r : kReserved) used_.insert(r);
  for (const char* f : kPrelude) used_.insert(f);

  types_[md.param.name] = md.param.type;
  for (const auto& d : md.locals) {
    types_[d.name] = d.type;
    declared_.push_back(d.name);
  }

  raise_ = fresh("raise");
  k_ = fresh("k");
  in_ = fresh("in");
  v_ = fresh("v");
  r_ = fresh("r");
  e_ = fresh("e");

  // Variables assigned without a declaration, and catch variables.
  std::vector<std::pair<std::string, std::function<s::TypeName()>>> pending;
  s::for_each_block(md.body, [&](const s::Block& b) {
    auto note = [&](const std::string& v, std::function<s::TypeName()> ty) {
      if (!types_.count(v)) {
        types_[v] = s::TypeName::int_();
        declared_.push_back(v);
        pending.emplace_back(v, std::move(ty));
      }
    };
    auto phis = [&](const std::vector<s::Phi>& ps) {
      for (const auto& p : ps) {
        note(p.target, [this, p] {
          for (const auto& [l, v] : p.operands)
            if (auto it = types_.find(v); it != types_.end()) return it->second;
          return s::TypeName::int_();
        });
      }
    };
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, s::Assigns>) {
            for (const auto& a : n.items)
              if (auto* va = std::get_if<s::VarAssign>(&a.node))
                note(va->var, [this, e = va->value] { return infer(e); });
          } else if constexpr (std::is_same_v<T, s::MethodCall>) {
            note(n.target, [this, n] { return call_type(n); });
          } else if constexpr (std::is_same_v<T, s::TryCatch>) {
            phis(n.raise_phis);
            note(n.exn_var, [] { return s::TypeName::exception(); });
            phis(n.join_phis);
          } else if constexpr (std::is_same_v<T, s::While>) {
            phis(n.phis);
          } else if constexpr (std::is_same_v<T, s::IfElse>) {
            phis(n.join_phis);
          }
        },
        b.body);
  });
  // Two passes so phi chains over undeclared variables settle.
  for (int round = 0; round < 2; ++round)
    for (auto& [v, ty] : pending) types_[v] = ty();
}

std::string TransContext::fresh(const std::string& base) {
  std::string n = base;
  for (int i = 2; used_.count(n); ++i) n = base + "_" + std::to_string(i);
  used_.insert(n);
  return n;
}

s::TypeName TransContext::type_of_var(const std::string& v) const {
  auto it = types_.find(v);
  return it == types_.end() ? s::TypeName::int_() : it->second;
}

s::TypeName TransContext::infer(const s::Expr& e) const {
  return std::visit(
      [&](const auto& n) -> s::TypeName {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Const>) {
          switch (n.kind) {
            case s::Const::Kind::Bool: return s::TypeName::bool_();
            case s::Const::Kind::Null: return s::TypeName::class_("Object");
            default: return s::TypeName::int_();
          }
        } else if constexpr (std::is_same_v<T, s::Var>) {
          return type_of_var(n.name);
        } else if constexpr (std::is_same_v<T, s::This>) {
          return s::TypeName::class_(cls_.name);
        } else if constexpr (std::is_same_v<T, s::New>) {
          return n.type;
        } else if constexpr (std::is_same_v<T, s::FieldAccess>) {
          s::TypeName obj = infer(*n.obj);
          if (const s::SourceClass* c = prog_.find_class(obj.cls))
            for (const auto& f : c->fields)
              if (f.name == n.field) return f.type;
          return s::TypeName::int_();
        } else {
          if (n.op == "<" || n.op == ">" || n.op == "==") return s::TypeName::bool_();
          return s::TypeName::int_();
        }
      },
      e.node);
}

s::TypeName TransContext::call_type(const s::MethodCall& c) const {
  s::TypeName recv = infer(c.receiver);
  if (const s::SourceClass* cls = prog_.find_class(recv.cls))
    if (const s::SourceMethod* m = cls->find_method(c.method)) return m->ret;
  for (const auto& cls : prog_.classes)
    if (const s::SourceMethod* m = cls.find_method(c.method)) return m->ret;
  return s::TypeName::int_();
}

std::vector<t::LocalDecl> TransContext::plain_locals() const {
  std::vector<t::LocalDecl> out;
  for (const auto& v : declared_) out.push_back({t::base_type(type_of_var(v)), v, std::nullopt});
  out.push_back({t::base_type(md_.param.type), "input", std::nullopt});
  out.push_back({t::base_type(md_.ret), "res", std::nullopt});
  out.push_back({t::base_type(s::TypeName::exception()), "ex", std::nullopt});
  return out;
}

std::string TransContext::block_name(const s::Label& l, bool connector) {
  std::string suffix = is_numbered(l) ? l.substr(1) : "_" + l;
  return fresh(md_.name + (connector ? "k" : "") + suffix);
}

// `(ExCont raise) -> (NmCont k) -> { body }`
t::Lambda TransContext::cps_lambda(std::vector<t::Stmt> body) const {
  t::Lambda inner;
  inner.params.push_back({t::nm_cont_type(), k_});
  inner.body = std::move(body);
  t::Lambda outer;
  outer.params.push_back({t::exn_cont_type(), raise_});
  outer.body.push_back(t::ret(t::lambda_expr(std::move(inner))));
  return outer;
}

t::Expr TransContext::translate_expr(const s::Expr& e) const {
  return std::visit(
      [&](const auto& n) -> t::Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Const>) {
          return t::Expr{n, e.pos};
        } else if constexpr (std::is_same_v<T, s::Var>) {
          return t::Expr{t::Var{n.name == md_.param.name ? "input" : n.name}, e.pos};
        } else if constexpr (std::is_same_v<T, s::This>) {
          return t::Expr{t::This{}, e.pos};
        } else if constexpr (std::is_same_v<T, s::New>) {
          return t::Expr{t::New{n.type}, e.pos};
        } else if constexpr (std::is_same_v<T, s::FieldAccess>) {
          return t::Expr{t::FieldAccess{Box<t::Expr>(translate_expr(*n.obj)), n.field}, e.pos};
        } else {
          return t::Expr{t::BinOp{n.op, Box<t::Expr>(translate_expr(*n.lhs)), Box<t::Expr>(translate_expr(*n.rhs))},
                         e.pos};
        }
      },
      e.node);
}

std::vector<t::Stmt> TransContext::translate_assigns(const std::vector<s::Assignment>& as) const {
  std::vector<t::Stmt> out;
  for (const auto& a : as) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, s::VarAssign>) {
            out.push_back({t::Assign{std::nullopt, n.var, translate_expr(n.value)}, a.pos});
          } else if constexpr (std::is_same_v<T, s::FieldAssign>) {
            out.push_back({t::FieldAssign{translate_expr(n.obj), n.field, translate_expr(n.value)}, a.pos});
          } else {
            out.push_back({t::Print{translate_expr(n.value)}, a.pos});
          }
        },
        a.node);
  }
  return out;
}

// Phi moves as sequential assignments. When a target is read by a later
// move, every source is first copied to a temporary.
std::vector<t::Stmt> TransContext::moves(const std::vector<PhiPair>& pairs) {
  auto src_name = [&](const PhiPair& p) -> std::string {
    if (auto* v = std::get_if<t::Var>(&p.value.node)) return v->name;
    return {};
  };
  bool hazard = false;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (src_name(pairs[j]) == pairs[i].var) hazard = true;

  std::vector<t::Stmt> out;
  auto value = [&](const PhiPair& p) {
    std::string n = src_name(p);
    return n == md_.param.name ? t::var("input") : p.value;
  };
  if (!hazard) {
    for (const auto& p : pairs) out.push_back(assign_stmt(p.var, value(p)));
    return out;
  }
  std::vector<std::string> tmps;
  for (const auto& p : pairs) {
    std::string tmp = fresh(p.var + "_tmp");
    tmps.push_back(tmp);
    out.push_back(t::stmt(t::Assign{t::base_type(type_of_var(p.var)), tmp, value(p)}));
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) out.push_back(assign_stmt(pairs[i].var, t::var(tmps[i])));
  return out;
}

// No phi naming `l` means nothing to move; naming it in only some phis is
// an error, as in the interpreter.
std::vector<PhiPair> TransContext::lenient_pairs(const std::vector<s::Phi>& phis, const s::Label& l) const {
  bool any = std::any_of(phis.begin(), phis.end(), [&](const s::Phi& p) { return p.operand_for(l) != nullptr; });
  if (!any) return {};
  return resolve_phi_pairs(phis, l);
}

TransResult TransContext::connector(const std::vector<PhiPair>& pairs, const s::Label& l) {
  std::vector<t::Stmt> body = moves(pairs);
  body.push_back(t::ret(call(k_, {})));
  std::string name = block_name(l, true);
  TransResult r{{}, t::var(name)};
  r.decls.push_back({t::cps_func_type(), name, Box<t::Lambda>(cps_lambda(std::move(body)))});
  return r;
}

TransResult TransContext::translate_jump(const std::vector<s::Phi>& phis, const s::Label& l) {
  return connector(resolve_phi_pairs(phis, l), l);
}

TransResult TransContext::translate_blocks(const std::vector<s::Block>& blocks, const std::vector<s::Phi>& phi_k,
                                           const std::vector<s::Phi>& phi_r, const s::Label& pred) {
  if (blocks.empty()) return connector(lenient_pairs(phi_k, pred), pred);

  const s::Block& b = blocks.front();
  const s::Label& l = b.label;
  const bool single = blocks.size() == 1;
  std::vector<s::Block> rest_blocks(blocks.begin() + 1, blocks.end());

  TransResult out;
  auto append = [&](TransResult&& r) {
    for (auto& d : r.decls) out.decls.push_back(std::move(d));
    return std::move(r.main);
  };
  auto tail = [&]() -> t::Expr {
    if (single) return append(connector(lenient_pairs(phi_k, l), l));
    return append(translate_blocks(rest_blocks, phi_k, phi_r, l));
  };
  auto declare = [&](std::vector<t::Stmt> body) {
    std::string name = block_name(l, false);
    out.decls.push_back({t::cps_func_type(), name, Box<t::Lambda>(cps_lambda(std::move(body)))});
    return t::var(name);
  };

  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Assigns>) {
          std::vector<t::Stmt> body = translate_assigns(n.items);
          body.push_back(t::ret(call(k_, {})));
          t::Expr m = declare(std::move(body));
          t::Expr next = tail();
          out.main = call("seq", {std::move(m), std::move(next)});
        } else if constexpr (std::is_same_v<T, s::Return>) {
          std::vector<t::Stmt> body;
          body.push_back(assign_stmt("res", translate_expr(n.value)));
          body.push_back(t::ret(call(k_, {})));
          t::Expr m = declare(std::move(body));
          if (single) {
            out.main = std::move(m);
          } else {
            t::Expr next = append(translate_blocks(rest_blocks, phi_k, phi_r, l));
            out.main = call("seq", {std::move(m), std::move(next)});
          }
        } else if constexpr (std::is_same_v<T, s::Throw>) {
          // Blocks after a throw are unreachable and dropped.
          std::vector<t::Stmt> body = moves(lenient_pairs(phi_r, l));
          body.push_back(t::ret(call(raise_, {translate_expr(n.value)})));
          out.main = declare(std::move(body));
        } else if constexpr (std::is_same_v<T, s::MethodCall>) {
          // If an enclosing handler's raise-phis name this block, the
          // callee's exception has to perform those moves first.
          t::Expr raise_arg = t::var(raise_);
          std::vector<PhiPair> pairs = lenient_pairs(phi_r, l);
          if (!pairs.empty()) {
            t::Lambda w;
            w.params.push_back({t::base_type(s::TypeName::exception()), e_});
            w.body = moves(pairs);
            w.body.push_back(t::ret(call(raise_, {t::var(e_)})));
            raise_arg = t::lambda_expr(std::move(w));
          }
          s::TypeName rt = type_of_var(n.target);
          t::Lambda cont;
          cont.params.push_back({t::base_type(rt), v_});
          cont.body.push_back(assign_stmt(n.target, t::var(v_)));
          cont.body.push_back(t::ret(call(k_, {})));
          t::Expr invoke{t::MethodCall{Box<t::Expr>(translate_expr(n.receiver)), n.method + "_cps",
                                       Box<t::Expr>(translate_expr(n.arg))},
                         b.pos};
          t::Expr with_raise = t::apply(std::move(invoke), {std::move(raise_arg)});
          std::vector<t::Stmt> body;
          body.push_back(t::ret(t::apply(std::move(with_raise), {t::lambda_expr(std::move(cont))})));
          t::Expr m = declare(std::move(body));
          t::Expr next = tail();
          out.main = call("seq", {std::move(m), std::move(next)});
        } else if constexpr (std::is_same_v<T, s::IfElse>) {
          t::Expr th = append(translate_blocks(n.then_blocks, n.join_phis, phi_r, l));
          t::Expr el = append(translate_blocks(n.else_blocks, n.join_phis, phi_r, l));
          t::Expr next = tail();
          t::Expr branch = call("ifelse", {thunk(translate_expr(n.cond)), std::move(th), std::move(el)});
          out.main = call("seq", {std::move(branch), std::move(next)});
        } else if constexpr (std::is_same_v<T, s::While>) {
          t::Expr entry = n.phis.empty() ? append(connector({}, l))
                                         : append(translate_jump(n.phis, s::min_label(n.phis, order_)));
          t::Expr body = append(translate_blocks(n.body, n.phis, phi_r, l));
          t::Expr next = tail();
          t::Expr lp = call("loop", {thunk(translate_expr(n.cond)), std::move(body), std::move(next)});
          out.main = call("seq", {std::move(entry), std::move(lp)});
        } else {
          t::Expr tr = append(translate_blocks(n.try_blocks, n.join_phis, n.raise_phis, l));
          t::Expr handler_body = append(translate_blocks(n.catch_blocks, n.join_phis, phi_r, l));
          t::Lambda h;
          h.params.push_back({t::base_type(s::TypeName::exception()), e_});
          h.body.push_back(assign_stmt("ex", t::var(e_)));
          h.body.push_back(assign_stmt(n.exn_var, t::var(e_)));
          h.body.push_back(t::ret(std::move(handler_body)));
          t::Expr next = tail();
          t::Expr tc = call("trycatch", {std::move(tr), t::lambda_expr(std::move(h))});
          out.main = call("seq", {std::move(tc), std::move(next)});
        }
      },
      b.body);
  return out;
}

// ---- methods and programs ----------------------------------------------------

std::vector<t::TargetMethod> translate_method(const s::SourceProgram& prog, const s::SourceClass& cls,
                                              const s::SourceMethod& md) {
  TransContext ctx(prog, cls, md);
  TransResult r = ctx.translate_blocks(md.body, {}, {}, "L0");

  const t::FunType in_t = t::base_type(md.param.type);
  const t::FunType out_t = t::base_type(md.ret);
  const t::FunType result_cont = t::FunType::arrow(out_t, t::void_type());
  const t::FunType cps_t =
      t::FunType::arrow(in_t, t::FunType::arrow(t::exn_cont_type(), t::FunType::arrow(result_cont, t::void_type())));

  // in -> raise -> k -> { input = in; return E(raise)(() -> { return k(res); }); }
  t::Lambda kl;
  kl.params.push_back({result_cont, ctx.k_name()});
  kl.body.push_back(assign_stmt("input", t::var(ctx.in_name())));
  kl.body.push_back(t::ret(t::apply(t::apply(std::move(r.main), {t::var(ctx.raise_name())}),
                                    {thunk(call(ctx.k_name(), {t::var("res")}))})));
  t::Lambda rl;
  rl.params.push_back({t::exn_cont_type(), ctx.raise_name()});
  rl.body.push_back(t::ret(t::lambda_expr(std::move(kl))));
  t::Lambda il;
  il.params.push_back({in_t, ctx.in_name()});
  il.body.push_back(t::ret(t::lambda_expr(std::move(rl))));

  std::string cps_name = ctx.fresh(md.name + "_cps");

  std::vector<t::LocalDecl> locals = ctx.plain_locals();
  for (auto& d : r.decls) locals.push_back(std::move(d));
  locals.push_back({cps_t, cps_name, Box<t::Lambda>(std::move(il))});

  t::TargetMethod wrapper;
  wrapper.ret = out_t;
  wrapper.name = md.name;
  wrapper.params.push_back({in_t, md.param.name});
  wrapper.locals = locals;
  wrapper.pos = md.pos;
  {
    t::Lambda done;
    done.params.push_back({out_t, ctx.r_name()});
    done.body.push_back(assign_stmt("res", t::var(ctx.r_name())));
    done.body.push_back(t::ret_void());
    t::Expr run = t::apply(t::apply(call(cps_name, {t::var(md.param.name)}), {t::var("id_raise")}),
                           {t::lambda_expr(std::move(done))});
    wrapper.body.push_back(t::stmt(t::ExprStmt{std::move(run)}));
    wrapper.body.push_back(t::ret(t::var("res")));
  }

  t::TargetMethod entry;
  entry.ret = t::FunType::arrow(t::exn_cont_type(), t::FunType::arrow(result_cont, t::void_type()));
  entry.name = md.name + "_cps";
  entry.params.push_back({in_t, md.param.name});
  entry.locals = std::move(locals);
  entry.pos = md.pos;
  entry.body.push_back(t::ret(call(cps_name, {t::var(md.param.name)})));

  return {std::move(wrapper), std::move(entry)};
}

t::TargetProgram translate_program(const s::SourceProgram& prog, TranslateOptions opts) {
  t::TargetProgram out;
  out.aliases = t::standard_aliases();
  for (const auto& c : prog.classes) {
    t::TargetClass tc;
    tc.name = c.name;
    tc.pos = c.pos;
    for (const auto& f : c.fields) tc.fields.push_back({f.type, f.name});
    for (const auto& m : c.methods)
      for (auto& tm : translate_method(prog, c, m)) tc.methods.push_back(opts.flatten ? flatten(tm) : std::move(tm));
    out.classes.push_back(std::move(tc));
  }
  if (opts.prelude) out.functions = emit_prelude();
  return out;
}

// ---- shape check ---------------------------------------------------------------

std::vector<std::string> check_cps_shapes(const t::TargetProgram& p) {
  std::vector<std::string> out;
  const t::FunType cps = t::cps_func_type();
  for (const auto& c : p.classes) {
    for (const auto& m : c.methods) {
      for (const auto& l : m.locals) {
        if (!l.init || !(l.type == cps)) continue;
        const t::Lambda& outer = **l.init;
        std::string where = c.name + "." + m.name + "/" + l.name;
        if (outer.params.size() != 1 || (outer.params[0].type && !(*outer.params[0].type == t::exn_cont_type()))) {
          out.push_back(where + ": first parameter is not an exception continuation");
          continue;
        }
        const t::Return* ret = outer.body.size() == 1 ? std::get_if<t::Return>(&outer.body[0].node) : nullptr;
        const t::LambdaExpr* inner =
            ret && ret->value ? std::get_if<t::LambdaExpr>(&ret->value->node) : nullptr;
        if (!inner) {
          out.push_back(where + ": does not return a continuation consumer");
          continue;
        }
        const auto& ip = inner->lam->params;
        if (ip.size() != 1 || (ip[0].type && !(*ip[0].type == t::nm_cont_type())))
          out.push_back(where + ": second parameter is not a normal continuation");
      }
    }
  }
  return out;
}

}  // namespace fjobf::cps
