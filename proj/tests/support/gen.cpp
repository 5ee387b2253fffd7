#include "gen.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fjobf::testing {

namespace s = fjobf::source;

namespace {

using State = std::map<std::string, std::string>;  // source name -> SSA version

struct ListOut {
  std::vector<s::Block> blocks;
  State state;
  s::Label exit;
  bool raises = false;  // never completes normally
};

struct TryCtx {
  std::vector<std::pair<s::Label, State>> throws;
  bool calls = false;
};

s::Expr this_field(const std::string& f) {
  return s::Expr{s::FieldAccess{s::Expr{s::This{}, {}}, f}, {}};
}

s::Expr new_exception() { return s::Expr{s::New{s::TypeName::exception()}, {}}; }

s::Phi phi(std::string target, std::vector<std::pair<s::Label, std::string>> ops) {
  return s::Phi{std::move(target), std::move(ops), {}};
}

s::Assignment assign(std::string var, s::Expr e) { return {s::VarAssign{std::move(var), std::move(e)}, {}}; }

class Gen {
 public:
  Gen(std::mt19937_64& rng, const GenOptions& o) : rng_(rng), o_(o) {}

  s::SourceProgram program() {
    s::SourceProgram p;
    s::SourceClass helper{"Helper", {{s::TypeName::int_(), "h", {}}}, {}, {}};
    for (int i = 0; i < o_.helpers; ++i) helper_methods_.push_back("h" + std::to_string(i));
    for (int i = o_.helpers - 1; i >= 0; --i) {
      callees_.clear();
      for (int j = i + 1; j < o_.helpers; ++j) callees_.push_back({false, "h" + std::to_string(j)});
      in_helper_ = true;
      helper.methods.insert(helper.methods.begin(), method("h" + std::to_string(i)));
    }
    s::SourceClass main{"Main", {{s::TypeName::int_(), "f1", {}}, {s::TypeName::int_(), "f2", {}}}, {}, {}};
    for (int i = o_.methods - 1; i >= 0; --i) {
      callees_.clear();
      for (int j = i + 1; j < o_.methods; ++j) callees_.push_back({true, "m" + std::to_string(j)});
      for (const auto& h : helper_methods_) callees_.push_back({false, h});
      in_helper_ = false;
      main.methods.insert(main.methods.begin(), method("m" + std::to_string(i)));
    }
    p.classes.push_back(std::move(main));
    if (o_.helpers > 0) p.classes.push_back(std::move(helper));
    return p;
  }

 private:
  struct Callee {
    bool self;
    std::string name;
  };

  int pick(int n) { return n <= 1 ? 0 : static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng_)); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::string label() { return "L" + std::to_string(++labels_); }

  std::string version(const std::string& base) {
    std::string v = base + "_" + std::to_string(++versions_[base]);
    locals_.push_back({s::TypeName::int_(), v, {}});
    return v;
  }

  std::string any_var(const State& st) {
    auto it = st.begin();
    std::advance(it, pick(static_cast<int>(st.size())));
    return it->first;
  }

  // Loop counters are only written by their loop's closing block.
  std::string assignable(const State& st) {
    std::vector<std::string> vs;
    for (const auto& [name, v] : st)
      if (name[0] == 'v') vs.push_back(name);
    return vs[pick(static_cast<int>(vs.size()))];
  }

  s::Expr leaf(const State& st) {
    switch (pick(in_helper_ ? 3 : 4)) {
      case 0: return s::make_int(pick(12) - 3);
      case 1: return st.empty() ? s::make_var("x") : s::make_var(st.at(any_var(st)));
      case 2: return s::make_var("x");
      default: return this_field(chance(0.5) ? "f1" : "f2");
    }
  }

  s::Expr int_expr(const State& st, int depth = 2) {
    if (depth == 0 || chance(0.4)) return leaf(st);
    return s::make_binop(chance(0.6) ? "+" : "-", int_expr(st, depth - 1), int_expr(st, depth - 1));
  }

  s::Expr cond(const State& st) {
    static const char* ops[] = {"<", ">", "=="};
    return s::make_binop(ops[pick(3)], int_expr(st, 1), int_expr(st, 1));
  }

  s::SourceMethod method(const std::string& name) {
    labels_ = 0;
    versions_.clear();
    locals_.clear();
    tries_.clear();
    loops_ = 0;

    State st;
    s::Assigns first;
    for (int i = 0; i < o_.vars; ++i) {
      std::string base = "v" + std::to_string(i);
      std::string v = version(base);
      first.items.push_back(assign(v, int_expr(st)));
      st[base] = v;
    }
    std::vector<s::Block> body;
    body.push_back({label(), std::move(first), {}});
    ListOut rest = list(st, body.back().label, 0, false, false);
    for (auto& b : rest.blocks) body.push_back(std::move(b));
    body.push_back({label(), s::Return{int_expr(rest.state)}, {}});

    s::SourceMethod m;
    m.ret = s::TypeName::int_();
    m.name = name;
    m.param = {s::TypeName::int_(), "x", {}};
    m.locals = locals_;
    m.body = std::move(body);
    return m;
  }

  s::Block assigns(State& st) {
    s::Label l = label();
    s::Assigns a;
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) {
      int kind = pick(in_helper_ ? 5 : 6);
      if (kind <= 3) {
        std::string base = assignable(st);
        s::Expr e = int_expr(st);
        std::string v = version(base);
        a.items.push_back(assign(v, std::move(e)));
        st[base] = v;
      } else if (kind == 4) {
        a.items.push_back({s::Print{s::make_binop("+", s::make_str("p"), int_expr(st))}, {}});
      } else {
        a.items.push_back({s::FieldAssign{s::Expr{s::This{}, {}}, chance(0.5) ? "f1" : "f2", int_expr(st)}, {}});
      }
    }
    return {l, std::move(a), {}};
  }

  // `allow_raise` lets the list end in a block that never completes normally.
  ListOut list(State st, s::Label pred, int depth, bool allow_raise, bool assigns_first) {
    ListOut out;
    int n = 1 + pick(std::max(1, o_.max_blocks - depth));
    for (int i = 0; i < n; ++i) {
      bool last = i + 1 == n;
      if (i == 0 && assigns_first) {
        out.blocks.push_back(assigns(st));
        pred = out.blocks.back().label;
        continue;
      }
      int choice = pick(10);
      bool compound_ok = depth < o_.max_depth;
      if (last && allow_raise && chance(o_.throw_rate)) {
        s::Label l = label();
        if (!tries_.empty()) tries_.back()->throws.push_back({l, st});
        out.blocks.push_back({l, s::Throw{new_exception()}, {}});
        out.raises = true;
        out.state = st;
        out.exit = l;
        return out;
      }
      if (!callees_.empty() && chance(o_.call_rate)) {
        out.blocks.push_back(call(st));
      } else if (compound_ok && choice < 3) {
        out.blocks.push_back(if_block(st, pred, depth));
      } else if (compound_ok && choice < 5 && loops_ < 3) {
        std::string c = "c" + std::to_string(loops_++);
        std::string c0 = version(c);
        s::Assigns init;
        init.items.push_back(assign(c0, s::make_int(0)));
        st[c] = c0;
        out.blocks.push_back({label(), std::move(init), {}});
        pred = out.blocks.back().label;
        out.blocks.push_back(while_block(st, pred, depth, c));
      } else if (compound_ok && choice < 7) {
        bool raised = false;
        out.blocks.push_back(try_block(st, pred, depth, allow_raise && last, raised));
        if (raised) {
          out.raises = true;
          out.state = st;
          out.exit = out.blocks.back().label;
          return out;
        }
      } else {
        out.blocks.push_back(assigns(st));
      }
      pred = out.blocks.back().label;
    }
    out.state = st;
    out.exit = pred;
    return out;
  }

  s::Block call(State& st) {
    s::Label l = label();
    const Callee& c = callees_[pick(static_cast<int>(callees_.size()))];
    s::Expr recv = c.self ? s::Expr{s::This{}, {}} : s::Expr{s::New{s::TypeName::class_("Helper")}, {}};
    s::Expr arg = int_expr(st, 1);
    std::string base = assignable(st);
    std::string v = version(base);
    st[base] = v;
    if (!tries_.empty()) tries_.back()->calls = true;
    return {l, s::MethodCall{v, std::move(recv), c.name, std::move(arg)}, {}};
  }

  // Joins two states at a compound exit; variables that differ get a phi.
  State join(const State& before, const State& a, const s::Label& la, const State& b, const s::Label& lb,
             std::vector<s::Phi>& phis) {
    State out;
    for (const auto& [name, va] : a) {
      auto it = b.find(name);
      if (it == b.end()) continue;
      if (it->second == va) {
        out[name] = va;
        continue;
      }
      if (!before.count(name) && chance(0.3)) continue;
      std::string v = version(name);
      phis.push_back(phi(v, {{la, va}, {lb, it->second}}));
      out[name] = v;
    }
    return out;
  }

  s::Block if_block(State& st, const s::Label&, int depth) {
    s::Label l = label();
    s::IfElse n;
    n.cond = cond(st);
    bool then_may_raise = chance(0.5);
    ListOut a = list(st, l, depth + 1, then_may_raise, false);
    ListOut b = list(st, l, depth + 1, !then_may_raise, false);
    n.then_blocks = std::move(a.blocks);
    n.else_blocks = std::move(b.blocks);
    if (a.raises) st = b.state;
    else if (b.raises) st = a.state;
    else st = join(st, a.state, a.exit, b.state, b.exit, n.join_phis);
    return {l, std::move(n), {}};
  }

  s::Block while_block(State& st, const s::Label& pred, int depth, const std::string& counter) {
    s::Label l = label();
    std::vector<std::string> carried{counter};
    for (const auto& [name, v] : st)
      if (name != counter && name[0] == 'v' && chance(0.5)) carried.push_back(name);

    State head = st;
    std::map<std::string, std::string> hv;
    for (const auto& name : carried) {
      hv[name] = version(name);
      head[name] = hv[name];
    }
    s::While w;
    w.cond = s::make_binop("<", s::make_var(hv[counter]), s::make_int(1 + pick(o_.max_loop)));
    ListOut body = list(head, l, depth + 1, false, false);
    // Closing block computes the next value of every carried variable.
    s::Label lb = label();
    s::Assigns close;
    std::map<std::string, std::string> next;
    for (const auto& name : carried) {
      next[name] = version(name);
      s::Expr e = name == counter ? s::make_binop("+", s::make_var(body.state.at(counter)), s::make_int(1))
                                  : int_expr(body.state);
      close.items.push_back(assign(next[name], std::move(e)));
    }
    w.body = std::move(body.blocks);
    w.body.push_back({lb, std::move(close), {}});
    for (const auto& name : carried) w.phis.push_back(phi(hv[name], {{pred, st.at(name)}, {lb, next[name]}}));
    for (const auto& name : carried) st[name] = hv[name];
    return {l, std::move(w), {}};
  }

  s::Block try_block(State& st, const s::Label&, int depth, bool allow_raise, bool& raised) {
    s::Label l = label();
    s::TryCatch t;
    TryCtx ctx;
    tries_.push_back(&ctx);
    ListOut body = list(st, l, depth + 1, true, false);
    tries_.pop_back();
    t.try_blocks = std::move(body.blocks);

    State cst = st;
    if (!ctx.calls && !ctx.throws.empty()) {
      for (const auto& [name, v] : st) {
        if (!chance(0.6)) continue;
        std::vector<std::pair<s::Label, std::string>> ops;
        for (const auto& [lab, snap] : ctx.throws) ops.push_back({lab, snap.at(name)});
        std::string rv = version(name);
        t.raise_phis.push_back(phi(rv, std::move(ops)));
        cst[name] = rv;
      }
    }
    t.exn_type = s::TypeName::exception();
    t.exn_var = "e" + std::to_string(++exn_);
    ListOut handler = list(cst, l, depth + 1, allow_raise, true);
    t.catch_blocks = std::move(handler.blocks);

    if (body.raises && handler.raises) {
      raised = true;
    } else if (body.raises) {
      st = handler.state;
    } else if (handler.raises) {
      st = body.state;
    } else {
      st = join(st, body.state, body.exit, handler.state, handler.exit, t.join_phis);
    }
    return {l, std::move(t), {}};
  }

  std::mt19937_64& rng_;
  GenOptions o_;
  int labels_ = 0;
  int loops_ = 0;
  int exn_ = 0;
  std::map<std::string, int> versions_;
  std::vector<s::VarDecl> locals_;
  std::vector<TryCtx*> tries_;
  std::vector<Callee> callees_;
  std::vector<std::string> helper_methods_;
  bool in_helper_ = false;
};

}  // namespace

s::SourceProgram random_program(std::mt19937_64& rng, const GenOptions& opts) { return Gen(rng, opts).program(); }

std::vector<report::Sequence> random_inputs(std::mt19937_64& rng, int sequences) {
  std::uniform_int_distribution<int> small(-2, 6);
  std::uniform_int_distribution<int> len(1, 3);
  std::vector<report::Sequence> out;
  for (int i = 0; i < sequences; ++i) {
    report::Sequence seq;
    seq.cls = "Main";
    seq.state["f1"] = Value::int_(small(rng));
    seq.state["f2"] = Value::int_(small(rng));
    int n = len(rng);
    for (int j = 0; j < n; ++j) seq.calls.push_back({"m0", Value::int_(small(rng))});
    out.push_back(std::move(seq));
  }
  return out;
}

s::SourceProgram multi_entry_program(int throws) {
  int next_label = 0;
  auto label = [&] { return "L" + std::to_string(++next_label); };
  std::vector<s::VarDecl> locals;
  auto local = [&](const std::string& n) {
    locals.push_back({s::TypeName::int_(), n, {}});
    return n;
  };

  std::vector<s::Block> body;
  std::string a = local("a_1");
  s::Assigns first;
  first.items.push_back(assign(a, s::make_var("x")));
  body.push_back({label(), std::move(first), {}});

  s::TryCatch t;
  s::Label lt = label();
  std::vector<std::pair<s::Label, std::string>> raise_versions;
  for (int i = 0; i < throws; ++i) {
    s::Label li = label();
    s::IfElse n;
    n.cond = s::make_binop("==", s::make_var("x"), s::make_int(i));
    s::Label lthrow = label();
    n.then_blocks.push_back({lthrow, s::Throw{new_exception()}, {}});
    raise_versions.push_back({lthrow, a});
    std::string a2 = local("a_" + std::to_string(i + 2));
    s::Assigns inc;
    inc.items.push_back(assign(a2, s::make_binop("+", s::make_var(a), s::make_int(1))));
    n.else_blocks.push_back({label(), std::move(inc), {}});
    a = a2;
    t.try_blocks.push_back({li, std::move(n), {}});
  }
  std::string rt = local("r_t");
  s::Assigns fin;
  fin.items.push_back(assign(rt, s::make_var(a)));
  s::Label lfin = label();
  t.try_blocks.push_back({lfin, std::move(fin), {}});

  t.exn_type = s::TypeName::exception();
  t.exn_var = "e";
  s::While w;
  s::Label lw = label();
  std::string wh = local("w_h"), wn = local("w_n");
  w.cond = s::make_binop("<", s::make_var(wh), s::make_int(10));
  s::Label lb = label();
  s::Assigns step;
  step.items.push_back(assign(wn, s::make_binop("+", s::make_var(wh), s::make_int(3))));
  step.items.push_back({s::Print{s::make_binop("+", s::make_str("w"), s::make_var(wh))}, {}});
  w.body.push_back({lb, std::move(step), {}});
  auto ops = raise_versions;
  ops.push_back({lb, wn});
  w.phis.push_back(phi(wh, std::move(ops)));
  t.catch_blocks.push_back({lw, std::move(w), {}});
  std::string rc = local("r_c");
  s::Assigns after;
  after.items.push_back(assign(rc, s::make_var(wh)));
  s::Label lz = label();
  t.catch_blocks.push_back({lz, std::move(after), {}});
  std::string r = local("r");
  t.join_phis.push_back(phi(r, {{lfin, rt}, {lz, rc}}));
  body.push_back({lt, std::move(t), {}});
  body.push_back({label(), s::Return{s::make_var(r)}, {}});

  s::SourceMethod m{s::TypeName::int_(), "m0", {s::TypeName::int_(), "x", {}}, locals, std::move(body), {}};
  s::SourceClass c{"Main", {{s::TypeName::int_(), "f1", {}}, {s::TypeName::int_(), "f2", {}}}, {std::move(m)}, {}};
  s::SourceProgram p;
  p.classes.push_back(std::move(c));
  return p;
}

}  // namespace fjobf::testing
