#include <deque>

#include "fjobf/cfa.hpp"

namespace fjobf::cfa {

namespace t = fjobf::target;

CallString push_site(const CallString& c, SiteId s, int k) {
  CallString out;
  if (k <= 0) return out;
  out.push_back(s);
  for (const auto& x : c) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(x);
  }
  return out;
}

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::True: return "t";
    case Tag::False: return "f";
    default: return "";
  }
}

std::set<int> AnalysisResult::points_to(const VarId& v) const {
  std::set<int> out;
  for (auto it = store.lower_bound(VarKey{v, {}}); it != store.end() && it->first.var == v; ++it)
    for (const auto& c : it->second) out.insert(c.callable);
  return out;
}

std::map<CallString, std::set<int>> AnalysisResult::points_to_by_context(const VarId& v) const {
  std::map<CallString, std::set<int>> out;
  for (auto it = store.lower_bound(VarKey{v, {}}); it != store.end() && it->first.var == v; ++it) {
    auto& s = out[it->first.ctx];
    for (const auto& c : it->second) s.insert(c.callable);
  }
  return out;
}

std::set<VarId> AnalysisResult::variables() const {
  std::set<VarId> out;
  for (const auto& [k, v] : store) out.insert(k.var);
  return out;
}

namespace {

class Solver {
 public:
  Solver(const t::ProgramIndex& ix, int k) : ix_(ix), k_(k) {
    r_.k = k;
    for (int i = 0; i < ix.size(); ++i) {
      const auto& c = ix.at(i);
      if (c.kind == t::Callable::Kind::Lambda) continue;
      const auto& fv = ix.frame_vars(i);
      frame_[i] = std::set<std::string>(fv.begin(), fv.end());
    }
  }

  AnalysisResult run() {
    for (int i = 0; i < ix_.size(); ++i) {
      if (ix_.at(i).kind != t::Callable::Kind::Method) continue;
      Activation a{i, {CallString{}}};
      r_.reached.insert(a);
      enqueue(a);
    }
    while (!work_.empty()) {
      Activation a = work_.front();
      work_.pop_front();
      queued_.erase(a);
      process(a);
      ++r_.iterations;
    }
    return std::move(r_);
  }

  bool stable_round(const AnalysisResult& r) {
    r_ = r;
    for (const auto& a : r.reached) process(a);
    return r_ == r;
  }

 private:
  const t::ProgramIndex& ix_;
  int k_;
  AnalysisResult r_;
  std::map<int, std::set<std::string>> frame_;
  std::deque<Activation> work_;
  std::set<Activation> queued_;
  std::map<VarKey, std::set<Activation>> readers_;
  std::map<Activation, std::set<Activation>> ret_readers_;

  Activation cur_;
  int ordinal_ = 0;
  SiteId site_;
  Tag tag_ = Tag::Plain;

  void enqueue(const Activation& a) {
    if (queued_.insert(a).second) work_.push_back(a);
  }

  void join_into(AbsSet& dst, const AbsSet& src, const std::set<Activation>& dependents) {
    bool grew = false;
    for (const auto& v : src) grew |= dst.insert(v).second;
    if (grew)
      for (const auto& d : dependents) enqueue(d);
  }

  void write(const VarKey& key, const AbsSet& v) {
    if (v.empty()) {
      r_.store.try_emplace(key);
      return;
    }
    join_into(r_.store[key], v, readers_[key]);
  }

  std::optional<VarKey> resolve(const std::string& name) const {
    int c = cur_.callable;
    std::size_t depth = 0;
    while (c >= 0 && depth < cur_.env.size()) {
      const auto& cc = ix_.at(c);
      if (cc.kind == t::Callable::Kind::Lambda) {
        for (const auto& p : cc.params())
          if (p.name == name) return VarKey{{c, name}, cur_.env[depth]};
        c = cc.parent;
        ++depth;
      } else {
        if (frame_.at(c).count(name)) return VarKey{{c, name}, cur_.env[depth]};
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  AbsSet read(const std::string& name) {
    if (auto key = resolve(name)) {
      readers_[*key].insert(cur_);
      auto it = r_.store.find(*key);
      return it == r_.store.end() ? AbsSet{} : it->second;
    }
    if (int f = ix_.function_id(name); f >= 0) return {AbsClosure{f, {}}};
    return {};
  }

  void process(const Activation& a) {
    cur_ = a;
    ordinal_ = 0;
    const auto& c = ix_.at(a.callable);
    if (c.kind != t::Callable::Kind::Lambda) {
      for (const auto& l : c.method->locals)
        if (l.init)
          write(VarKey{{a.callable, l.name}, a.env[0]}, {AbsClosure{ix_.lambda_id(l.init->get()), a.env}});
    }
    exec(c.body(), Tag::Plain);
  }

  void exec(const std::vector<t::Stmt>& ss, Tag tag) {
    for (const auto& s : ss) {
      site_ = SiteId{cur_.callable, ordinal_++};
      tag_ = tag;
      r_.sites[site_] = SiteInfo{cur_.callable, s.pos.line, tag};
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, t::Assign>) {
              AbsSet v = eval(n.value);
              if (auto key = resolve(n.var)) write(*key, v);
            } else if constexpr (std::is_same_v<T, t::FieldAssign>) {
              eval(n.obj);
              eval(n.value);
            } else if constexpr (std::is_same_v<T, t::Return>) {
              AbsSet v = n.value ? eval(*n.value) : AbsSet{};
              join_into(r_.returns[cur_], v, ret_readers_[cur_]);
            } else if constexpr (std::is_same_v<T, t::IfElse>) {
              eval(n.cond);
              exec(n.then_body, Tag::True);
              exec(n.else_body, Tag::False);
            } else if constexpr (std::is_same_v<T, t::ExprStmt>) {
              eval(n.expr);
            } else {
              eval(n.value);
            }
          },
          s.node);
    }
  }

  AbsSet call(int callee, const Env& captured, const std::vector<AbsSet>& args) {
    const auto& cc = ix_.at(callee);
    CallString n = push_site(cur_.env.empty() ? CallString{} : cur_.env[0], site_, k_);
    Env env{n};
    if (cc.kind == t::Callable::Kind::Lambda) env.insert(env.end(), captured.begin(), captured.end());
    const auto& params = cc.params();
    for (std::size_t i = 0; i < params.size() && i < args.size(); ++i) write(VarKey{{callee, params[i].name}, n}, args[i]);

    r_.site_callees[site_].insert(callee);
    auto& recorded = r_.site_args[{site_, callee}];
    if (recorded.size() < args.size()) recorded.resize(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) recorded[i].insert(args[i].begin(), args[i].end());
    r_.edges.insert(CallEdge{cur_.callable, callee, tag_});

    Activation a{callee, env};
    if (r_.reached.insert(a).second) enqueue(a);
    ret_readers_[a].insert(cur_);
    auto it = r_.returns.find(a);
    return it == r_.returns.end() ? AbsSet{} : it->second;
  }

  std::vector<int> method_targets(const t::MethodCall& m) {
    std::string cls;
    if (std::holds_alternative<t::This>(m.recv->node)) cls = ix_.at(ix_.at(cur_.callable).top).cls;
    if (auto* nw = std::get_if<t::New>(&m.recv->node)) cls = nw->type.str();
    if (!cls.empty())
      if (int id = ix_.method_id(cls, m.method); id >= 0) return {id};
    return ix_.methods_named(m.method);
  }

  AbsSet eval(const t::Expr& e) {
    return std::visit(
        [&](const auto& n) -> AbsSet {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, t::Var>) {
            return read(n.name);
          } else if constexpr (std::is_same_v<T, t::LambdaExpr>) {
            return {AbsClosure{ix_.lambda_id(n.lam.get()), cur_.env}};
          } else if constexpr (std::is_same_v<T, t::Apply>) {
            AbsSet fns = eval(*n.fn);
            std::vector<AbsSet> args;
            for (const auto& a : n.args) args.push_back(eval(a));
            AbsSet out;
            for (const auto& f : fns) {
              AbsSet r = call(f.callable, f.env, args);
              out.insert(r.begin(), r.end());
            }
            return out;
          } else if constexpr (std::is_same_v<T, t::MethodCall>) {
            eval(*n.recv);
            AbsSet arg = eval(*n.arg);
            AbsSet out;
            for (int m : method_targets(n)) {
              AbsSet r = call(m, {}, {arg});
              out.insert(r.begin(), r.end());
            }
            return out;
          } else if constexpr (std::is_same_v<T, t::FieldAccess>) {
            eval(*n.obj);
            return {};
          } else if constexpr (std::is_same_v<T, t::BinOp>) {
            eval(*n.lhs);
            eval(*n.rhs);
            return {};
          } else {
            return {};
          }
        },
        e.node);
  }
};

std::set<int> ids(const AbsSet& s) {
  std::set<int> out;
  for (const auto& c : s) out.insert(c.callable);
  return out;
}

}  // namespace

AnalysisResult solve(const t::ProgramIndex& index, int k) { return Solver(index, k < 0 ? 0 : k).run(); }
AnalysisResult solve_0cfa(const t::ProgramIndex& index) { return solve(index, 0); }
AnalysisResult solve_kcfa(const t::ProgramIndex& index, int k) { return solve(index, k); }

bool is_fixpoint(const t::ProgramIndex& index, const AnalysisResult& r) {
  return Solver(index, r.k).stable_round(r);
}

std::set<SiteId> callers(const AnalysisResult& r, int callable) {
  std::set<SiteId> out;
  for (const auto& [site, callees] : r.site_callees)
    if (callees.count(callable)) out.insert(site);
  return out;
}

// ---- statement-level view ----------------------------------------------------

bool leq(const AbstractState& a, const AbstractState& b) {
  for (const auto& [x, s] : a) {
    if (s.empty()) continue;
    auto it = b.find(x);
    if (it == b.end()) return false;
    for (int v : s)
      if (!it->second.count(v)) return false;
  }
  return true;
}

AbstractState join(const AbstractState& a, const AbstractState& b) {
  AbstractState out = a;
  for (const auto& [x, s] : b) out[x].insert(s.begin(), s.end());
  return out;
}

std::set<int> abstract_eval(const t::ProgramIndex& index, const AbstractState& sigma, const t::Expr& e) {
  if (auto* l = std::get_if<t::LambdaExpr>(&e.node)) return {index.lambda_id(l->lam.get())};
  if (auto* v = std::get_if<t::Var>(&e.node)) {
    if (auto it = sigma.find(v->name); it != sigma.end()) return it->second;
    if (int f = index.function_id(v->name); f >= 0) return {f};
  }
  return {};
}

ReturnTable return_table(const AnalysisResult& r) {
  ReturnTable out;
  for (const auto& [a, s] : r.returns) {
    auto& dst = out.returns[a.callable];
    for (const auto& c : s) dst.insert(c.callable);
  }
  return out;
}

AbstractState flow(const t::ProgramIndex& index, const t::Stmt& s, const AbstractState& sigma,
                   const ReturnTable& rets) {
  const auto* a = std::get_if<t::Assign>(&s.node);
  if (!a) return sigma;
  std::set<int> value;
  const t::Expr& e = a->value;
  if (auto* app = std::get_if<t::Apply>(&e.node)) {
    for (int g : abstract_eval(index, sigma, *app->fn))
      if (auto it = rets.returns.find(g); it != rets.returns.end()) value.insert(it->second.begin(), it->second.end());
  } else if (auto* mc = std::get_if<t::MethodCall>(&e.node)) {
    if (auto it = rets.methods.find(mc->method); it != rets.methods.end()) value = it->second;
    for (int m : index.methods_named(mc->method))
      if (auto it = rets.returns.find(m); it != rets.returns.end()) value.insert(it->second.begin(), it->second.end());
  } else {
    value = abstract_eval(index, sigma, e);
  }
  AbstractState out = sigma;
  out[a->var] = std::move(value);
  return out;
}

AbstractState flow_lambda(const t::ProgramIndex& index, const AnalysisResult& r, int callable) {
  AbstractState out;
  const auto& params = index.at(callable).params();
  for (const auto& [key, args] : r.site_args) {
    if (key.second != callable) continue;
    for (std::size_t i = 0; i < params.size() && i < args.size(); ++i) {
      auto s = ids(args[i]);
      out[params[i].name].insert(s.begin(), s.end());
    }
  }
  return out;
}

AbstractState join_at(const t::ProgramIndex& index, const AnalysisResult& r, SiteId site) {
  AbstractState out;
  int c = site.callable;
  while (c >= 0) {
    const auto& cc = index.at(c);
    if (cc.kind == t::Callable::Kind::Lambda) {
      for (const auto& p : cc.params()) out.emplace(p.name, r.points_to({c, p.name}));
      c = cc.parent;
    } else {
      for (const auto& v : index.frame_vars(c)) out.emplace(v, r.points_to({c, v}));
      break;
    }
  }
  return out;
}

// ---- naming ------------------------------------------------------------------

std::map<VarId, std::string> variable_names(const t::ProgramIndex& index) {
  std::vector<VarId> all;
  for (int i = 0; i < index.size(); ++i) {
    const auto& c = index.at(i);
    if (c.kind == t::Callable::Kind::Lambda) {
      for (const auto& p : c.params()) all.push_back({i, p.name});
    } else {
      for (const auto& v : index.frame_vars(i))
        if (v != "this") all.push_back({i, v});
    }
  }
  std::map<std::string, int> count;
  for (const auto& v : all) count[v.name]++;
  std::map<VarId, std::string> out;
  for (const auto& v : all) out[v] = count[v.name] > 1 ? v.name + "@" + index.at(v.owner).display : v.name;
  return out;
}

std::string display_site(const AnalysisResult& r, SiteId s) {
  auto it = r.sites.find(s);
  return it == r.sites.end() ? "?" : std::to_string(it->second.line);
}

std::string display_context(const AnalysisResult& r, const CallString& c) {
  if (c.empty()) return "root";
  std::string out;
  for (const auto& s : c) {
    if (!out.empty()) out += ",";
    out += display_site(r, s);
  }
  return out;
}

}  // namespace fjobf::cfa
