#include "fjobf/source_ast.hpp"

#include <set>

namespace fjobf::source {

std::string TypeName::str() const {
  switch (kind) {
    case Kind::Int: return "int";
    case Kind::Bool: return "bool";
    case Kind::Void: return "void";
    case Kind::Exception: return "Exception";
    case Kind::Class: return cls;
  }
  return "?";
}

Expr make_int(std::int64_t v, Pos p) {
  Const c;
  c.kind = Const::Kind::Int;
  c.i = v;
  return Expr{c, p};
}

Expr make_bool(bool v, Pos p) {
  Const c;
  c.kind = Const::Kind::Bool;
  c.b = v;
  return Expr{c, p};
}

Expr make_str(std::string s, Pos p) {
  Const c;
  c.kind = Const::Kind::Str;
  c.s = std::move(s);
  return Expr{c, p};
}

Expr make_var(std::string n, Pos p) { return Expr{Var{std::move(n)}, p}; }

Expr make_binop(std::string op, Expr l, Expr r, Pos p) {
  return Expr{BinOp{std::move(op), Box<Expr>(std::move(l)), Box<Expr>(std::move(r))}, p};
}

const std::string* Phi::operand_for(const Label& l) const {
  for (const auto& [lab, var] : operands)
    if (lab == l) return &var;
  return nullptr;
}

bool TryCatch::operator==(const TryCatch& o) const {
  return try_blocks == o.try_blocks && raise_phis == o.raise_phis && exn_type == o.exn_type &&
         exn_var == o.exn_var && catch_blocks == o.catch_blocks && join_phis == o.join_phis;
}

bool While::operator==(const While& o) const {
  return phis == o.phis && cond == o.cond && body == o.body;
}

bool IfElse::operator==(const IfElse& o) const {
  return cond == o.cond && then_blocks == o.then_blocks && else_blocks == o.else_blocks &&
         join_phis == o.join_phis;
}

const SourceMethod* SourceClass::find_method(std::string_view n) const {
  for (const auto& m : methods)
    if (m.name == n) return &m;
  return nullptr;
}

const SourceClass* SourceProgram::find_class(std::string_view n) const {
  for (const auto& c : classes)
    if (c.name == n) return &c;
  return nullptr;
}

const char* block_kind_name(const BlockBody& b) {
  static const char* names[] = {"assigns", "return", "throw", "call", "try", "while", "if"};
  return names[b.index()];
}

void for_each_block(const std::vector<Block>& blocks, const std::function<void(const Block&)>& fn) {
  for (const auto& b : blocks) {
    fn(b);
    if (auto* t = std::get_if<TryCatch>(&b.body)) {
      for_each_block(t->try_blocks, fn);
      for_each_block(t->catch_blocks, fn);
    } else if (auto* w = std::get_if<While>(&b.body)) {
      for_each_block(w->body, fn);
    } else if (auto* i = std::get_if<IfElse>(&b.body)) {
      for_each_block(i->then_blocks, fn);
      for_each_block(i->else_blocks, fn);
    }
  }
}

std::map<Label, int> label_order(const SourceMethod& m) {
  std::map<Label, int> out;
  int n = 0;
  for_each_block(m.body, [&](const Block& b) { out.emplace(b.label, n++); });
  return out;
}

Label min_label(const std::vector<Phi>& phis, const std::map<Label, int>& order) {
  if (phis.empty()) throw Error(ErrorKind::Translate, "min_label on an empty phi list");
  // A label that is not a block (the method entry L0) precedes everything.
  auto rank = [&](const Label& l) {
    auto it = order.find(l);
    return it == order.end() ? -1 : it->second;
  };
  std::optional<Label> entry;
  for (const auto& phi : phis) {
    if (phi.operands.empty()) throw Error(ErrorKind::Translate, "phi without operands", phi.pos);
    const Label* best = &phi.operands.front().first;
    for (const auto& op : phi.operands)
      if (rank(op.first) < rank(*best)) best = &op.first;
    if (entry && *entry != *best)
      throw Error(ErrorKind::Translate,
                  "while phis disagree on the entry label (" + *entry + " vs " + *best + ")", phi.pos);
    entry = *best;
  }
  return *entry;
}

std::vector<std::string> assigned_vars(const SourceMethod& m) {
  std::vector<std::string> out;
  auto phis = [&](const std::vector<Phi>& ps) {
    for (const auto& p : ps) out.push_back(p.target);
  };
  for_each_block(m.body, [&](const Block& b) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Assigns>) {
            for (const auto& a : s.items)
              if (auto* va = std::get_if<VarAssign>(&a.node)) out.push_back(va->var);
          } else if constexpr (std::is_same_v<T, MethodCall>) {
            out.push_back(s.target);
          } else if constexpr (std::is_same_v<T, TryCatch>) {
            phis(s.raise_phis);
            out.push_back(s.exn_var);
            phis(s.join_phis);
          } else if constexpr (std::is_same_v<T, While>) {
            phis(s.phis);
          } else if constexpr (std::is_same_v<T, IfElse>) {
            phis(s.join_phis);
          }
        },
        b.body);
  });
  return out;
}

}  // namespace fjobf::source
