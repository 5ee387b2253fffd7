#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "fjobf/source_ast.hpp"

namespace fjobf::source {
namespace {

bool ends_in_return(const std::vector<Block>& bs) {
  if (bs.empty()) return false;
  const BlockBody& last = bs.back().body;
  if (std::holds_alternative<Return>(last)) return true;
  if (auto* i = std::get_if<IfElse>(&last)) return ends_in_return(i->then_blocks) && ends_in_return(i->else_blocks);
  if (auto* t = std::get_if<TryCatch>(&last)) return ends_in_return(t->try_blocks) && ends_in_return(t->catch_blocks);
  return false;
}

class Validator {
 public:
  Validator(std::vector<Violation>& out, ValidateOptions opts) : out_(out), opts_(opts) {}

  void program(const SourceProgram& p) {
    std::set<std::string> classes;
    for (const auto& c : p.classes) {
      if (!classes.insert(c.name).second) add("unique-names", "duplicate class " + c.name, c.pos);
      std::set<std::string> fields, methods;
      for (const auto& f : c.fields)
        if (!fields.insert(f.name).second) add("unique-names", "duplicate field " + c.name + "." + f.name, f.pos);
      for (const auto& m : c.methods) {
        if (!methods.insert(m.name).second)
          add("unique-names", "duplicate method " + c.name + "." + m.name, m.pos);
        method(m);
      }
    }
  }

 private:
  std::vector<Violation>& out_;
  ValidateOptions opts_;
  std::set<Label> labels_;

  void add(std::string rule, std::string msg, Pos pos) { out_.push_back({std::move(rule), std::move(msg), pos}); }

  void method(const SourceMethod& m) {
    labels_.clear();
    for_each_block(m.body, [&](const Block& b) {
      if (!labels_.insert(b.label).second) add("unique-labels", "duplicate label " + b.label, b.pos);
    });
    if (!ends_in_return(m.body)) {
      Pos p = m.body.empty() ? m.pos : m.body.back().pos;
      add("last-block-return", "last block of " + m.name + " does not return", p);
    }
    std::map<std::string, int> counts;
    counts[m.param.name]++;
    for (const auto& v : assigned_vars(m)) counts[v]++;
    for (const auto& [v, n] : counts)
      if (n > 1) add("single-assignment", v + " is assigned " + std::to_string(n) + " times in " + m.name, m.pos);
    for_each_block(m.body, [&](const Block& b) { phis_of(b); });
  }

  void phis_of(const Block& b) {
    if (auto* t = std::get_if<TryCatch>(&b.body)) {
      check_phis(t->raise_phis);
      check_phis(t->join_phis);
    } else if (auto* w = std::get_if<While>(&b.body)) {
      check_phis(w->phis);
      if (opts_.while_arity)
        for (const auto& p : w->phis)
          if (p.operands.size() != 2)
            add("while-phi-arity",
                "while phi for " + p.target + " has " + std::to_string(p.operands.size()) + " operands", p.pos);
    } else if (auto* i = std::get_if<IfElse>(&b.body)) {
      check_phis(i->join_phis);
    }
  }

  void check_phis(const std::vector<Phi>& ps) {
    for (const auto& p : ps) {
      std::set<Label> seen;
      for (const auto& [lab, var] : p.operands) {
        if (lab != "L0" && !labels_.count(lab))
          add("phi-label-resolution", "phi for " + p.target + " names unknown label " + lab, p.pos);
        if (!seen.insert(lab).second)
          add("phi-label-resolution", "phi for " + p.target + " repeats label " + lab, p.pos);
      }
    }
  }
};

// Rewrites catch handlers whose first block is a while with more than two
// entry labels. See the `Lk: { }` form in docs/grammar.md.
class Preprocessor {
 public:
  explicit Preprocessor(SourceMethod& m) : m_(m) {
    for_each_block(m.body, [&](const Block& b) { labels_.insert(b.label); });
  }

  void run() { walk(m_.body); }

 private:
  SourceMethod& m_;
  std::set<Label> labels_;

  Label fresh_label() {
    int max = 0;
    for (const auto& l : labels_) {
      if (l.size() < 2 || l[0] != 'L') continue;
      bool digits = true;
      for (std::size_t i = 1; i < l.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(l[i]));
      if (digits) max = std::max(max, std::stoi(l.substr(1)));
    }
    Label l;
    do {
      l = "L" + std::to_string(++max);
    } while (labels_.count(l));
    labels_.insert(l);
    return l;
  }

  TypeName type_of(const std::string& v, const std::vector<std::string>& fallbacks) const {
    auto find = [&](const std::string& n) -> std::optional<TypeName> {
      if (m_.param.name == n) return m_.param.type;
      for (const auto& d : m_.locals)
        if (d.name == n) return d.type;
      return std::nullopt;
    };
    if (auto t = find(v)) return *t;
    for (const auto& f : fallbacks)
      if (auto t = find(f)) return *t;
    return TypeName::int_();
  }

  std::string fresh_var(const std::string& base) {
    std::set<std::string> used{m_.param.name};
    for (const auto& d : m_.locals) used.insert(d.name);
    for (const auto& v : assigned_vars(m_)) used.insert(v);
    std::string n = base;
    for (int i = 2; used.count(n); ++i) n = base + "_" + std::to_string(i);
    return n;
  }

  void walk(std::vector<Block>& bs) {
    for (auto& b : bs) {
      if (auto* t = std::get_if<TryCatch>(&b.body)) {
        walk(t->try_blocks);
        fix_handler(*t);
        walk(t->catch_blocks);
      } else if (auto* w = std::get_if<While>(&b.body)) {
        walk(w->body);
      } else if (auto* i = std::get_if<IfElse>(&b.body)) {
        walk(i->then_blocks);
        walk(i->else_blocks);
      }
    }
  }

  void fix_handler(TryCatch& t) {
    if (t.catch_blocks.empty()) return;
    auto* w = std::get_if<While>(&t.catch_blocks.front().body);
    if (!w) return;
    bool needs = false;
    for (const auto& p : w->phis) needs = needs || p.operands.size() > 2;
    if (!needs) return;
    std::set<Label> inner;
    for_each_block(w->body, [&](const Block& b) { inner.insert(b.label); });
    Label lk = fresh_label();
    for (auto& p : w->phis) {
      std::vector<std::pair<Label, std::string>> entry, back;
      for (auto& op : p.operands) (inner.count(op.first) ? back : entry).push_back(op);
      if (entry.size() <= 1) continue;
      std::vector<std::string> entry_vars;
      for (const auto& e : entry) entry_vars.push_back(e.second);
      std::string xk = fresh_var(p.target + "_" + lk);
      m_.locals.push_back({type_of(p.target, entry_vars), xk, p.pos});
      t.raise_phis.push_back(Phi{xk, entry, p.pos});
      std::vector<std::pair<Label, std::string>> ops{{lk, xk}};
      ops.insert(ops.end(), back.begin(), back.end());
      p.operands = std::move(ops);
    }
    Block empty{lk, Assigns{}, t.catch_blocks.front().pos};
    t.catch_blocks.insert(t.catch_blocks.begin(), std::move(empty));
  }
};

}  // namespace

std::vector<Violation> validate(const SourceProgram& p, ValidateOptions opts) {
  std::vector<Violation> out;
  Validator(out, opts).program(p);
  return out;
}

SourceProgram preprocess_while_entries(const SourceProgram& p) {
  SourceProgram out = p;
  for (auto& c : out.classes)
    for (auto& m : c.methods) Preprocessor(m).run();
  return out;
}

}  // namespace fjobf::source
