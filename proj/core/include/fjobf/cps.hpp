#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fjobf/source_ast.hpp"
#include "fjobf/target_ast.hpp"

// SSAFJ-EH to FJ_lambda translation in continuation-passing style.
namespace fjobf::cps {

struct PhiPair {
  std::string var;
  target::Expr value;
  bool operator==(const PhiPair&) const = default;
};

// Lambda declarations produced for a block list, plus the expression that
// runs them.
struct TransResult {
  std::vector<target::LocalDecl> decls;
  target::Expr main;
};

struct TranslateOptions {
  bool flatten = true;
  bool prelude = true;
};

// Resolved `x := x_i` pairs in phi order. Every phi must name `l`.
std::vector<PhiPair> resolve_phi_pairs(const std::vector<source::Phi>& phis, const source::Label& l);

// Translation state for one method: fresh names, binder names, the types of
// source variables and the label order used by min_label.
class TransContext {
 public:
  TransContext(const source::SourceProgram& prog, const source::SourceClass& cls, const source::SourceMethod& md);

  TransResult translate_blocks(const std::vector<source::Block>& blocks, const std::vector<source::Phi>& phi_k,
                               const std::vector<source::Phi>& phi_r, const source::Label& pred);
  // Connector lambda performing the phi moves for `l`, then k(). Strict.
  TransResult translate_jump(const std::vector<source::Phi>& phis, const source::Label& l);

  target::Expr translate_expr(const source::Expr& e) const;

  // Frame locals of the emitted methods, except the block lambdas.
  std::vector<target::LocalDecl> plain_locals() const;

  const std::string& raise_name() const { return raise_; }
  const std::string& k_name() const { return k_; }
  const std::string& in_name() const { return in_; }
  const std::string& v_name() const { return v_; }
  const std::string& r_name() const { return r_; }
  std::string fresh(const std::string& base);
  source::TypeName type_of_var(const std::string& v) const;

 private:
  const source::SourceProgram& prog_;
  const source::SourceClass& cls_;
  const source::SourceMethod& md_;
  std::map<source::Label, int> order_;
  std::set<std::string> used_;
  std::map<std::string, source::TypeName> types_;
  std::vector<std::string> declared_;  // plain locals in declaration order
  std::string raise_, k_, in_, v_, r_, e_;

  source::TypeName infer(const source::Expr& e) const;
  std::string block_name(const source::Label& l, bool connector);
  target::Lambda cps_lambda(std::vector<target::Stmt> body) const;
  std::vector<target::Stmt> moves(const std::vector<PhiPair>& pairs);
  std::vector<PhiPair> lenient_pairs(const std::vector<source::Phi>& phis, const source::Label& l) const;
  TransResult connector(const std::vector<PhiPair>& pairs, const source::Label& l);
  std::vector<target::Stmt> translate_assigns(const std::vector<source::Assignment>& as) const;
  source::TypeName call_type(const source::MethodCall& c) const;
};

// The wrapper method `m` and its CPS entry `m_cps`.
std::vector<target::TargetMethod> translate_method(const source::SourceProgram& prog, const source::SourceClass& cls,
                                                   const source::SourceMethod& md);

target::TargetProgram translate_program(const source::SourceProgram& prog, TranslateOptions opts = {});

// loop, seq, trycatch, ifelse and id_raise.
std::vector<target::TargetMethod> emit_prelude();
const std::string& prelude_text();

// Splits nested and curried applications into single applications bound
// to fresh locals. Idempotent.
target::TargetMethod flatten(const target::TargetMethod& md,
                             const std::vector<target::TargetMethod>& functions = emit_prelude());
target::TargetProgram flatten_program(const target::TargetProgram& p);

// Structural shape problems of CPS block lambdas; empty when well formed.
std::vector<std::string> check_cps_shapes(const target::TargetProgram& p);

}  // namespace fjobf::cps
