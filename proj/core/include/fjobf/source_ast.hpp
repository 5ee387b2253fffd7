#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fjobf/common.hpp"

// SSAFJ-EH: Featherweight Java in SSA form with structured control flow,
// phi assignments and exceptions.
namespace fjobf::source {

struct TypeName {
  enum class Kind { Int, Bool, Void, Class, Exception };
  Kind kind = Kind::Int;
  std::string cls;  // only for Kind::Class

  static TypeName int_() { return {Kind::Int, {}}; }
  static TypeName bool_() { return {Kind::Bool, {}}; }
  static TypeName void_() { return {Kind::Void, {}}; }
  static TypeName exception() { return {Kind::Exception, {}}; }
  static TypeName class_(std::string n) { return {Kind::Class, std::move(n)}; }

  std::string str() const;
  bool operator==(const TypeName&) const = default;
};

using Label = std::string;

struct Const {
  enum class Kind { Int, Bool, Str, Null };
  Kind kind = Kind::Null;
  std::int64_t i = 0;
  bool b = false;
  std::string s;
  bool operator==(const Const&) const = default;
};

struct Expr;

struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct This {
  bool operator==(const This&) const = default;
};
struct New {
  TypeName type;
  bool operator==(const New&) const = default;
};
struct FieldAccess {
  Box<Expr> obj;
  std::string field;
  bool operator==(const FieldAccess&) const = default;
};
struct BinOp {
  std::string op;
  Box<Expr> lhs, rhs;
  bool operator==(const BinOp&) const = default;
};

struct Expr {
  std::variant<Const, Var, FieldAccess, New, This, BinOp> node;
  Pos pos;
  bool operator==(const Expr&) const = default;
};

Expr make_int(std::int64_t v, Pos p = {});
Expr make_bool(bool v, Pos p = {});
Expr make_str(std::string s, Pos p = {});
Expr make_var(std::string n, Pos p = {});
Expr make_binop(std::string op, Expr l, Expr r, Pos p = {});

struct VarAssign {
  std::string var;
  Expr value;
  bool operator==(const VarAssign&) const = default;
};
struct FieldAssign {
  Expr obj;
  std::string field;
  Expr value;
  bool operator==(const FieldAssign&) const = default;
};
// Built-in System.out.println(e).
struct Print {
  Expr value;
  bool operator==(const Print&) const = default;
};

struct Assignment {
  std::variant<VarAssign, FieldAssign, Print> node;
  Pos pos;
  bool operator==(const Assignment&) const = default;
};

struct Phi {
  std::string target;
  std::vector<std::pair<Label, std::string>> operands;
  Pos pos;
  bool operator==(const Phi&) const = default;

  const std::string* operand_for(const Label& l) const;
};

struct Block;

struct Assigns {
  std::vector<Assignment> items;
  bool operator==(const Assigns&) const = default;
};
struct Return {
  Expr value;
  bool operator==(const Return&) const = default;
};
struct Throw {
  Expr value;
  bool operator==(const Throw&) const = default;
};
struct MethodCall {
  std::string target;
  Expr receiver;
  std::string method;
  Expr arg;
  bool operator==(const MethodCall&) const = default;
};
struct TryCatch {
  std::vector<Block> try_blocks;
  std::vector<Phi> raise_phis;
  TypeName exn_type;
  std::string exn_var;
  std::vector<Block> catch_blocks;
  std::vector<Phi> join_phis;
  bool operator==(const TryCatch&) const;
};
struct While {
  std::vector<Phi> phis;
  Expr cond;
  std::vector<Block> body;
  bool operator==(const While&) const;
};
struct IfElse {
  Expr cond;
  std::vector<Block> then_blocks;
  std::vector<Block> else_blocks;
  std::vector<Phi> join_phis;
  bool operator==(const IfElse&) const;
};

using BlockBody = std::variant<Assigns, Return, Throw, MethodCall, TryCatch, While, IfElse>;

struct Block {
  Label label;
  BlockBody body;
  Pos pos;
  bool operator==(const Block&) const = default;
};

struct VarDecl {
  TypeName type;
  std::string name;
  Pos pos;
  bool operator==(const VarDecl&) const = default;
};

struct SourceMethod {
  TypeName ret;
  std::string name;
  VarDecl param;
  std::vector<VarDecl> locals;
  std::vector<Block> body;
  Pos pos;
  bool operator==(const SourceMethod&) const = default;
};

struct SourceClass {
  std::string name;
  std::vector<VarDecl> fields;
  std::vector<SourceMethod> methods;
  Pos pos;
  bool operator==(const SourceClass&) const = default;

  const SourceMethod* find_method(std::string_view n) const;
};

struct SourceProgram {
  std::vector<SourceClass> classes;
  bool operator==(const SourceProgram&) const = default;

  const SourceClass* find_class(std::string_view n) const;
};

// ---- operations -----------------------------------------------------------

SourceProgram parse_source(std::string_view text);
std::string print_source(const SourceProgram& p);
std::string print_expr(const Expr& e);

struct Violation {
  std::string rule;
  std::string message;
  Pos pos;
};

struct ValidateOptions {
  // Require exactly two operands on every while entry phi.
  bool while_arity = true;
};

std::vector<Violation> validate(const SourceProgram& p, ValidateOptions opts = {});

SourceProgram preprocess_while_entries(const SourceProgram& p);

// Document position of every label in a method (block-tree pre-order).
std::map<Label, int> label_order(const SourceMethod& m);

Label min_label(const std::vector<Phi>& phis, const std::map<Label, int>& order);

// Walk helpers.
const char* block_kind_name(const BlockBody& b);
void for_each_block(const std::vector<Block>& blocks, const std::function<void(const Block&)>& fn);
std::vector<std::string> assigned_vars(const SourceMethod& m);

}  // namespace fjobf::source
