#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fjobf/common.hpp"
#include "fjobf/source_ast.hpp"

// FJ_lambda: Featherweight Java with first-class anonymous functions that
// share the enclosing method's variables.
namespace fjobf::target {

using source::Const;
using source::TypeName;

// K ::= T | K => K, right associative. Immutable, so subterms are shared.
class FunType {
 public:
  FunType() = default;
  FunType(TypeName base) : base_(std::move(base)) {}
  static FunType arrow(FunType from, FunType to);

  bool is_arrow() const { return from_ != nullptr; }
  const TypeName& base() const { return base_; }
  const FunType& from() const { return *from_; }
  const FunType& to() const { return *to_; }

  // Number of arrows along the right spine.
  int arity() const { return is_arrow() ? 1 + to().arity() : 0; }
  bool operator==(const FunType& o) const;

 private:
  TypeName base_;
  std::shared_ptr<const FunType> from_, to_;
};

FunType base_type(TypeName t);
FunType void_type();
FunType exn_cont_type();  // Exception => void
FunType nm_cont_type();   // void => void
FunType cps_func_type();  // ExCont => NmCont => void

struct Param {
  std::optional<FunType> type;
  std::string name;
  bool operator==(const Param&) const = default;
};

// Identity of a lambda literal. Equality ignores it, the same way it
// ignores positions.
struct LambdaId {
  int ordinal = -1;
  std::string display;
  bool operator==(const LambdaId&) const { return true; }
};

struct Expr;
struct Stmt;
struct Lambda;

struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct This {
  bool operator==(const This&) const = default;
};
struct Apply {
  Box<Expr> fn;
  std::vector<Expr> args;
  bool operator==(const Apply&) const;
};
struct MethodCall {
  Box<Expr> recv;
  std::string method;
  Box<Expr> arg;
  bool operator==(const MethodCall&) const = default;
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
struct New {
  TypeName type;
  bool operator==(const New&) const = default;
};
struct LambdaExpr {
  Box<Lambda> lam;
  bool operator==(const LambdaExpr&) const;
};

struct Expr {
  std::variant<Const, Var, This, Apply, MethodCall, FieldAccess, BinOp, New, LambdaExpr> node;
  Pos pos;
  bool operator==(const Expr&) const = default;
};

// `decl` is set for `K X = E;` inside a body.
struct Assign {
  std::optional<FunType> decl;
  std::string var;
  Expr value;
  bool operator==(const Assign&) const = default;
};
struct FieldAssign {
  Expr obj;
  std::string field;
  Expr value;
  bool operator==(const FieldAssign&) const = default;
};
struct Return {
  std::optional<Expr> value;
  bool operator==(const Return&) const = default;
};
struct IfElse {
  Expr cond;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  bool operator==(const IfElse&) const;
};
struct ExprStmt {
  Expr expr;
  bool operator==(const ExprStmt&) const = default;
};
struct Print {
  Expr value;
  bool operator==(const Print&) const = default;
};

struct Stmt {
  std::variant<Assign, FieldAssign, Return, IfElse, ExprStmt, Print> node;
  Pos pos;
  bool operator==(const Stmt&) const = default;
};

struct Lambda {
  LambdaId id;
  std::vector<Param> params;
  std::vector<Stmt> body;
  Pos pos;
  bool operator==(const Lambda&) const = default;
};

struct LocalDecl {
  FunType type;
  std::string name;
  std::optional<Box<Lambda>> init;
  bool operator==(const LocalDecl&) const = default;
};

// Methods and top-level functions share this shape. Class methods take one
// parameter; prelude functions may take several.
struct TargetMethod {
  FunType ret;
  std::string name;
  std::vector<Param> params;
  std::vector<LocalDecl> locals;
  std::vector<Stmt> body;
  Pos pos;
  bool operator==(const TargetMethod&) const = default;
};

struct Field {
  TypeName type;
  std::string name;
  bool operator==(const Field&) const = default;
};

struct TargetClass {
  std::string name;
  std::vector<Field> fields;
  std::vector<TargetMethod> methods;
  Pos pos;
  bool operator==(const TargetClass&) const = default;
  const TargetMethod* find_method(std::string_view n) const;
};

struct TargetProgram {
  // Type aliases are expanded at parse time; the list only drives printing.
  std::vector<std::pair<std::string, FunType>> aliases;
  std::vector<TargetClass> classes;
  std::vector<TargetMethod> functions;
  bool operator==(const TargetProgram& o) const { return classes == o.classes && functions == o.functions; }

  const TargetClass* find_class(std::string_view n) const;
  const TargetMethod* find_function(std::string_view n) const;
};

std::vector<std::pair<std::string, FunType>> standard_aliases();

// ---- builders ----------------------------------------------------------------

Expr var(std::string n);
Expr apply(Expr fn, std::vector<Expr> args);
Expr lambda_expr(Lambda l);
Stmt stmt(decltype(Stmt::node) n);
Stmt ret(Expr e);
Stmt ret_void();
Stmt assign(std::string v, Expr e);

// ---- text format -------------------------------------------------------------

TargetProgram parse_target(std::string_view text);
std::string print_target(const TargetProgram& p);
std::string print_type(const FunType& t, const std::vector<std::pair<std::string, FunType>>& aliases = {});
std::string print_expr(const Expr& e);
std::string print_method(const TargetMethod& m, const std::vector<std::pair<std::string, FunType>>& aliases);

// parse(print(p)). Assigns lambda display names from the printed layout.
TargetProgram canonicalize(const TargetProgram& p);

// ---- program index -----------------------------------------------------------

// Every method, function and lambda literal gets a dense callable id.
struct Callable {
  enum class Kind { Method, Function, Lambda };
  Kind kind = Kind::Lambda;
  std::string cls;                      // methods only
  const TargetMethod* method = nullptr;  // methods and functions
  const Lambda* lambda = nullptr;        // lambdas
  int parent = -1;                       // lexically enclosing callable
  int top = -1;                          // method or function owning the frame
  std::string display;

  const std::vector<Param>& params() const { return lambda ? lambda->params : method->params; }
  const std::vector<Stmt>& body() const { return lambda ? lambda->body : method->body; }
};

class ProgramIndex {
 public:
  explicit ProgramIndex(const TargetProgram& p);

  const TargetProgram& program() const { return prog_; }
  const std::vector<Callable>& callables() const { return callables_; }
  const Callable& at(int id) const { return callables_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(callables_.size()); }

  int lambda_id(const Lambda* l) const;
  int function_id(std::string_view name) const;  // -1 if absent
  int method_id(std::string_view cls, std::string_view name) const;
  std::vector<int> methods_named(std::string_view name) const;

  // Variables living in the frame of a method or function: this, params,
  // plain and lambda locals, and every `K X = E` anywhere in its body.
  const std::vector<std::string>& frame_vars(int top) const { return frame_vars_.at(top); }

  // Lambdas in program order; ordinal i of a lambda is its rank here.
  const std::vector<int>& lambdas() const { return lambdas_; }
  int find_by_display(std::string_view display) const;  // -1 if absent

 private:
  const TargetProgram& prog_;
  std::vector<Callable> callables_;
  std::map<const Lambda*, int> by_lambda_;
  std::map<std::string, int, std::less<>> functions_;
  std::map<std::pair<std::string, std::string>, int> methods_;
  std::map<int, std::vector<std::string>> frame_vars_;
  std::vector<int> lambdas_;

  void add_top(Callable::Kind kind, const std::string& cls, const TargetMethod& m);
  void add_lambda(const Lambda& l, int parent, int top);
  void scan_stmts(const std::vector<Stmt>& ss, int parent, int top);
  void scan_expr(const Expr& e, int parent, int top);
};

}  // namespace fjobf::target
