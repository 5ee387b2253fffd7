#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fjobf/source_ast.hpp"
#include "fjobf/target_ast.hpp"

// Control-flow analysis of FJ_lambda programs: which lambdas each variable
// may hold, the call graph derived from that, and graph utilities for
// comparing control-flow graphs.
namespace fjobf::cfa {

// A call site: the statement with pre-order index `ordinal` in the body of
// `callable`, nested if arms included.
struct SiteId {
  int callable = -1;
  int ordinal = -1;
  auto operator<=>(const SiteId&) const = default;
};

// Most recent site first, at most k long.
using CallString = std::vector<SiteId>;
CallString push_site(const CallString& c, SiteId s, int k);

// Activation contexts of the enclosing scopes, innermost first. A closure
// created in a callable body captures the context vector of that body.
using Env = std::vector<CallString>;

struct AbsClosure {
  int callable = -1;
  Env env;
  auto operator<=>(const AbsClosure&) const = default;
};
using AbsSet = std::set<AbsClosure>;

// A variable is identified by the scope that declares it: a lambda for its
// parameters, a method or function for everything in its frame.
struct VarId {
  int owner = -1;
  std::string name;
  auto operator<=>(const VarId&) const = default;
};

struct VarKey {
  VarId var;
  CallString ctx;
  auto operator<=>(const VarKey&) const = default;
};

struct Activation {
  int callable = -1;
  Env env;
  auto operator<=>(const Activation&) const = default;
};

enum class Tag { Plain, True, False };
const char* tag_name(Tag t);

struct CallEdge {
  int caller = -1;
  int callee = -1;
  Tag tag = Tag::Plain;
  auto operator<=>(const CallEdge&) const = default;
};

struct SiteInfo {
  int callable = -1;
  int line = 0;
  Tag tag = Tag::Plain;
};

struct AnalysisResult {
  int k = 0;
  std::map<VarKey, AbsSet> store;
  std::map<Activation, AbsSet> returns;
  std::set<Activation> reached;
  // Callee callables seen at each site, with the arguments that flowed in.
  std::map<SiteId, std::set<int>> site_callees;
  std::map<std::pair<SiteId, int>, std::vector<AbsSet>> site_args;  // (site, callee)
  std::map<SiteId, SiteInfo> sites;
  std::set<CallEdge> edges;
  std::size_t iterations = 0;

  // Lambda and function ids, contexts merged.
  std::set<int> points_to(const VarId& v) const;
  // Per context of the declaring scope.
  std::map<CallString, std::set<int>> points_to_by_context(const VarId& v) const;
  std::set<VarId> variables() const;
  bool operator==(const AnalysisResult& o) const {
    return std::tie(k, store, returns, reached, site_callees, edges) ==
           std::tie(o.k, o.store, o.returns, o.reached, o.site_callees, o.edges);
  }
};

// Worklist fixpoint over all class methods as roots. k = 0 is the context
// insensitive analysis.
AnalysisResult solve(const target::ProgramIndex& index, int k);
AnalysisResult solve_0cfa(const target::ProgramIndex& index);
AnalysisResult solve_kcfa(const target::ProgramIndex& index, int k);

// Re-runs every reached activation once against `r`; true when nothing changes.
bool is_fixpoint(const target::ProgramIndex& index, const AnalysisResult& r);

// Calls made at `lambda`'s entry, as sites. Empty for uncalled lambdas.
std::set<SiteId> callers(const AnalysisResult& r, int callable);

// ---- statement-level view ----------------------------------------------------

// Variable name to the set of lambda (or function) callable ids.
using AbstractState = std::map<std::string, std::set<int>>;

bool leq(const AbstractState& a, const AbstractState& b);
AbstractState join(const AbstractState& a, const AbstractState& b);

std::set<int> abstract_eval(const target::ProgramIndex& index, const AbstractState& sigma, const target::Expr& e);

// Returned lambdas of each callable, used for the call rules.
struct ReturnTable {
  std::map<int, std::set<int>> returns;
  std::map<std::string, std::set<int>> methods;  // by method name
};
ReturnTable return_table(const AnalysisResult& r);

// Transfer function of one statement under strong update of the assigned
// variable. Return, if and field update leave the state unchanged.
AbstractState flow(const target::ProgramIndex& index, const target::Stmt& s, const AbstractState& sigma,
                   const ReturnTable& rets);

// Formals of `callable` bound to the union of the actuals seen at its callers.
AbstractState flow_lambda(const target::ProgramIndex& index, const AnalysisResult& r, int callable);

// State visible before statement `site`: the contexts-merged store restricted
// to the variables in scope there.
AbstractState join_at(const target::ProgramIndex& index, const AnalysisResult& r, SiteId site);

// ---- naming ------------------------------------------------------------------

// `name`, or `name@<owner display>` when several scopes declare `name`.
std::map<VarId, std::string> variable_names(const target::ProgramIndex& index);
std::string display_site(const AnalysisResult& r, SiteId s);
std::string display_context(const AnalysisResult& r, const CallString& c);

// ---- graphs ------------------------------------------------------------------

struct Cfg {
  std::vector<std::string> nodes;
  std::set<std::tuple<int, int, Tag>> edges;  // node indices
  int entry = -1;

  int add_node(const std::string& name);
  int find(const std::string& name) const;  // -1 if absent
  bool has_edge(const std::string& from, const std::string& to) const;
  std::size_t size() const { return nodes.size(); }
};

// Callables reachable from `entry` over the analysis call edges; all reached
// callables when `entry` is negative.
Cfg build_cfg(const target::ProgramIndex& index, const AnalysisResult& r, int entry);

// Block-level graph of a source method.
Cfg source_cfg(const source::SourceMethod& md);

// Simple cycles, parallel edges collapsed.
std::vector<std::vector<int>> simple_cycles(const Cfg& g);
std::size_t count_simple_cycles(const Cfg& g);

enum class IsoOutcome { Yes, No, BudgetExceeded };
const char* iso_name(IsoOutcome o);

struct IsoResult {
  IsoOutcome outcome = IsoOutcome::No;
  std::uint64_t states = 0;
  std::vector<int> mapping;  // pattern node to host node when Yes
};

// Is there an injective map of pattern nodes to host nodes that preserves
// every directed pattern edge? Edge tags are ignored.
IsoResult subgraph_isomorphic(const Cfg& pattern, const Cfg& host, std::uint64_t budget);

std::string to_dot(const Cfg& g, const std::string& name = "cfg");

}  // namespace fjobf::cfa
