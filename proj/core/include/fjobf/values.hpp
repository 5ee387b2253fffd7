#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fjobf/common.hpp"

namespace fjobf {

using Location = std::uint32_t;

// Runtime value shared by both interpreters. Closures only occur on the
// target side; `callable` indexes the target program's callable table and
// `scope` the interpreter's scope arena.
struct Value {
  enum class Kind { Null, Int, Bool, Str, Loc, Closure };
  Kind kind = Kind::Null;
  std::int64_t i = 0;
  bool b = false;
  std::string s;
  Location loc = 0;
  int callable = -1;
  std::uint32_t scope = 0;

  static Value null() { return {}; }
  static Value int_(std::int64_t v) {
    Value x;
    x.kind = Kind::Int;
    x.i = v;
    return x;
  }
  static Value bool_(bool v) {
    Value x;
    x.kind = Kind::Bool;
    x.b = v;
    return x;
  }
  static Value str(std::string v) {
    Value x;
    x.kind = Kind::Str;
    x.s = std::move(v);
    return x;
  }
  static Value location(Location l) {
    Value x;
    x.kind = Kind::Loc;
    x.loc = l;
    return x;
  }
  static Value closure(int callable, std::uint32_t scope) {
    Value x;
    x.kind = Kind::Closure;
    x.callable = callable;
    x.scope = scope;
    return x;
  }

  bool is_null() const { return kind == Kind::Null; }
  bool operator==(const Value& o) const;
};

// Text rendering used by print, string concatenation and reports.
std::string render(const Value& v);

struct Object {
  std::string cls;
  std::map<std::string, Value> fields;
  bool operator==(const Object&) const = default;
};

// Heap. Cells are never removed, so `size()` is the next location.
class Store {
 public:
  Location alloc(Object o) {
    cells_.push_back(std::move(o));
    return static_cast<Location>(cells_.size() - 1);
  }
  Object& at(Location l, Pos pos = {});
  const Object& at(Location l, Pos pos = {}) const;
  std::size_t size() const { return cells_.size(); }
  bool operator==(const Store&) const = default;

 private:
  std::vector<Object> cells_;
};

// Canonical printout of the objects reachable from `root`, with locations
// renumbered in discovery order. Used to compare heaps across engines.
std::string render_heap(const Store& st, const Value& root);

// Applies one of + - < > == to two values. `+` with a string operand
// concatenates renderings.
Value apply_operator(const std::string& op, const Value& a, const Value& b, Pos pos);

}  // namespace fjobf
