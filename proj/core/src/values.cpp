#include "fjobf/values.hpp"

#include <deque>
#include <sstream>

namespace fjobf {

bool Value::operator==(const Value& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Null: return true;
    case Kind::Int: return i == o.i;
    case Kind::Bool: return b == o.b;
    case Kind::Str: return s == o.s;
    case Kind::Loc: return loc == o.loc;
    case Kind::Closure: return callable == o.callable && scope == o.scope;
  }
  return false;
}

std::string render(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Null: return "null";
    case Value::Kind::Int: return std::to_string(v.i);
    case Value::Kind::Bool: return v.b ? "true" : "false";
    case Value::Kind::Str: return v.s;
    case Value::Kind::Loc: return "loc:" + std::to_string(v.loc);
    case Value::Kind::Closure: return "closure:" + std::to_string(v.callable);
  }
  return "?";
}

Object& Store::at(Location l, Pos pos) {
  if (l >= cells_.size()) throw Error(ErrorKind::Internal, "dangling location " + std::to_string(l), pos);
  return cells_[l];
}

const Object& Store::at(Location l, Pos pos) const {
  if (l >= cells_.size()) throw Error(ErrorKind::Internal, "dangling location " + std::to_string(l), pos);
  return cells_[l];
}

std::string render_heap(const Store& st, const Value& root) {
  std::map<Location, int> ids;
  std::deque<Location> todo;
  auto visit = [&](const Value& v) -> std::string {
    if (v.kind != Value::Kind::Loc) return v.kind == Value::Kind::Closure ? "closure" : render(v);
    auto [it, fresh] = ids.emplace(v.loc, static_cast<int>(ids.size()));
    if (fresh) todo.push_back(v.loc);
    return "#" + std::to_string(it->second);
  };
  std::ostringstream os;
  os << visit(root);
  while (!todo.empty()) {
    Location l = todo.front();
    todo.pop_front();
    const Object& o = st.at(l);
    os << " #" << ids[l] << "=" << o.cls << "{";
    bool first = true;
    for (const auto& [f, v] : o.fields) {
      if (!first) os << ",";
      first = false;
      os << f << ":" << visit(v);
    }
    os << "}";
  }
  return os.str();
}

Value apply_operator(const std::string& op, const Value& a, const Value& b, Pos pos) {
  using K = Value::Kind;
  if (op == "+" && (a.kind == K::Str || b.kind == K::Str)) return Value::str(render(a) + render(b));
  if (op == "==") {
    if (a.kind == K::Closure || b.kind == K::Closure)
      throw Error(ErrorKind::Eval, "cannot compare closures", pos);
    if (a.kind == b.kind) return Value::bool_(a == b);
    if ((a.kind == K::Null && b.kind == K::Loc) || (a.kind == K::Loc && b.kind == K::Null))
      return Value::bool_(false);
    throw Error(ErrorKind::Eval, "operands of == have different kinds", pos);
  }
  if (a.kind != K::Int || b.kind != K::Int)
    throw Error(ErrorKind::Eval, "operator " + op + " expects integers, got " + render(a) + " and " + render(b), pos);
  if (op == "+") return Value::int_(a.i + b.i);
  if (op == "-") return Value::int_(a.i - b.i);
  if (op == "<") return Value::bool_(a.i < b.i);
  if (op == ">") return Value::bool_(a.i > b.i);
  throw Error(ErrorKind::Eval, "unknown operator " + op, pos);
}

}  // namespace fjobf
