#include "report.hpp"

#include "fjobf/source_interp.hpp"
#include "fjobf/target_interp.hpp"

namespace fjobf::report {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Normal: return "normal";
    case Outcome::Exception: return "exception";
    default: return "resource-limit";
  }
}

json RunReport::to_json() const {
  return {{"outcome", outcome_name(outcome)}, {"value", value}, {"printed", printed}, {"steps", steps},
          {"heap", heap}};
}

json value_to_json(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return v.i;
    case Value::Kind::Bool: return v.b;
    case Value::Kind::Str: return v.s;
    case Value::Kind::Null: return nullptr;
    default: return render(v);
  }
}

Value value_from_json(const json& j) {
  if (j.is_boolean()) return Value::bool_(j.get<bool>());
  if (j.is_number_integer()) return Value::int_(j.get<std::int64_t>());
  if (j.is_string()) return Value::str(j.get<std::string>());
  if (j.is_null()) return Value::null();
  throw Error(ErrorKind::Eval, "unsupported input value " + j.dump());
}

json Sequence::to_json() const {
  json st = json::object();
  for (const auto& [k, v] : state) st[k] = value_to_json(v);
  json cs = json::array();
  for (const auto& c : calls) cs.push_back({{"method", c.method}, {"arg", value_to_json(c.arg)}});
  return {{"class", cls}, {"state", st}, {"calls", cs}};
}

Value parse_value(const std::string& text) {
  if (text == "true") return Value::bool_(true);
  if (text == "false") return Value::bool_(false);
  if (text == "null") return Value::null();
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') return Value::str(text.substr(1, text.size() - 2));
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used == text.size()) return Value::int_(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Eval, "cannot parse value '" + text + "'");
}

std::map<std::string, Value> parse_state(const std::vector<std::string>& items) {
  std::map<std::string, Value> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      std::size_t end = item.find(',', start);
      if (end == std::string::npos) end = item.size();
      std::string part = item.substr(start, end - start);
      start = end + 1;
      if (part.empty()) continue;
      auto eq = part.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::Eval, "state item '" + part + "' is not name=value");
      out[part.substr(0, eq)] = parse_value(part.substr(eq + 1));
    }
  }
  return out;
}

std::vector<Sequence> parse_inputs(const json& j, const std::string& default_class) {
  if (!j.is_array()) throw Error(ErrorKind::Eval, "inputs must be a JSON array");
  std::vector<Sequence> out;
  if (!j.empty() && !j.front().is_object()) {
    Sequence s;
    s.cls = default_class;
    for (const auto& v : j) s.calls.push_back({"", value_from_json(v)});
    out.push_back(std::move(s));
    return out;
  }
  for (const auto& item : j) {
    Sequence s;
    s.cls = item.value("class", default_class);
    if (item.contains("state"))
      for (const auto& [k, v] : item["state"].items()) s.state[k] = value_from_json(v);
    std::string method = item.value("method", std::string());
    for (const auto& c : item.at("calls")) {
      if (c.is_object()) s.calls.push_back({c.value("method", method), value_from_json(c.at("arg"))});
      else s.calls.push_back({method, value_from_json(c)});
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string canonical(const Store& st, const Value& v) {
  return v.kind == Value::Kind::Loc ? render_heap(st, v) : render(v);
}

template <class Interp, class CallFn>
std::vector<RunReport> run_sequence(Interp& interp, const Sequence& seq, CallFn call) {
  std::vector<RunReport> out;
  Location self = interp.instantiate(seq.cls, seq.state);
  for (const auto& c : seq.calls) {
    RunReport r;
    std::size_t printed_before = interp.printed().size();
    std::uint64_t steps_before = interp.steps();
    bool stop = false;
    try {
      auto [raised, value] = call(self, c);
      r.outcome = raised ? Outcome::Exception : Outcome::Normal;
      r.value = canonical(interp.store(), value);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ResourceLimit) throw;
      r.outcome = Outcome::ResourceLimit;
      r.value = e.message();
      stop = true;
    }
    r.printed.assign(interp.printed().begin() + static_cast<std::ptrdiff_t>(printed_before), interp.printed().end());
    r.steps = interp.steps() - steps_before;
    r.heap = render_heap(interp.store(), Value::location(self));
    out.push_back(std::move(r));
    if (stop) break;
  }
  return out;
}

}  // namespace

std::vector<RunReport> run_source(const source::SourceProgram& p, const Sequence& seq, std::uint64_t budget) {
  source::InterpOptions opts;
  opts.step_budget = budget;
  source::Interpreter interp(p, opts);
  return run_sequence(interp, seq, [&](Location self, const Call& c) {
    auto o = interp.call(self, c.method, c.arg);
    return std::pair<bool, Value>{o.raised, o.value};
  });
}

std::vector<RunReport> run_target(const target::TargetProgram& p, const Sequence& seq, std::uint64_t budget) {
  target::TargetOptions opts;
  opts.step_budget = budget;
  target::TargetInterpreter interp(p, opts);
  return run_sequence(interp, seq, [&](Location self, const Call& c) {
    auto o = interp.call(self, c.method, c.arg);
    return std::pair<bool, Value>{o.raised, o.raised ? o.payload : o.value};
  });
}

std::vector<std::string> compare(const std::vector<RunReport>& a, const std::vector<RunReport>& b) {
  std::vector<std::string> out;
  if (a.size() != b.size()) out.push_back("length");
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    std::string at = "[" + std::to_string(i) + "].";
    if (a[i].outcome != b[i].outcome) out.push_back(at + "outcome");
    // Budgets count different steps on the two sides, so where each run
    // stopped is not comparable.
    if (a[i].outcome == Outcome::ResourceLimit && b[i].outcome == Outcome::ResourceLimit) continue;
    if (a[i].value != b[i].value) out.push_back(at + "value");
    if (a[i].printed != b[i].printed) out.push_back(at + "printed");
    if (a[i].heap != b[i].heap) out.push_back(at + "heap");
  }
  return out;
}

bool DiffReport::agree() const {
  for (const auto& p : pairs)
    if (!p.agree()) return false;
  return true;
}

json DiffReport::to_json() const {
  json ps = json::array();
  for (const auto& p : pairs) {
    json s = json::array(), t = json::array();
    for (const auto& r : p.source) s.push_back(r.to_json());
    for (const auto& r : p.target) t.push_back(r.to_json());
    ps.push_back({{"input", p.input.to_json()},
                  {"source", s},
                  {"target", t},
                  {"verdict", p.agree() ? "agree" : "disagree"},
                  {"fields", p.fields}});
  }
  return {{"pairs", ps}, {"agree", agree()}};
}

DiffReport diff(const source::SourceProgram& src, const target::TargetProgram& tgt,
                const std::vector<Sequence>& inputs, std::uint64_t budget) {
  DiffReport out;
  for (const auto& seq : inputs) {
    DiffPair p;
    p.input = seq;
    p.source = run_source(src, seq, budget);
    p.target = run_target(tgt, seq, budget);
    p.fields = compare(p.source, p.target);
    out.pairs.push_back(std::move(p));
  }
  return out;
}

json cfg_json(const cfa::Cfg& g) {
  json edges = json::array();
  for (const auto& [a, b, tag] : g.edges)
    edges.push_back({{"from", g.nodes[a]}, {"to", g.nodes[b]}, {"tag", cfa::tag_name(tag)}});
  return {{"entry", g.entry >= 0 ? json(g.nodes[g.entry]) : json(nullptr)},
          {"nodes", g.nodes},
          {"edges", edges},
          {"cycles", cfa::count_simple_cycles(g)}};
}

json analysis_json(const target::ProgramIndex& index, const cfa::AnalysisResult& r, const cfa::Cfg& g) {
  auto names = cfa::variable_names(index);
  auto displays = [&](const std::set<int>& ids) {
    json a = json::array();
    for (int id : ids) a.push_back(index.at(id).display);
    return a;
  };
  json vars = json::object();
  json contexts = json::object();
  for (const auto& v : r.variables()) {
    auto pts = r.points_to(v);
    if (pts.empty()) continue;
    auto it = names.find(v);
    std::string name = it == names.end() ? v.name : it->second;
    vars[name] = displays(pts);
    if (r.k > 0) {
      json per = json::object();
      for (const auto& [ctx, ids] : r.points_to_by_context(v))
        if (!ids.empty()) per[cfa::display_context(r, ctx)] = displays(ids);
      contexts[name] = per;
    }
  }
  json out = {{"k", r.k}, {"variables", vars}, {"cfg", cfg_json(g)}, {"iterations", r.iterations}};
  if (r.k > 0) out["contexts"] = contexts;
  return out;
}

}  // namespace fjobf::report
