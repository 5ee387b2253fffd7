// fjobf: check, run, obfuscate, diff and analyze SSAFJ-EH / FJ_lambda programs.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fjobf/cfa.hpp"
#include "fjobf/cps.hpp"
#include "fjobf/source_ast.hpp"
#include "fjobf/source_interp.hpp"
#include "fjobf/target_ast.hpp"
#include "fjobf/target_interp.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace fjobf;
using report::json;

namespace {

enum Exit { kOk = 0, kDomain = 1, kEnv = 2 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::Io, "cannot write " + path);
}

bool is_source(const std::string& path) { return fs::path(path).extension() == ".ssafj"; }
bool is_target(const std::string& path) { return fs::path(path).extension() == ".fjl"; }

source::SourceProgram load_source(const std::string& path) {
  return source::preprocess_while_entries(source::parse_source(read_file(path)));
}

void require_valid(const source::SourceProgram& p) {
  auto vs = source::validate(p);
  if (vs.empty()) return;
  const auto& v = vs.front();
  throw Error(ErrorKind::Validation, v.rule + ": " + v.message, v.pos);
}

target::TargetProgram load_target(const std::string& path, bool flatten = true) {
  if (is_target(path)) return target::parse_target(read_file(path));
  auto src = load_source(path);
  require_valid(src);
  cps::TranslateOptions opts;
  opts.flatten = flatten;
  return target::canonicalize(cps::translate_program(src, opts));
}

void emit(const json& j, const std::string& out) {
  std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") std::cout << text;
  else write_file(out, text);
}

struct RunArgs {
  std::string path, cls, method, engine = "source";
  std::vector<std::string> args, state;
  bool trace = false, no_flatten = false;
};

int cmd_check(const std::string& path) {
  std::string text = read_file(path);
  source::SourceProgram p;
  try {
    p = source::preprocess_while_entries(source::parse_source(text));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DuplicateLabel && e.kind() != ErrorKind::Syntax) throw;
    std::cout << path << ":" << e.pos().line << ":" << e.pos().col << ": "
              << (e.kind() == ErrorKind::DuplicateLabel ? "unique-labels" : "syntax") << ": " << e.message() << "\n";
    return kDomain;
  }
  auto vs = source::validate(p);
  for (const auto& v : vs)
    std::cout << path << ":" << v.pos.line << ":" << v.pos.col << ": " << v.rule << ": " << v.message << "\n";
  return vs.empty() ? kOk : kDomain;
}

int cmd_run(const RunArgs& a) {
  report::Sequence seq;
  seq.cls = a.cls;
  seq.state = report::parse_state(a.state);
  for (const auto& s : a.args) seq.calls.push_back({a.method, report::parse_value(s)});
  if (seq.calls.empty()) seq.calls.push_back({a.method, Value::null()});
  std::uint64_t budget = target::step_budget_from_env(target::kDefaultTargetBudget);

  std::vector<report::RunReport> reports;
  if (a.engine == "target" || is_target(a.path)) {
    auto tp = load_target(a.path, !a.no_flatten);
    reports = report::run_target(tp, seq, budget);
  } else if (a.engine == "source") {
    auto sp = load_source(a.path);
    require_valid(sp);
    if (a.trace) {
      source::InterpOptions opts;
      opts.step_budget = budget;
      source::LEnv last;
      opts.on_block = [&](const source::Label& l, const source::Label& pred, const source::LEnv& env) {
        json d = json::object();
        for (const auto& [k, v] : env)
          if (auto it = last.find(k); it == last.end() || !(it->second == v)) d[k] = report::value_to_json(v);
        last = env;
        std::cerr << json{{"label", l}, {"pred", pred}, {"env", d}}.dump() << "\n";
      };
      source::Interpreter interp(sp, opts);
      Location self = interp.instantiate(seq.cls, seq.state);
      for (const auto& c : seq.calls) interp.call(self, c.method, c.arg);
    }
    reports = report::run_source(sp, seq, budget);
  } else {
    throw Error(ErrorKind::Eval, "unknown engine " + a.engine);
  }
  if (reports.size() == 1) emit(reports.front().to_json(), "");
  else {
    json all = json::array();
    for (const auto& r : reports) all.push_back(r.to_json());
    emit(all, "");
  }
  for (const auto& r : reports)
    if (r.outcome == report::Outcome::ResourceLimit) return kDomain;
  return kOk;
}

int cmd_obfuscate(const std::string& in, std::string out, bool flatten, bool prelude) {
  if (!is_source(in)) throw Error(ErrorKind::Translate, "obfuscate expects a .ssafj input, got " + in);
  auto src = load_source(in);
  require_valid(src);
  cps::TranslateOptions opts;
  opts.flatten = flatten;
  opts.prelude = prelude;
  auto tp = cps::translate_program(src, opts);
  std::string text = target::print_target(tp);
  auto back = target::parse_target(text);
  if (!(back == tp)) throw Error(ErrorKind::Internal, "printed program does not parse back to itself");
  if (out.empty()) out = fs::path(in).replace_extension(".fjl").string();
  write_file(out, text);
  return kOk;
}

int cmd_diff(const std::string& path, const std::string& inputs, const std::string& cls, const std::string& method,
             const std::vector<std::string>& state, bool flatten, const std::string& out) {
  auto src = load_source(path);
  require_valid(src);
  cps::TranslateOptions opts;
  opts.flatten = flatten;
  auto tp = target::canonicalize(cps::translate_program(src, opts));
  std::string def = cls.empty() && !src.classes.empty() ? src.classes.front().name : cls;
  json j;
  try {
    j = json::parse(read_file(inputs));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, std::string("inputs file is not JSON: ") + e.what());
  }
  auto seqs = report::parse_inputs(j, def);
  // Bare integer lists name neither method nor initial fields.
  auto init = report::parse_state(state);
  for (auto& seq : seqs) {
    for (const auto& [k, v] : init) seq.state.emplace(k, v);
    for (auto& c : seq.calls) {
      if (!c.method.empty()) continue;
      if (!method.empty()) {
        c.method = method;
        continue;
      }
      for (const auto& k : src.classes)
        if (k.name == seq.cls && !k.methods.empty()) c.method = k.methods.front().name;
    }
  }
  auto d = report::diff(src, tp, seqs, target::step_budget_from_env(target::kDefaultTargetBudget));
  emit(d.to_json(), out);
  return d.agree() ? kOk : kDomain;
}

int find_entry(const target::ProgramIndex& ix, const std::string& entry) {
  if (entry == "*") return -1;
  if (entry.empty()) {
    for (int i = 0; i < ix.size(); ++i)
      if (ix.at(i).kind == target::Callable::Kind::Method) return i;
    return -1;
  }
  auto dot = entry.find('.');
  if (dot != std::string::npos) {
    int id = ix.method_id(entry.substr(0, dot), entry.substr(dot + 1));
    if (id >= 0) return id;
  } else {
    auto ids = ix.methods_named(entry);
    if (!ids.empty()) return ids.front();
    if (int f = ix.function_id(entry); f >= 0) return f;
  }
  throw Error(ErrorKind::Eval, "no method or function named " + entry);
}

int cmd_analyze(const std::string& path, int k, const std::string& json_out, const std::string& dot_out,
                const std::string& entry) {
  auto tp = load_target(path);
  target::ProgramIndex ix(tp);
  auto r = cfa::solve(ix, k);
  auto g = cfa::build_cfg(ix, r, find_entry(ix, entry));
  if (!dot_out.empty()) write_file(dot_out, cfa::to_dot(g));
  if (!json_out.empty() || dot_out.empty()) emit(report::analysis_json(ix, r, g), json_out);
  return kOk;
}

int cmd_cfg(const std::string& path, const std::string& method, const std::string& dot_out, bool as_json) {
  cfa::Cfg g;
  if (is_source(path)) {
    auto src = load_source(path);
    const source::SourceMethod* md = nullptr;
    for (const auto& c : src.classes) {
      for (const auto& m : c.methods)
        if (method.empty() || m.name == method || c.name + "." + m.name == method) {
          md = &m;
          break;
        }
      if (md) break;
    }
    if (!md) throw Error(ErrorKind::Eval, "no method " + (method.empty() ? std::string("in program") : method));
    g = cfa::source_cfg(*md);
  } else {
    auto tp = load_target(path);
    target::ProgramIndex ix(tp);
    auto r = cfa::solve_0cfa(ix);
    g = cfa::build_cfg(ix, r, find_entry(ix, method));
  }
  if (!dot_out.empty()) write_file(dot_out, cfa::to_dot(g));
  if (as_json) emit(report::cfg_json(g), "");
  else if (dot_out.empty()) std::cout << cfa::to_dot(g);
  else
    std::cout << "nodes " << g.nodes.size() << " edges " << g.edges.size() << " cycles "
              << cfa::count_simple_cycles(g) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CPS control-flow obfuscator and analyzer for SSAFJ-EH programs"};
  app.require_subcommand(1);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Parse and validate a .ssafj program");
  check->add_option("path", check_path)->required();

  RunArgs run_args;
  auto add_run = [&](CLI::App* sc) {
    sc->add_option("path", run_args.path)->required();
    sc->add_option("--class", run_args.cls, "Class to instantiate")->required();
    sc->add_option("--method", run_args.method, "Method to call")->required();
    sc->add_option("--arg", run_args.args, "Argument; repeat for successive calls on one object");
    sc->add_option("--state", run_args.state, "Initial fields as name=value[,name=value]");
    sc->add_flag("--trace", run_args.trace, "Block entries as JSON lines on stderr (source engine)");
    sc->add_flag("--no-flatten", run_args.no_flatten, "Translate without flattening (target engine)");
  };
  auto* run = app.add_subcommand("run", "Run a method and print a JSON report");
  add_run(run);
  run->add_option("--engine", run_args.engine, "source or target")->check(CLI::IsMember({"source", "target"}));
  auto* run_target = app.add_subcommand("run-target", "Same as run --engine target");
  add_run(run_target);

  std::string ob_in, ob_out;
  bool ob_flatten = true, ob_no_flatten = false, ob_no_prelude = false;
  auto* ob = app.add_subcommand("obfuscate", "Translate .ssafj to .fjl");
  ob->add_option("path", ob_in)->required();
  ob->add_option("-o,--output", ob_out, "Output file (default: input with .fjl extension)");
  ob->add_flag("--flatten", ob_flatten, "Flatten nested applications (default)");
  ob->add_flag("--no-flatten", ob_no_flatten, "Keep nested applications");
  ob->add_flag("--no-prelude", ob_no_prelude, "Omit the combinator prelude");

  std::string diff_path, diff_inputs, diff_cls, diff_method, diff_out;
  std::vector<std::string> diff_state;
  bool diff_no_flatten = false;
  auto* df = app.add_subcommand("diff", "Compare source and obfuscated runs over input sequences");
  df->add_option("path", diff_path)->required();
  df->add_option("--inputs", diff_inputs, "JSON file of call sequences")->required();
  df->add_option("--class", diff_cls, "Class for bare integer input lists");
  df->add_option("--method", diff_method, "Method for bare integer input lists (default: the first one)");
  df->add_option("--state", diff_state, "Initial fields for sequences that give none, as name=value[,name=value]");
  df->add_option("--json", diff_out, "Write the report here instead of stdout");
  df->add_flag("--no-flatten", diff_no_flatten);

  std::string an_path, an_json, an_dot, an_entry;
  int an_k = 0;
  auto* an = app.add_subcommand("analyze", "Control-flow analysis of an .fjl (or translated .ssafj) program");
  an->add_option("path", an_path)->required();
  an->add_option("-k,--context-sensitivity", an_k, "Call-string length; 0 is context insensitive")
      ->check(CLI::NonNegativeNumber);
  an->add_option("--json", an_json, "Write the JSON report here");
  an->add_option("--dot", an_dot, "Write the reconstructed CFG as DOT");
  an->add_option("--entry", an_entry, "Entry method (Class.method); '*' for the whole program");

  std::string cfg_path, cfg_method, cfg_dot;
  bool cfg_json = false;
  auto* cg = app.add_subcommand("cfg", "Source CFG of a .ssafj method, or reconstructed CFG of an .fjl");
  cg->add_option("path", cfg_path)->required();
  cg->add_option("--method", cfg_method, "Method (default: the first one)");
  cg->add_option("--dot", cfg_dot, "Write DOT here");
  cg->add_flag("--json", cfg_json, "Print the graph as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kEnv;
  }

  try {
    if (*check) return cmd_check(check_path);
    if (*run) return cmd_run(run_args);
    if (*run_target) {
      run_args.engine = "target";
      return cmd_run(run_args);
    }
    if (*ob) return cmd_obfuscate(ob_in, ob_out, ob_flatten && !ob_no_flatten, !ob_no_prelude);
    if (*df) return cmd_diff(diff_path, diff_inputs, diff_cls, diff_method, diff_state, !diff_no_flatten, diff_out);
    if (*an) return cmd_analyze(an_path, an_k, an_json, an_dot, an_entry);
    if (*cg) return cmd_cfg(cfg_path, cfg_method, cfg_dot, cfg_json);
  } catch (const Error& e) {
    std::cerr << "fjobf: " << e.what() << "\n";
    return e.kind() == ErrorKind::Io ? kEnv : kDomain;
  } catch (const std::exception& e) {
    std::cerr << "fjobf: " << e.what() << "\n";
    return kEnv;
  }
  return kOk;
}
