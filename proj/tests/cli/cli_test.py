#!/usr/bin/env python3
"""End-to-end checks of the fjobf command line.

usage: cli_test.py FJOBF CORPUS_DIR SCHEMA_DIR
"""
import json
import os
import pathlib
import re
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

FJOBF = CORPUS = SCHEMAS = None
FIB_STATE = "f1=0,f2=1,lpos=1"


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("FJOBF_STEP_BUDGET", None)
    e.update(env or {})
    return subprocess.run([FJOBF, *map(str, args)], capture_output=True, text=True, env=e)


def load_schemas():
    registry = Registry()
    schemas = {}
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
        schemas[path.name.split(".")[0]] = doc
    return schemas, registry


def dot_graph(text):
    nodes = dict(re.findall(r'^\s*(n\d+) \[label="([^"]*)"\];$', text, re.M))
    edges = re.findall(r"^\s*(n\d+) -> (n\d+)", text, re.M)
    return nodes, edges


def count_cycles(nodes, edges):
    adj = {n: set() for n in nodes}
    for a, b in edges:
        adj[a].add(b)
    order = sorted(nodes, key=lambda n: int(n[1:]))
    rank = {n: i for i, n in enumerate(order)}
    count = 0

    def walk(start, v, on_path):
        nonlocal count
        for w in adj[v]:
            if w == start:
                count += 1
            elif rank[w] > rank[start] and w not in on_path:
                on_path.add(w)
                walk(start, w, on_path)
                on_path.discard(w)

    for s in order:
        walk(s, s, {s})
    return count


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.schemas, cls.registry = load_schemas()
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = pathlib.Path(cls.tmp.name)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def validate(self, kind, doc):
        jsonschema.Draft202012Validator(self.schemas[kind], registry=self.registry).validate(doc)

    def report(self, kind, proc, code=0):
        self.assertEqual(proc.returncode, code, proc.stderr)
        doc = json.loads(proc.stdout)
        self.validate(kind, doc)
        return doc

    def obfuscate(self, name, *flags):
        out = self.dir / (name + "".join(flags) + ".fjl")
        p = run("obfuscate", CORPUS / (name + ".ssafj"), "-o", out, *flags)
        self.assertEqual(p.returncode, 0, p.stderr)
        return out

    # check

    def test_check_exit_codes(self):
        self.assertEqual(run("check", CORPUS / "fib.ssafj").returncode, 0)
        bad = run("check", CORPUS / "dup_label.ssafj")
        self.assertEqual(bad.returncode, 1)
        lines = bad.stdout.strip().splitlines()
        self.assertEqual(len(lines), 1)
        self.assertRegex(lines[0], r"dup_label\.ssafj:\d+:\d+: ")
        self.assertEqual(run("check", self.dir / "missing.ssafj").returncode, 2)

    def test_check_whole_corpus(self):
        for path in sorted(CORPUS.glob("*.ssafj")):
            want = 1 if path.stem == "dup_label" else 0
            self.assertEqual(run("check", path).returncode, want, path.name)

    def test_bad_usage_is_environment_failure(self):
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("run", CORPUS / "fib.ssafj").returncode, 2)
        self.assertEqual(run("analyze", CORPUS / "fib_reference.fjl", "-k", "-1").returncode, 2)

    # run

    def test_run_source(self):
        r = self.report("run", run("run", CORPUS / "fib.ssafj", "--class", "FibGen", "--method", "get",
                                   "--arg", 3, "--state", FIB_STATE))
        self.assertEqual((r["outcome"], r["value"], r["printed"]), ("normal", "2", []))

    def test_run_guard_message(self):
        r = self.report("run", run("run", CORPUS / "fib.ssafj", "--class", "FibGen", "--method", "get",
                                   "--arg", 0, "--state", FIB_STATE))
        self.assertEqual(r["value"], "-1")
        self.assertTrue(any("greater than 1." in line for line in r["printed"]))

    def test_run_target_matches_source(self):
        fjl = self.obfuscate("fib")
        common = ["--class", "FibGen", "--method", "get", "--state", FIB_STATE]
        for a in ["3", "2", "5"]:
            common += ["--arg", a]
        src = self.report("run", run("run", CORPUS / "fib.ssafj", *common))
        via_alias = self.report("run", run("run-target", fjl, *common))
        via_engine = self.report("run", run("run", "--engine", "target", CORPUS / "fib.ssafj", *common))
        strip = lambda rs: [{k: v for k, v in r.items() if k != "steps"} for r in rs]
        self.assertEqual(strip(src), strip(via_alias))
        self.assertEqual(strip(src), strip(via_engine))
        self.assertEqual([r["value"] for r in src], ["2", "-1", "5"])

    def test_step_budget_from_environment(self):
        p = run("run", CORPUS / "fib.ssafj", "--class", "FibGen", "--method", "get", "--arg", 5,
                "--state", FIB_STATE, env={"FJOBF_STEP_BUDGET": "3"})
        r = self.report("run", p, code=1)
        self.assertEqual(r["outcome"], "resource-limit")

    def test_unknown_method(self):
        p = run("run", CORPUS / "fib.ssafj", "--class", "FibGen", "--method", "nope", "--arg", 1)
        self.assertEqual(p.returncode, 1)

    def test_trace_lines(self):
        p = run("run", CORPUS / "fib.ssafj", "--class", "FibGen", "--method", "get", "--arg", 3,
                "--state", FIB_STATE, "--trace")
        self.assertEqual(p.returncode, 0, p.stderr)
        records = [json.loads(line) for line in p.stderr.splitlines()]
        self.assertEqual(records[0]["label"], "L1")
        self.assertTrue(all(set(r) == {"label", "pred", "env"} for r in records))

    # obfuscate

    def test_obfuscate_round_trips(self):
        for path in sorted(CORPUS.glob("*.ssafj")):
            if path.stem == "dup_label":
                continue
            fjl = self.obfuscate(path.stem)
            # analyze re-parses the written file
            self.report("analyze", run("analyze", fjl, "--entry", "*"))

    def test_no_flatten_differs_but_agrees(self):
        flat = self.obfuscate("fib")
        nested = self.obfuscate("fib", "--no-flatten")
        self.assertNotEqual(flat.read_text(), nested.read_text())
        common = ["--class", "FibGen", "--method", "get", "--state", FIB_STATE, "--arg", 3, "--arg", 0, "--arg", 6]
        a = self.report("run", run("run-target", flat, *common))
        b = self.report("run", run("run-target", nested, *common))
        self.assertEqual([(r["value"], r["printed"]) for r in a], [(r["value"], r["printed"]) for r in b])

    def test_no_prelude(self):
        top_level = lambda path: re.findall(r"^CpsFunc (\w+)\(", path.read_text(), re.M)
        self.assertIn("seq", top_level(self.obfuscate("fib")))
        self.assertEqual(top_level(self.obfuscate("fib", "--no-prelude")), [])

    def test_obfuscate_rejects_target_input(self):
        fjl = self.obfuscate("fib")
        self.assertEqual(run("obfuscate", fjl, "-o", self.dir / "again.fjl").returncode, 1)

    # diff

    def test_diff_sequences_agree(self):
        inputs = self.dir / "bare.json"
        inputs.write_text("[3, 0, 5, 2]")
        d = self.report("diff", run("diff", CORPUS / "fib.ssafj", "--inputs", inputs, "--state", FIB_STATE))
        self.assertTrue(d["agree"])
        self.assertEqual([r["value"] for r in d["pairs"][0]["source"]], ["2", "-1", "5", "-1"])

    def test_diff_corpus(self):
        for path in sorted(CORPUS.glob("*.inputs.json")):
            name = path.name[: -len(".inputs.json")]
            src = CORPUS / (name + ".ssafj")
            if not src.exists():
                continue
            for flags in ([], ["--no-flatten"]):
                d = self.report("diff", run("diff", src, "--inputs", path, *flags))
                self.assertTrue(d["agree"], name)

    def test_diff_empty_inputs(self):
        d = self.report("diff", run("diff", CORPUS / "fib.ssafj", "--inputs", CORPUS / "empty.inputs.json"))
        self.assertEqual(d["pairs"], [])

    def test_diff_report_file(self):
        out = self.dir / "diff.json"
        p = run("diff", CORPUS / "fib.ssafj", "--inputs", CORPUS / "fib.inputs.json", "--json", out)
        self.assertEqual(p.returncode, 0, p.stderr)
        self.validate("diff", json.loads(out.read_text()))

    def test_diff_missing_inputs(self):
        self.assertEqual(run("diff", CORPUS / "fib.ssafj", "--inputs", self.dir / "none.json").returncode, 2)

    # analyze and cfg

    def test_analyze_dot_has_cycles(self):
        dot = self.dir / "g.dot"
        a = self.report("analyze", run("analyze", CORPUS / "fib_reference.fjl", "-k", 0, "--dot", dot,
                                       "--json", "-"))
        nodes, edges = dot_graph(dot.read_text())
        self.assertEqual(len(nodes), len(a["cfg"]["nodes"]))
        self.assertEqual(len(edges), len(a["cfg"]["edges"]))
        self.assertGreaterEqual(count_cycles(nodes, edges), 2)
        self.assertEqual(count_cycles(nodes, edges), a["cfg"]["cycles"])

    def test_analyze_contexts(self):
        a = self.report("analyze", run("analyze", CORPUS / "fib_reference.fjl", "-k", 1))
        self.assertEqual(a["variables"]["first"], ["λ_18", "λ_78"])
        for v in ["first", "second", "first_raise", "second_raise"]:
            per = a["contexts"][v]
            self.assertEqual(len(per), 2, v)
            self.assertTrue(all(len(s) == 1 for s in per.values()), v)
        self.assertEqual(a["contexts"]["second"], {"12": ["λ_35"], "13": ["λ_68"]})

    def test_analyze_translated_source(self):
        fjl = self.obfuscate("fib")
        json_out = self.dir / "a.json"
        self.assertEqual(run("analyze", fjl, "-k", 1, "--json", json_out).returncode, 0)
        self.validate("analyze", json.loads(json_out.read_text()))

    def test_source_cfg(self):
        dot = self.dir / "s.dot"
        p = run("cfg", CORPUS / "fib.ssafj", "--dot", dot)
        self.assertEqual(p.returncode, 0, p.stderr)
        nodes, edges = dot_graph(dot.read_text())
        self.assertEqual((len(nodes), len(edges)), (9, 10))
        self.assertEqual(count_cycles(nodes, edges), 1)
        g = self.report("cfg", run("cfg", CORPUS / "fib.ssafj", "--json"))
        self.assertEqual(sorted(e["tag"] for e in g["edges"] if e["tag"]), ["f", "f", "t", "t"])

    def test_target_cfg(self):
        g = self.report("cfg", run("cfg", CORPUS / "fib_reference.fjl", "--method", "FibGen.get", "--json"))
        self.assertEqual((len(g["nodes"]), len(g["edges"]), g["cycles"]), (36, 42, 4))


if __name__ == "__main__":
    FJOBF, CORPUS, SCHEMAS = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    unittest.main(argv=sys.argv[:1], verbosity=2)
