# Copyright 2026 The sslab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http:#www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the sslab command line: exit codes, output formats, schemas."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BIN = os.environ.get("SSLAB_BIN", "sslab")
SCHEMAS = os.environ.get("SSLAB_SCHEMAS", "schemas")


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("SSLAB_THREADS", None)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, timeout=600)


def schema(name):
    with open(os.path.join(SCHEMAS, name + ".schema.json")) as f:
        return json.load(f)


def validate(text, name):
    doc = json.loads(text)
    jsonschema.validate(doc, schema(name))
    return doc


class Help(unittest.TestCase):
    def test_every_command_has_help(self):
        commands = [[], ["solve"], ["optimize"], ["cost"], ["cost", "grover"], ["cost", "qmatch"],
                    ["cost", "qfilter"], ["cost", "johnson"], ["cost", "walk"], ["tradeoff"],
                    ["verify-heuristic"], ["rank"], ["unrank"]]
        for cmd in commands:
            r = run(*cmd, "--help")
            self.assertEqual(r.returncode, 0, cmd)
            self.assertIn("Usage", r.stdout, cmd)

    def test_unknown_command(self):
        self.assertEqual(run("frobnicate").returncode, 1)
        self.assertEqual(run().returncode, 1)


class Solve(unittest.TestCase):
    def test_hs_success_and_reproducible(self):
        a = run("solve", "--algo", "hs", "--n", "32", "--seed", "7")
        b = run("solve", "--algo", "hs", "--n", "32", "--seed", "7")
        self.assertEqual(a.returncode, 0)
        self.assertEqual(a.stdout, b.stdout)
        doc = validate(a.stdout, "solve_report")
        self.assertTrue(doc["success"])
        self.assertEqual(doc["seed"], 7)
        self.assertEqual(len(doc["solution"]), 32)

    def test_refusals(self):
        r = run("solve", "--algo", "hgj", "--n", "16")
        self.assertEqual(r.returncode, 1)
        self.assertIn("minimum", r.stderr)
        self.assertEqual(run("solve", "--algo", "exhaustive", "--n", "40").returncode, 3)
        self.assertEqual(run("solve", "--algo", "quantum", "--n", "20").returncode, 1)
        self.assertEqual(run("solve", "--algo", "hs").returncode, 1)

    def test_tree_solver_schema(self):
        r = run("solve", "--algo", "hgj", "--n", "32", "--retries", "4")
        self.assertIn(r.returncode, (0, 2))
        doc = validate(r.stdout, "solve_report")
        self.assertEqual(doc["success"], r.returncode == 0)
        self.assertEqual(doc["millis"], 0)

    def test_instance_file(self):
        inst = {"n": 8, "a": ["3", "5", "7", "11", "13", "17", "19", "23"], "t": "15"}
        jsonschema.validate(inst, schema("instance"))
        with tempfile.TemporaryDirectory() as d:
            good = os.path.join(d, "good.json")
            with open(good, "w") as f:
                json.dump(inst, f)
            r = run("solve", "--algo", "exhaustive", "--instance", good)
            self.assertEqual(r.returncode, 0)
            sol = validate(r.stdout, "solve_report")["solution"]
            total = sum(int(a) * e for a, e in zip(inst["a"], sol)) % 256
            self.assertEqual(total, 15)

            bad = os.path.join(d, "bad.json")
            with open(bad, "w") as f:
                json.dump({**inst, "comment": "x"}, f)
            self.assertEqual(run("solve", "--algo", "exhaustive", "--instance", bad).returncode, 1)
            self.assertEqual(run("solve", "--algo", "exhaustive", "--instance", os.path.join(d, "none")).returncode, 1)


class Optimize(unittest.TestCase):
    def test_hgj_exponent(self):
        r = run("optimize", "--variant", "classical-hgj")
        self.assertEqual(r.returncode, 0)
        doc = validate(r.stdout, "optim_result")
        self.assertAlmostEqual(doc["time_exponent"], 0.3370, delta=5e-4)
        self.assertEqual(list(doc.keys()),
                         ["variant", "time_exponent", "memory_exponent", "params", "max_residual", "restarts_used"])

    def test_threads_do_not_change_output(self):
        base = run("--threads", "1", "optimize", "--variant", "classical-bcj", "--restarts", "20").stdout
        self.assertEqual(run("optimize", "--variant", "classical-bcj", "--restarts", "20", "--threads", "3").stdout,
                         base)
        self.assertEqual(run("optimize", "--variant", "classical-bcj", "--restarts", "20",
                             env={"SSLAB_THREADS": "2"}).stdout, base)

    def test_thread_precedence(self):
        self.assertEqual(run("optimize", "--variant", "classical-hgj", env={"SSLAB_THREADS": "zero"}).returncode, 1)
        r = run("--threads", "1", "optimize", "--variant", "classical-hgj", env={"SSLAB_THREADS": "zero"})
        self.assertEqual(r.returncode, 0)

    def test_memory_bound_never_helps(self):
        r = run("optimize", "--variant", "q-walk", "--memory-bound", "0.2", "--restarts", "20")
        self.assertIn(r.returncode, (0, 2))
        if r.returncode == 0:
            doc = validate(r.stdout, "optim_result")
            self.assertGreaterEqual(doc["time_exponent"], 0.2156 - 5e-4)
            self.assertLessEqual(doc["memory_exponent"], 0.2 + 1e-6)
        self.assertEqual(run("optimize", "--variant", "classical-hgj", "--memory-bound", "0.2").returncode, 1)
        self.assertEqual(run("optimize", "--variant", "q-asym-hgj-tradeoff", "--memory-bound", "0.7").returncode, 1)

    def test_emit_model(self):
        r = run("optimize", "--variant", "q-walk", "--emit-model")
        self.assertEqual(r.returncode, 0)
        self.assertIn("variables:", r.stdout)
        self.assertEqual(run("optimize", "--variant", "nope").returncode, 1)


class Cost(unittest.TestCase):
    def test_tables(self):
        doc = validate(run("cost", "grover", "--space", "0.4", "--solutions", "0.1").stdout, "cost_result")
        self.assertAlmostEqual(doc["value"], 0.15, places=12)
        doc = validate(run("cost", "qmatch", "--t-l1", "0.21", "--c", "0.3", "--l2", "0.35").stdout, "cost_result")
        self.assertEqual(doc["value"], 0.21)
        r = run("cost", "walk", "--setup", "0.2", "--update", "0.05", "--marked", "-0.19", "--gap", "-0.2")
        self.assertAlmostEqual(validate(r.stdout, "cost_result")["value"], 0.245, places=12)
        validate(run("cost", "qfilter", "--l", "0.27", "--c", "0.2", "--p", "0").stdout, "cost_result")
        validate(run("cost", "johnson", "--N", "0.3", "--R", "0.2", "--lists", "2").stdout, "cost_result")

    def test_domain_errors(self):
        self.assertEqual(run("cost", "grover", "--space", "0.2", "--solutions", "0.3").returncode, 1)
        self.assertEqual(run("cost", "qfilter", "--l", "0.27", "--c", "0.2", "--p", "0.01").returncode, 1)
        self.assertEqual(run("cost").returncode, 1)


class Tradeoff(unittest.TestCase):
    def test_csv_format(self):
        r = run("tradeoff", "--m", "0.3", "--restarts", "20")
        self.assertEqual(r.returncode, 0)
        self.assertNotIn("\r", r.stdout)
        lines = r.stdout.split("\n")
        self.assertEqual(lines[0], "m,time_exponent,memory_exponent")
        self.assertEqual(lines[-1], "")
        fields = lines[1].split(",")
        self.assertEqual(fields[0], "0.300000")
        for f in fields:
            self.assertEqual(len(f.split(".")[1]), 6)
        self.assertAlmostEqual(float(fields[1]), 0.2356, delta=1e-3)

    def test_bad_grid(self):
        self.assertEqual(run("tradeoff", "--m", "0.6").returncode, 1)
        self.assertEqual(run("tradeoff").returncode, 1)
        self.assertEqual(run("tradeoff", "--variant", "q-walk", "--m", "0.1").returncode, 1)


class VerifyHeuristic(unittest.TestCase):
    def test_bucket_loss_report(self):
        r = run("verify-heuristic", "--only", "bucket-loss")
        self.assertEqual(r.returncode, 0)
        doc = validate(r.stdout, "lab_report")
        self.assertTrue(doc["pass"])
        self.assertGreater(len(doc["bucket_loss"]), 0)

    def test_csv_and_configs(self):
        r = run("verify-heuristic", "--only", "bucket-loss", "--csv")
        self.assertEqual(r.returncode, 0)
        self.assertTrue(r.stdout.startswith("kind,name,trial,seed,expected,observed\n"))
        with tempfile.TemporaryDirectory() as d:
            bad = os.path.join(d, "bad.json")
            with open(bad, "w") as f:
                json.dump({"version": 1, "surprise": True}, f)
            self.assertEqual(run("verify-heuristic", "--config", bad).returncode, 1)
            failing = os.path.join(d, "failing.json")
            with open(failing, "w") as f:
                json.dump({"version": 1, "bucket_loss": [
                    {"name": "tight", "n": 24, "input": {"beta": 0.125}, "target": {"beta": 0.25},
                     "list_bits": 8, "c_bits": 8, "bound": 1, "repetitions": 30, "seed": 1}]}, f)
            r = run("verify-heuristic", "--config", failing)
            self.assertEqual(r.returncode, 2)
            self.assertFalse(validate(r.stdout, "lab_report")["pass"])


class RankUnrank(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(run("unrank", "--n", "4", "--counts", "1:1", "0").stdout, "1000\n")

    def test_round_trip(self):
        for v in ["10-12", "0000", "2-1", "1111", "-1-10"]:
            idx = run("rank", v).stdout.strip()
            counts = {s: 0 for s in ("1", "-1", "2")}
            i = 0
            while i < len(v):
                if v[i] == "-":
                    counts["-1"] += 1
                    i += 2
                    continue
                if v[i] != "0":
                    counts[v[i]] += 1
                i += 1
            spec = ",".join(f"{k}:{c}" for k, c in counts.items())
            n = len(v) - v.count("-")
            self.assertEqual(run("unrank", "--n", str(n), "--counts", spec, idx).stdout.strip(), v)

    def test_errors(self):
        r = run("unrank", "--n", "4", "--counts", "1:1", "4")
        self.assertEqual(r.returncode, 1)
        self.assertIn("out of range", r.stderr)
        self.assertEqual(run("unrank", "--n", "4", "--counts", "1:5", "0").returncode, 1)
        self.assertEqual(run("unrank", "--n", "4", "--counts", "3:1", "0").returncode, 1)
        self.assertEqual(run("unrank", "--n", "4", "--counts", "1:1", "-3").returncode, 1)
        self.assertEqual(run("rank", "10x").returncode, 1)


if __name__ == "__main__":
    unittest.main()
