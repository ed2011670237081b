# Copyright 2026 The QForge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the qforge command-line tool.

Usage: cli_test.py <path-to-qforge> <repo-root>
"""

import csv
import io
import json
import math
import os
import struct
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

QFORGE = ""
ROOT = Path()


def data(name):
    return str(ROOT / "examples_data" / name)


def schema(name):
    return json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())


def qforge(*args, env=None, check=True):
    full_env = dict(os.environ)
    full_env.pop("QFORGE_THREADS", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([QFORGE, *map(str, args)], capture_output=True, env=full_env, timeout=600)
    if check and proc.returncode != 0:
        raise AssertionError(f"qforge {' '.join(map(str, args))} exited {proc.returncode}: {proc.stderr.decode()}")
    return proc


def qforge_json(*args, kind=None, **kw):
    out = json.loads(qforge(*args, **kw).stdout)
    if kind:
        jsonschema.validate(out, schema(kind))
    return out


class SampleData(unittest.TestCase):
    def test_inputs_validate(self):
        for name in ["bell.json", "plus.json", "rx.json", "ghz4.json"]:
            jsonschema.validate(json.loads(Path(data(name)).read_text()), schema("circuit"))
        jsonschema.validate(json.loads(Path(data("ham_z.json")).read_text()), schema("hamiltonian"))
        jsonschema.validate(json.loads(Path(data("noise_depol.json")).read_text()), schema("noise_model"))


class Commands(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_run_dumps_bell_state(self):
        dump = self.dir / "bell.qsv"
        out = qforge_json("run", data("bell.json"), "--dump-state", dump, kind="run_result")
        self.assertAlmostEqual(out["norm"], 1.0, places=12)
        raw = dump.read_bytes()
        self.assertEqual(raw[:4], b"QSV1")
        n, precision, reserved = struct.unpack("<III", raw[4:16])
        self.assertEqual((n, precision, reserved), (2, 1, 0))
        amps = struct.unpack("<8d", raw[16:])
        expected = [math.sqrt(0.5), 0, 0, 0, 0, 0, math.sqrt(0.5), 0]
        for a, e in zip(amps, expected):
            self.assertAlmostEqual(a, e, places=12)

    def test_run_density_backend(self):
        dump = self.dir / "bell.qdm"
        out = qforge_json("run", data("bell.json"), "--backend", "dm", "--noise", data("noise_depol.json"),
                          "--dump-state", dump, kind="run_result")
        self.assertAlmostEqual(out["trace"], 1.0, places=12)
        self.assertLess(out["purity"], 1.0)
        raw = dump.read_bytes()
        self.assertEqual(raw[:4], b"QDM1")
        self.assertEqual(len(raw), 16 + 16 * 16)

    def test_sample_conserves_shots(self):
        out = qforge_json("sample", data("plus.json"), "--shots", 100000, "--seed", 1, kind="sample_result")
        self.assertEqual(sum(out["counts"].values()), 100000)
        self.assertEqual(set(out["counts"]), {"0", "1"})
        self.assertLess(abs(out["counts"]["0"] - 50000), 5 * math.sqrt(25000))
        dm = qforge_json("sample", data("bell.json"), "--backend", "dm", "--shots", 500, "--seed", 2,
                         kind="sample_result")
        self.assertEqual(set(dm["counts"]), {"00", "11"})

    def test_expval(self):
        out = qforge_json("expval", data("rx.json"), data("ham_z.json"), "--params", "theta=0.3", kind="expval_result")
        self.assertAlmostEqual(out["values"][0], math.cos(0.3), places=12)
        single = qforge_json("expval", data("rx.json"), data("ham_z.json"), "--params", "theta=0.3", "--precision",
                             "single", kind="expval_result")
        self.assertAlmostEqual(single["values"][0], math.cos(0.3), places=5)
        noisy = qforge_json("expval", data("bell.json"), data("ham_z.json"), "--noise", data("noise_depol.json"),
                            "--trajectories", 500, "--seed", 4, kind="expval_result")
        self.assertEqual(len(noisy["std_errors"]), 1)

    def test_grad_matches_closed_form_and_finite_differences(self):
        def table(*extra):
            text = qforge("grad", data("rx.json"), data("ham_z.json"), data("batch.csv"), *extra).stdout.decode()
            rows = list(csv.DictReader(io.StringIO(text)))
            self.assertEqual(list(rows[0].keys()), ["row", "value_h0", "grad_h0_theta"])
            return rows

        with open(data("batch.csv")) as f:
            thetas = [float(r["theta"]) for r in csv.DictReader(f)]
        adjoint = table()
        fd = table("--method", "fd")
        shift = table("--method", "shift")
        for theta, a, f, s in zip(thetas, adjoint, fd, shift):
            self.assertAlmostEqual(float(a["value_h0"]), math.cos(theta), places=12)
            self.assertAlmostEqual(float(a["grad_h0_theta"]), -math.sin(theta), places=12)
            self.assertLess(abs(float(a["grad_h0_theta"]) - float(f["grad_h0_theta"])), 1e-5)
            self.assertLess(abs(float(a["grad_h0_theta"]) - float(s["grad_h0_theta"])), 1e-10)
        summary = qforge_json("grad", data("rx.json"), data("ham_z.json"), data("batch.csv"), "--output",
                              self.dir / "g.csv", kind="grad_summary")
        self.assertEqual(summary["rows"], len(thetas))
        self.assertTrue((self.dir / "g.csv").read_text().startswith("row,value_h0,grad_h0_theta\n"))

    def test_qaoa_triangle_and_k5(self):
        tri = qforge_json("qaoa", data("triangle.txt"), "--p", 2, "--iterations", 200, "--seed", 7, kind="qaoa_result")
        self.assertGreaterEqual(tri["expected_cut"], 1.9)
        self.assertEqual(tri["best_cut"], 2)
        k5 = qforge_json("qaoa", data("k5.txt"), "--p", 3, "--iterations", 200, "--seed", 7, kind="qaoa_result")
        self.assertEqual(k5["best_cut"], 6)
        self.assertEqual(k5["optimal_cut"], 6)

    def test_compile_and_map(self):
        layout = self.dir / "layout.json"
        out = qforge_json("compile", data("ghz4.json"), "--coupling", "line:4", "--layout", layout,
                          "--output", self.dir / "c.json", kind="compile_result")
        jsonschema.validate(json.loads(layout.read_text()), schema("layout"))
        jsonschema.validate(json.loads((self.dir / "c.json").read_text()), schema("circuit"))
        for g in out["circuit"]["gates"]:
            qs = g["targets"] + g["controls"]
            if len(qs) == 2:
                self.assertEqual(abs(qs[0] - qs[1]), 1, g)
        edges = self.dir / "edges.txt"
        edges.write_text("0 1\n1 2\n2 3\n3 0\n")
        ring = qforge_json("compile", data("ghz4.json"), "--coupling-file", edges, kind="compile_result")
        self.assertEqual(ring["n_physical"], 4)

    def test_bench(self):
        csv_path = self.dir / "bench.csv"
        qforge("bench", "--min-qubits", 4, "--max-qubits", 6, "--reps", 3, "--verify", "--quiet", "--csv", csv_path)
        with open(csv_path) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(list(rows[0].keys()),
                         ["suite", "n_qubits", "gates", "reps", "median_s", "min_s", "threads", "precision"])
        for suite in ["RandomComplex", "RandomSimple"]:
            mine = [r for r in rows if r["suite"] == suite]
            self.assertEqual([int(r["n_qubits"]) for r in mine], [4, 5, 6])
            self.assertTrue(all(float(r["median_s"]) > 0 and float(r["min_s"]) > 0 for r in mine))

    def test_exit_codes(self):
        self.assertEqual(qforge("run", self.dir / "missing.json", check=False).returncode, 2)
        bad = self.dir / "bad.json"
        bad.write_text('{"n_qubits": 1, "gates": [{"kind": "rx", "targets": [0]}]}')
        proc = qforge("run", bad, check=False)
        self.assertEqual(proc.returncode, 2)
        self.assertIn("gates[0]", proc.stderr.decode())
        self.assertIn("arg", proc.stderr.decode())
        self.assertEqual(qforge("run", data("bell.json"), "--backend", "gpu", check=False).returncode, 2)
        proc = qforge("run", data("rx.json"), check=False)
        self.assertEqual(proc.returncode, 3)
        self.assertIn("theta", proc.stderr.decode())
        self.assertEqual(qforge("run", data("rx.json"), "--params", "theta", check=False).returncode, 2)
        self.assertEqual(qforge("qaoa", data("triangle.txt"), "--p", 0, check=False).returncode, 2)

    def test_threads_environment_fallback(self):
        a = qforge("run", data("ghz4.json"), env={"QFORGE_THREADS": "2"}).stdout
        b = qforge("run", data("ghz4.json"), "--threads", 2).stdout
        self.assertEqual(a, b)

    def test_help_lists_every_flag(self):
        text = qforge("--help").stdout.decode()
        for flag in ["--backend", "--precision", "--shots", "--seed", "--threads", "--threshold-qubits",
                     "--dump-state", "--params", "--noise", "--coupling", "--emit-circuits", "--method"]:
            self.assertIn(flag, text)


if __name__ == "__main__":
    QFORGE = sys.argv[1]
    ROOT = Path(sys.argv[2])
    unittest.main(argv=[sys.argv[0], "-v"])
