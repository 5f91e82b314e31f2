#!/usr/bin/env python3
"""End-to-end checks of the eigcount command-line tool."""

import argparse
import csv
import io
import json
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

CLI = None
SCHEMA_DIR = None

DIAG = """%%MatrixMarket matrix coordinate real general
% diagonal test pencil
8 8 8
1 1 0.1
2 2 0.2
3 3 0.3
4 4 0.4
5 5 0.5
6 6 0.6
7 7 0.7
8 8 0.8
"""

# 8x8 dense matrix similar to diag(0.1, ..., 0.8)
def similar_pencil(path):
    import numpy as np

    rng = np.random.default_rng(3)
    s = rng.standard_normal((8, 8))
    a = s @ np.diag(np.arange(1, 9) / 10.0) @ np.linalg.inv(s)
    lines = ["%%MatrixMarket matrix array real general", "8 8"]
    lines += ["%.17g" % a[i, j] for j in range(8) for i in range(8)]
    path.write_text("\n".join(lines) + "\n")


def run(*args, check=None):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    if check is not None and proc.returncode != check:
        raise AssertionError(f"exit {proc.returncode} != {check}\nstdout: {proc.stdout}\nstderr: {proc.stderr}")
    return proc


def validator(name):
    resources = []
    for p in pathlib.Path(SCHEMA_DIR).glob("*.schema.json"):
        doc = json.loads(p.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    registry = Registry().with_resources(resources)
    schema = json.loads((pathlib.Path(SCHEMA_DIR) / name).read_text())
    return jsonschema.Draft202012Validator(schema, registry=registry)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = pathlib.Path(cls.tmp.name)
        cls.diag = cls.dir / "diag.mtx"
        cls.diag.write_text(DIAG)
        cls.sim = cls.dir / "sim.mtx"
        similar_pencil(cls.sim)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def count(self, *extra):
        out = run("count", "--a", self.diag, "--center", "0", "--radius", "0.401", "--p", "6", *extra, check=0)
        return json.loads(out.stdout)

    def test_count_diagonal(self):
        rep = self.count()
        self.assertEqual(rep["s"], 4)
        self.assertGreaterEqual(rep["s1"], rep["s"])
        validator("count.schema.json").validate(rep)

    def test_count_empty_disk(self):
        out = run("count", "--a", self.diag, "--center", "5+5i", "--radius", "0.5", "--p", "4", check=0)
        rep = json.loads(out.stdout)
        self.assertEqual(rep["s"], 0)
        validator("count.schema.json").validate(rep)

    def test_count_deterministic(self):
        a = run("count", "--a", self.sim, "--radius", "0.401", "--p", "6", "--seed", "9", "--threads", "1", check=0)
        b = run("count", "--a", self.sim, "--radius", "0.401", "--p", "6", "--seed", "9", "--threads", "1", check=0)
        self.assertEqual(a.stdout, b.stdout)
        self.assertEqual(json.loads(a.stdout)["s"], 4)

    def test_output_file_and_timings(self):
        path = self.dir / "out.json"
        run("count", "--a", self.diag, "--radius", "0.401", "--p", "6", "--timings", "--output", path, check=0)
        rep = json.loads(path.read_text())
        self.assertIn("timings", rep)
        self.assertEqual(list(rep)[-1], "timings")
        validator("count.schema.json").validate(rep)

    def test_key_order(self):
        rep = self.count()
        self.assertEqual(list(rep)[:5], ["schema_version", "kind", "s", "s0", "s1"])

    def test_p_clamped(self):
        proc = run("count", "--a", self.diag, "--radius", "0.401", "--p", "50", check=0)
        self.assertIn("p = 8", proc.stderr)
        self.assertEqual(json.loads(proc.stdout)["config"]["p"], 8)

    def test_search(self):
        rep = json.loads(run("search", "--a", self.diag, "--radius", "0.401", "--p", "6", check=0).stdout)
        self.assertEqual(rep["kind"], "search")
        self.assertGreaterEqual(rep["s1"], 4)

    def test_eigs(self):
        for mtx in (self.diag, self.sim):
            rep = json.loads(run("eigs", "--a", mtx, "--radius", "0.401", "--p", "6", check=0).stdout)
            validator("eigs.schema.json").validate(rep)
            self.assertTrue(rep["converged"])
            self.assertEqual(len(rep["eigenpairs"]), 4)
            got = sorted(p["lambda"][0] for p in rep["eigenpairs"])
            for g, want in zip(got, [0.1, 0.2, 0.3, 0.4]):
                self.assertAlmostEqual(g, want, delta=1e-8)
            for p in rep["eigenpairs"]:
                self.assertLess(p["residual"], 1e-10)

    def test_eigs_loose_tolerance(self):
        rep = json.loads(run("eigs", "--a", self.diag, "--radius", "0.401", "--p", "6", "--eps", "1e-4", check=0).stdout)
        self.assertEqual(len(rep["eigenpairs"]), rep["s"])

    def test_eigs_max_iter_one(self):
        proc = run("eigs", "--a", self.diag, "--radius", "0.401", "--p", "6", "--max-iter", "1", check=5)
        rep = json.loads(proc.stdout)
        self.assertFalse(rep["converged"])
        validator("eigs.schema.json").validate(rep)

    def test_eigs_vectors_sidecar(self):
        path = self.dir / "vec.bin"
        run("eigs", "--a", self.diag, "--radius", "0.401", "--p", "6", "--vectors", path, check=0)
        data = path.read_bytes()
        self.assertEqual(data[:4], b"EIGV")
        rows = int.from_bytes(data[4:12], sys.byteorder)
        cols = int.from_bytes(data[12:20], sys.byteorder)
        self.assertEqual((rows, cols), (8, 4))
        self.assertEqual(len(data), 20 + rows * cols * 16)

    def test_generalized_pencil(self):
        b = self.dir / "b.mtx"
        b.write_text("%%MatrixMarket matrix coordinate real symmetric\n8 8 8\n" +
                     "".join(f"{i} {i} 2\n" for i in range(1, 9)))
        # eigenvalues 0.05, 0.1, ..., 0.4
        rep = json.loads(run("count", "--a", self.diag, "--b", b, "--radius", "0.401", "--p", "8", check=0).stdout)
        self.assertEqual(rep["s"], 8)

    def test_exit_codes(self):
        self.assertEqual(run("count").returncode, 2)
        self.assertEqual(run("nonsense").returncode, 2)
        self.assertEqual(run("count", "--a", self.diag, "--center", "1+zi").returncode, 2)
        self.assertEqual(run("count", "--a", self.diag, "--radius", "-1").returncode, 2)
        self.assertEqual(run("count", "--a", self.diag, "--alpha", "0.5").returncode, 2)
        self.assertEqual(run("count", "--a", self.dir / "missing.mtx").returncode, 3)
        bad = self.dir / "bad.mtx"
        bad.write_text("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 3\n")
        proc = run("count", "--a", bad)
        self.assertEqual(proc.returncode, 3)
        self.assertIn("line 3", proc.stderr)
        pattern = self.dir / "pattern.mtx"
        pattern.write_text("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n")
        self.assertEqual(run("count", "--a", pattern).returncode, 3)
        # det(zB - A) vanishes identically: every node factorization is singular
        zero = self.dir / "zero.mtx"
        zero.write_text("%%MatrixMarket matrix coordinate real general\n2 2 0\n")
        proc = run("count", "--a", zero, "--b", zero, "--p", "1")
        self.assertEqual(proc.returncode, 4)
        self.assertIn("singular", proc.stderr)

    def test_complex_center_forms(self):
        for center in ("0", "0+0i", "-0.0-0i", "0e0+0e-3i"):
            rep = json.loads(run("count", "--a", self.diag, "--center", center, "--radius", "0.401", "--p", "6",
                                 check=0).stdout)
            self.assertEqual(rep["s"], 4, center)
        rep = json.loads(run("count", "--a", self.diag, "--center", "-6e5+2e5i", "--radius", "3e5", "--p", "4",
                             check=0).stdout)
        self.assertEqual(rep["config"]["center"], [-6e5, 2e5])

    def test_filter_profile(self):
        out = run("filter-profile", check=0).stdout
        rows = list(csv.DictReader(io.StringIO(out)))
        self.assertEqual(list(rows[0]), ["r", "theta", "re_psi"])
        self.assertEqual(float(rows[0]["r"]), 0.0)
        self.assertAlmostEqual(float(rows[0]["re_psi"]), 1.0, delta=1e-13)
        radii = sorted({float(r["r"]) for r in rows})
        self.assertAlmostEqual(radii[-1], 4.0)
        for r in rows:
            rr, v = float(r["r"]), float(r["re_psi"])
            if rr < 1.0:
                self.assertGreater(v, 0.5)
            elif rr > 1.0:
                self.assertLess(v, 0.5)

    def test_experiment51(self):
        out = run("experiment51", check=0).stdout
        lines = out.splitlines()
        self.assertIn("count = 4 (exact 4)", out)
        table = lines[1:9]
        self.assertEqual(len(table), 8)
        self.assertEqual(sum(len(l.split()) == 3 for l in table), 6)
        self.assertEqual(run("experiment51", "--seed", "7", check=0).stdout,
                         run("experiment51", "--seed", "7", check=0).stdout)
        rows = list(csv.DictReader(io.StringIO(run("experiment51", "--csv", check=0).stdout)))
        self.assertEqual(len(rows), 8)
        self.assertEqual(sum(r["re_eig_m"] != "" for r in rows), 6)
        for r in rows[:4]:
            self.assertGreater(float(r["re_d"]), 0.5)
        for r in rows[4:]:
            self.assertLess(float(r["re_d"]), 0.5)

    def test_help(self):
        self.assertEqual(run("--help").returncode, 0)
        self.assertEqual(run("count", "--help").returncode, 0)


def main():
    global CLI, SCHEMA_DIR
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--schema-dir", required=True)
    args, rest = parser.parse_known_args()
    CLI, SCHEMA_DIR = args.cli, args.schema_dir
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)


if __name__ == "__main__":
    main()
