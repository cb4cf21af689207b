#!/usr/bin/env python3
"""End-to-end checks of the dsy command line."""
import argparse
import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

ARGS = None


def run(*cmd, cwd=None, env=None):
    return subprocess.run([str(ARGS.cli), *map(str, cmd)], cwd=cwd, env=env, capture_output=True, text=True)


def validate(paths):
    res = subprocess.run([sys.executable, str(ARGS.validator), str(ARGS.schema), *map(str, paths)],
                         capture_output=True, text=True)
    return res.returncode, res.stdout + res.stderr


class Cli(unittest.TestCase):
    def test_configs_run_and_validate(self):
        configs = sorted(ARGS.configs.glob("*.cfg"))
        self.assertGreater(len(configs), 0)
        with tempfile.TemporaryDirectory() as tmp:
            for cfg in configs:
                res = run("--threads", 2, "run", cfg, cwd=tmp)
                self.assertEqual(res.returncode, 0, f"{cfg.name}: {res.stdout}{res.stderr}")
            records = sorted(Path(tmp).glob("*.json"))
            self.assertEqual(len(records), len(configs))
            code, out = validate(records)
            self.assertEqual(code, 0, out)
            for csv in Path(tmp).glob("*.csv"):
                agg = json.loads(csv.with_suffix(".json").read_text())
                self.assertEqual(agg["data"]["per_replica"]["file"], csv.name)
                lines = [l for l in csv.read_text().splitlines() if not l.startswith("#")]
                self.assertEqual(len(lines) - 1, agg["data"]["per_replica"]["count"])

    def test_malformed_config_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = Path(tmp) / "bad.cfg"
            cfg.write_text("model = standard_yule\nprobe = horizon\nreplicas = 0\noutput = out.json\n")
            res = run("run", cfg, cwd=tmp)
            self.assertEqual(res.returncode, 2)
            self.assertIn("replicas", res.stderr)
            self.assertIn("line 3", res.stderr)
            self.assertFalse((Path(tmp) / "out.json").exists())
            res = run("run", Path(tmp) / "missing.cfg", cwd=tmp)
            self.assertEqual(res.returncode, 2)

    def test_list_models(self):
        res = run("list-models")
        self.assertEqual(res.returncode, 0, res.stderr)
        for name in ("alpha_riccati", "nse_selfsimilar", "mean_field", "birth_death"):
            self.assertIn(name, res.stdout)

    def test_reproduce_tables_is_thread_independent(self):
        with tempfile.TemporaryDirectory() as tmp:
            outs = []
            for threads in (1, 3):
                out = Path(tmp) / f"t{threads}"
                res = run("--threads", threads, "reproduce-tables", "--out", out, "--replicas-scale", "0.001",
                          "--criteria", "2,3,5,6,8,10,12")
                self.assertIn(res.returncode, (0, 1), res.stderr)
                self.assertIn("criteria passed", res.stdout)
                outs.append(out)
            files = sorted(p.name for p in outs[0].glob("criterion_*.json"))
            self.assertEqual(len(files), 7)
            for name in files:
                a = json.loads((outs[0] / name).read_text())["data"]
                b = json.loads((outs[1] / name).read_text())["data"]
                self.assertEqual(json.dumps(a, sort_keys=True), json.dumps(b, sort_keys=True), name)
            code, text = validate(sorted(outs[0].glob("criterion_*.json")))
            self.assertEqual(code, 0, text)
            self.assertTrue((outs[0] / "summary.json").exists())

    def test_bad_scale_exits_2(self):
        with tempfile.TemporaryDirectory() as tmp:
            res = run("reproduce-tables", "--out", tmp, "--replicas-scale", "-1")
            self.assertEqual(res.returncode, 2)


def main():
    global ARGS
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cli", type=Path, required=True)
    ap.add_argument("--schema", type=Path, required=True)
    ap.add_argument("--configs", type=Path, required=True)
    ap.add_argument("--validator", type=Path, required=True)
    ARGS, rest = ap.parse_known_args()
    for name in ("cli", "schema", "configs", "validator"):
        setattr(ARGS, name, getattr(ARGS, name).resolve())
    unittest.main(argv=[sys.argv[0], "-v", *rest])


if __name__ == "__main__":
    main()
