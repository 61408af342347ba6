"""End-to-end checks of the gkdv command-line tool."""

import argparse
import csv
import json
import math
import os
import re
import shutil
import subprocess
import sys
import unittest

ARGS = None


def run(*cmd, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    return subprocess.run([ARGS.cli, *cmd], capture_output=True, text=True, env=e)


def workdir(name):
    path = os.path.join(ARGS.work, name)
    shutil.rmtree(path, ignore_errors=True)
    os.makedirs(path)
    return path


def config(name):
    return os.path.join(ARGS.configs, name)


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    return rows[0], [[float(x) for x in r] for r in rows[1:]]


def read_json(path):
    with open(path) as f:
        return json.load(f)


class Dispersion(unittest.TestCase):
    def test_zero_range_gives_single_zero_row(self):
        out = workdir("disp_zero")
        r = run("dispersion", "--config", config("dispersion_zero.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        header, rows = read_csv(os.path.join(out, "dispersion.csv"))
        self.assertEqual(header, ["k", "omega2", "omega_model", "phase_v", "group_v"])
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0][0:3], [0.0, 0.0, 0.0])

    def test_acoustic_row(self):
        out = workdir("disp_water")
        r = run("dispersion", "--config", config("dispersion_water.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        _, rows = read_csv(os.path.join(out, "dispersion.csv"))
        row = min(rows, key=lambda x: abs(x[0] - 0.01))
        self.assertAlmostEqual(row[0], 0.01, places=12)
        ratio = row[1] / (9.81 * row[0] ** 2)
        self.assertTrue(0.9999 <= ratio <= 1.0001, ratio)

    def test_capillary_rows(self):
        out = workdir("disp_cap")
        r = run("dispersion", "--config", config("dispersion_capillary.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        _, rows = read_csv(os.path.join(out, "dispersion.csv"))
        h, sigma, rho = 0.002, 0.072, 1000.0
        for k, w2, *_ in rows:
            ratio = w2 / (h * sigma / rho * k ** 4)
            self.assertTrue(0.99 <= ratio <= 1.01, (k, ratio))

    def test_invalid_range_exit_2(self):
        out = workdir("disp_bad")
        bad = os.path.join(out, "bad.json")
        with open(bad, "w") as f:
            json.dump({"params": {"h": 1.0, "g": 9.81}, "k_min": 2.0, "k_max": 1.0}, f)
        r = run("dispersion", "--config", bad, "--out", out)
        self.assertEqual(r.returncode, 2)
        self.assertIn("k range", r.stderr)

    def test_unknown_key_rejected(self):
        out = workdir("disp_unknown")
        bad = os.path.join(out, "bad.json")
        with open(bad, "w") as f:
            json.dump({"params": {"h": 1.0, "g": 9.81}, "k_max": 1.0, "kmax": 2.0}, f)
        r = run("dispersion", "--config", bad, "--out", out)
        self.assertEqual(r.returncode, 2)
        self.assertIn("kmax", r.stderr)

    def test_invalid_params_rejected(self):
        out = workdir("disp_params")
        bad = os.path.join(out, "bad.json")
        with open(bad, "w") as f:
            json.dump({"params": {"h": 1.0, "g": 0.0, "sigma": 0.0}, "k_max": 1.0}, f)
        r = run("dispersion", "--config", bad, "--out", out)
        self.assertEqual(r.returncode, 2)

    def test_output_is_deterministic_with_17_digits(self):
        a, b = workdir("det_a"), workdir("det_b")
        for d in (a, b):
            self.assertEqual(run("dispersion", "--config", config("dispersion_water.json"), "--out", d).returncode, 0)
        with open(os.path.join(a, "dispersion.csv"), "rb") as fa, open(os.path.join(b, "dispersion.csv"), "rb") as fb:
            ta, tb = fa.read(), fb.read()
        self.assertEqual(ta, tb)
        sample = ta.decode().splitlines()[2].split(",")[1]
        self.assertEqual(len(re.sub(r"[^0-9]", "", sample.split("e")[0]).lstrip("0")), 17, sample)


class Soliton(unittest.TestCase):
    def test_printed_shallow(self):
        out = workdir("sol_printed")
        r = run("soliton", "--config", config("soliton_printed_shallow.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = read_json(os.path.join(out, "soliton.json"))
        self.assertAlmostEqual(j["a1"], -2.0, delta=2e-8)
        self.assertAlmostEqual(j["radius"], 2.0, delta=0.04)
        self.assertAlmostEqual(j["peak"], 0.5, delta=1e-10)
        self.assertEqual(j["residual"]["verdict"], "FAIL")
        _, rows = read_csv(os.path.join(out, "soliton_profile.csv"))
        self.assertAlmostEqual(max(r[1] for r in rows), 0.5, delta=1e-10)

    def test_derived_shallow(self):
        out = workdir("sol_derived")
        r = run("soliton", "--config", config("soliton_derived_shallow.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = read_json(os.path.join(out, "soliton.json"))
        self.assertAlmostEqual(j["a1"], -1.0, delta=1e-8)
        self.assertAlmostEqual(j["peak"], -0.25, delta=1e-10)
        self.assertEqual(j["residual"]["verdict"], "PASS")
        self.assertEqual(j["residual"]["equation"], "kdv_steady")

    def test_mode_flag_overrides_config(self):
        out = workdir("sol_flag")
        r = run("soliton", "--config", config("soliton_derived_shallow.json"), "--out", out, "--mode", "paper_printed")
        self.assertEqual(r.returncode, 0, r.stderr)
        j = read_json(os.path.join(out, "soliton.json"))
        self.assertEqual(j["mode"], "paper_printed")
        self.assertAlmostEqual(j["a1"], -2.0, delta=1e-8)

    def test_derived_full(self):
        out = workdir("sol_full")
        r = run("soliton", "--config", config("soliton_derived_full.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = read_json(os.path.join(out, "soliton.json"))
        self.assertEqual(j["residual"]["equation"], "gkdv_steady")
        self.assertEqual(j["residual"]["verdict"], "PASS")
        self.assertLess(j["peak"], 0.0)

    def test_resonance_exit_3(self):
        out = workdir("sol_res")
        r = run("soliton", "--config", config("soliton_resonant.json"), "--out", out)
        self.assertEqual(r.returncode, 3, r.stderr)
        j = read_json(os.path.join(out, "soliton.json"))
        self.assertEqual(j["status"], "error")
        self.assertEqual(j["kind"], "resonance")


class Evolve(unittest.TestCase):
    def test_zero_initial_data(self):
        out = workdir("evo_zero")
        r = run("evolve", "--config", config("evolve_zero.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = read_json(os.path.join(out, "evolve_summary.json"))
        self.assertEqual(len(j["snapshots"]), 3)
        for s in j["snapshots"]:
            _, rows = read_csv(os.path.join(out, s["file"]))
            self.assertTrue(all(r[1] == 0.0 for r in rows))

    def test_kdv_transit(self):
        out = workdir("evo_kdv")
        r = run("evolve", "--config", config("evolve_kdv_transit.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = read_json(os.path.join(out, "evolve_summary.json"))
        self.assertLessEqual(j["speed_rel_error"], 5e-3)
        self.assertAlmostEqual(j["expected_speed"], 1.0 - 0.25 / 6.0, places=14)
        self.assertLessEqual(j["shape_error"], 1e-3)
        self.assertLessEqual(j["mass_drift"], 1e-10)

    def test_linear_phase(self):
        out = workdir("evo_phase")
        r = run("evolve", "--config", config("evolve_linear_mode.json"), "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        j = read_json(os.path.join(out, "evolve_summary.json"))
        self.assertLessEqual(j["linear_phase_error"], 1e-8)

    def test_unstable_step_exit_4(self):
        out = workdir("evo_unstable")
        r = run("evolve", "--config", config("evolve_unstable.json"), "--out", out)
        self.assertEqual(r.returncode, 4, r.stderr)
        j = read_json(os.path.join(out, "evolve_summary.json"))
        self.assertEqual(j["status"], "error")
        self.assertIn("last_good_time", j)


class Verify(unittest.TestCase):
    def test_list(self):
        r = run("verify", "--list")
        self.assertEqual(r.returncode, 0)
        self.assertEqual(len(r.stdout.strip().splitlines()), 11)

    def test_default_passes(self):
        out = workdir("verify")
        r = run("verify", "--out", out, env={"GKDV_THREADS": "2"})
        self.assertEqual(r.returncode, 0, r.stdout + r.stderr)
        j = read_json(os.path.join(out, "verify_report.json"))
        self.assertEqual(j["status"], "PASS")
        self.assertEqual(len(j["criteria"]), 11)

    def test_tampered_fails_naming_discrepancy(self):
        out = workdir("verify_tampered")
        r = run("verify", "--config", config("verify_tampered.json"), "--out", out)
        self.assertEqual(r.returncode, 1, r.stdout + r.stderr)
        self.assertIn("does not satisfy steady KdV", r.stdout)

    def test_bad_thread_env(self):
        r = run("verify", "--out", workdir("verify_env"), env={"GKDV_THREADS": "zero"})
        self.assertEqual(r.returncode, 2)


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--cli", required=True)
    p.add_argument("--configs", required=True)
    p.add_argument("--work", required=True)
    ARGS, rest = p.parse_known_args()
    os.makedirs(ARGS.work, exist_ok=True)
    unittest.main(argv=[sys.argv[0], "-v", *rest])
