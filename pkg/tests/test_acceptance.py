"""Acceptance criteria, one test per criterion with the pinned tolerances.

Each test records a PASS/FAIL line that the terminal summary prints; run
``python tests/test_acceptance.py`` for the same lines without pytest.
"""
import os
import subprocess
import sys
import time

import pytest

from hsmeasure import acceptance
from hsmeasure.cli import main

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # executed as a script
    ACCEPTANCE_LINES = []

SEED = 7


def record(number, name, passed, extra=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}{(' (' + extra + ')') if extra else ''}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def cli_json(argv, capsys):
    import json

    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_criterion_1_hs_construction(capsys):
    (code, rep), t_cli = timed(lambda: cli_json(["hs-construct", "--matrix", "diag:3,4"], capsys))
    crit, t_lib = timed(lambda: acceptance.criterion_1(SEED))
    ok = (code == 0 and abs(rep["outputs"]["achieved"] - 5.0) <= 1e-8 and crit.passed
          and t_cli + t_lib < 5.0)
    record(1, "HS construction", ok, f"worst rel err {crit.details['worst_relative_error']:.1e}, "
           f"{t_cli + t_lib:.2f}s < 5s")
    assert ok, (rep["outputs"]["achieved"], crit.details, t_cli + t_lib)


def test_criterion_2_divergence(capsys):
    (code, rep), t = timed(lambda: cli_json(["hs-diverge", "--blocks", "5"], capsys))
    sums = rep["outputs"]["partial_sums"]
    ok = (code == 0 and len(sums) == 5 and all(s >= n - 1e-8 for n, s in zip(range(1, 6), sums))
          and rep["outputs"]["xi_norm_sq_bound"] < 1 and t < 10.0)
    record(2, "divergence witness", ok, f"sums {[round(s, 6) for s in sums]}, "
           f"sum eps^2 {rep['outputs']['xi_norm_sq_bound']:.4f}, {t:.2f}s < 10s")
    assert ok


def test_criterion_3_pi_inequality():
    c = acceptance.criterion_3(SEED)
    record(3, "pi-inequality", c.passed, f"max excess {c.details['max_excess']:.2e}, "
           f"64-phase ratio {c.details['phase64_ratio']:.5f}")
    assert c.passed, c.details


def test_criterion_4_semivariation():
    c = acceptance.criterion_4(SEED)
    record(4, "semi-variation", c.passed, f"{c.details['matches']}/300 match, orthogonal worst "
           f"{c.details['orthogonal_worst']:.1e}")
    assert c.passed, c.details


def test_criterion_5_cross_norms():
    c = acceptance.criterion_5(SEED)
    record(5, "cross norm sandwich", c.passed, f"max violation {c.details['max_sandwich_violation']:.1e}, "
           f"elementary worst {c.details['elementary_worst']:.1e}")
    assert c.passed, c.details


def test_criterion_6_p_summing():
    c = acceptance.criterion_6(SEED)
    record(6, "p-summing", c.passed, f"p=2 worst {c.details['p2_worst_error']:.1e}, "
           f"monotone {c.details['monotone']}")
    assert c.passed, c.details


def test_criterion_7_khintchine(capsys):
    c = acceptance.criterion_7(SEED)
    (code, _), t = timed(lambda: cli_json(["khintchine", "--p", "1,1.5,3,4"], capsys))
    ok = c.passed and code == 0 and t < 10.0
    record(7, "Khintchine", ok, f"p=2 worst {c.details['p2_worst_error']:.1e}, table {t:.2f}s < 10s")
    assert ok, c.details


def test_criterion_8_half_average():
    c = acceptance.criterion_8(SEED)
    z = [abs(c.details[k]["estimate"] - c.details[k]["exact"]) / c.details[k]["stderr"] for k in ("C2", "C3")]
    record(8, "half-average", c.passed, f"|z| for C2, C3: {z[0]:.2f}, {z[1]:.2f} (limit 4)")
    assert c.passed, c.details


def test_criterion_9_spectral_demo():
    c = acceptance.criterion_9(SEED)
    record(9, "spectral demo", c.passed, f"max discrepancy {c.details['max_discrepancy']:.1e}")
    assert c.passed, c.details


def test_criterion_10_determinism(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"accept{k}.json"
        proc = subprocess.run([sys.executable, "-m", "hsmeasure.cli", "accept", "--seed", "7", "--quiet",
                               "--out", str(path)], capture_output=True, text=True, env=dict(os.environ))
        assert proc.returncode == 0, proc.stderr
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1]
    record(10, "determinism of accept --seed 7", ok, f"{len(outs[0])} bytes")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
