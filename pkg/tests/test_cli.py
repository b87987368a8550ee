"""Golden-file tests for the command line.

Set SULLIVAN_UPDATE_GOLDEN=1 to rewrite the files after an intended change.
"""

import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from sullivan.cli import run

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"

CASES = [
    ("check_odd_gottlieb", "check models/odd_gottlieb.model", 0),
    ("check_weighted", "check --format structured models/weighted.model", 0),
    ("check_not_minimal", "check tests/fixtures/not_minimal.model", 1),
    ("check_empty", "check tests/fixtures/empty.model", 0),
    ("cohomology_odd_gottlieb", "cohomology --max 12 models/odd_gottlieb.model", 0),
    ("cohomology_s2_structured", "cohomology --max 6 --format structured models/s2.model", 0),
    ("gottlieb_x", "gottlieb --gen x models/odd_gottlieb.model", 0),
    ("gottlieb_x_structured", "gottlieb --gen x --format structured models/odd_gottlieb.model", 0),
    ("gottlieb_u", "gottlieb --gen u models/odd_gottlieb.model", 1),
    ("gottlieb_s2_e", "gottlieb --gen e models/s2.model", 1),
    ("terminal_y", "terminal --gen y models/odd_gottlieb.model", 0),
    ("terminal_x", "terminal --gen x models/odd_gottlieb.model", 1),
    ("terminal_g_nonterminal", "terminal --gen g models/nonterminal_even.model", 1),
    ("basis_change_odd", "basis-change --kind odd --gen x --cap 12 models/odd_gottlieb.model", 0),
    ("basis_change_even", "basis-change --kind even --gen g models/nonterminal_even.model", 0),
    ("basis_change_combined", "basis-change --kind combined --gen y --x x models/two_parity.model", 0),
    ("basis_change_combined_structured", "basis-change --kind combined --gen y --x x --format structured models/two_parity.model", 0),
    ("basis_change_not_gottlieb", "basis-change --kind odd --gen z models/odd_gottlieb.model", 1),
    ("homology_s2", "homology --from 1 --to 4 models/s2.model", 0),
    ("homology_worked_bracket", "homology --from 1 --to 6 --bracket models/odd_gottlieb.model", 0),
    ("probe_s2_n1", "probe-s2n --n 1 models/s2.model", 1),
    ("probe_two_parity_n2", "probe-s2n --n 2 models/two_parity.model", 1),
    ("zero_divisor_product", "zero-divisor --gen y models/product_y2_g3.model", 0),
    ("regression_suite", "verify-paper", 0),
]

ERRORS = [
    ("gottlieb --gen x --cap 3 models/odd_gottlieb.model", 2, "below the top generator degree"),
    ("gottlieb --gen q models/odd_gottlieb.model", 2, "no generator named"),
    ("gottlieb --gen x models/missing.model", 2, "cannot read"),
    ("cohomology", 2, ""),
    ("basis-change --kind combined --gen y models/two_parity.model", 2, "needs --theta or --x"),
    ("gottlieb --gen x tests/fixtures/not_minimal.model", 1, "minimality violation"),
]


def _run(argline):
    out, err = io.StringIO(), io.StringIO()
    try:
        code = run(argline.split(), out, err)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


@pytest.mark.parametrize("name, argline, code", CASES, ids=[c[0] for c in CASES])
def test_golden_output(name, argline, code):
    got_code, out, err = _run(argline)
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("SULLIVAN_UPDATE_GOLDEN"):
        path.write_text(out)
    assert got_code == code, err
    assert out == path.read_text()


def test_exit_code_matches_verdict_line():
    for name, _, code in CASES:
        text = (GOLDEN / f"{name}.txt").read_text()
        if "verdict: PASS" in text.splitlines()[-3:] or text.rstrip().endswith("verdict: PASS"):
            assert code == 0, name
        if text.rstrip().endswith("verdict: FAIL"):
            assert code == 1, name
        if "exit: " in text:
            assert text.rstrip().splitlines()[-1] == f"exit: {code}", name


@pytest.mark.parametrize("argline, code, fragment", ERRORS)
def test_error_exit_codes(argline, code, fragment):
    got, out, err = _run(argline)
    assert got == code
    assert fragment in err


def test_truncated_model_homology_is_inconclusive(tmp_path):
    p = tmp_path / "t.model"
    p.write_text("model {\n  generator e 2\n  generator f 3\n  complete_through 3\n  d e = 0\n  d f = e^2\n}\n")
    code, out, err = _run(f"homology --from 1 --to 3 {p}")
    assert code == 3 and "inconclusive" in err


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "sullivan.cli", "terminal", "--gen", "y", "models/odd_gottlieb.model"], capture_output=True, text=True, cwd=ROOT)
    assert res.returncode == 0 and res.stdout == "terminal: true\n"
