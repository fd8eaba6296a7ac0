"""Acceptance suite: eight end-to-end criteria, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion
lines; without -s pytest captures them and shows them only on failure.
"""

import itertools
import random
import time

import pytest

import ordstat as o
from ordstat.cli import main


def _report(index: int, label: str, ok: bool) -> None:
    print(f"criterion {index} ({label}): {'PASS' if ok else 'FAIL'}",
          flush=True)
    assert ok, f"criterion {index} ({label}) failed"


@pytest.fixture(scope="module")
def exhaustive_run():
    started = time.perf_counter()
    report = o.exhaustive_verify(o.VerifyPlan())
    return report, time.perf_counter() - started


def test_criterion_1_exhaustive_oracle_equivalence(exhaustive_run):
    report, elapsed = exhaustive_run
    ok = report.ok and report.cases_run >= 10 ** 5 and elapsed < 120.0
    _report(1, f"exhaustive oracle equivalence, {report.cases_run} cases "
               f"in {elapsed:.1f}s", ok)


def test_criterion_2_fullrange_equals_naive(exhaustive_run):
    report, _ = exhaustive_run
    ok = not any(f.mode in ("naive", "fullrange") for f in report.failures)
    # direct cross-check without the sort oracle in between
    alphabet = (0.0, 1.0, 2.0, 3.0)
    for length in range(1, 5):
        for combo in itertools.product(alphabet, repeat=length):
            values = list(combo)
            for rank in range(1, length + 1):
                if o.select_fullrange(rank, values) != o.select_naive(
                        rank, values):
                    ok = False
    _report(2, "full-range branching equals first-terms branching", ok)


_MINMAX_GOLDEN = {
    (1, 1): "x1",
    (2, 1): "min{x1, x2}",
    (2, 2): "max{x2, x1}",
    (3, 1): "min{min{x1, x2}, x3}",
    (3, 2): "max{max{min{x2, x3}, min{x1, x3}}, min{x1, x2}}",
    (3, 3): "max{max{x3, x2}, max{x3, x1}}",
    (4, 1): "min{min{min{x1, x2}, x3}, x4}",
    (4, 2): "max{max{max{min{min{x2, x3}, x4}, min{min{x1, x3}, x4}}, "
            "min{min{x1, x2}, x4}}, min{min{x1, x2}, x3}}",
    (4, 3): "max{max{max{max{min{x3, x4}, min{x2, x4}}, min{x2, x3}}, "
            "max{max{min{x3, x4}, min{x1, x4}}, min{x1, x3}}}, "
            "max{max{min{x2, x4}, min{x1, x4}}, min{x1, x2}}}",
    (4, 4): "max{max{max{x4, x3}, max{x4, x2}}, "
            "max{max{x4, x3}, max{x4, x1}}}",
}


def _flat_min3(x1, x2, x3):
    # minimum of three via the pairwise identity, fully written out with
    # no shared subterms
    inner = abs(x1 - x2)
    return (x1 + x2 + 2 * x3 - inner - abs(x1 + x2 - 2 * x3 - inner)) / 4


def _flat_min4(x1, x2, x3, x4):
    inner = abs(x1 - x2)
    mid = abs(x1 + x2 - 2 * x3 - inner)
    head = x1 + x2 + 2 * x3
    return (head + 4 * x4 - inner - mid
            - abs(head - 4 * x4 - inner - mid)) / 8


def test_criterion_3_golden_formulas():
    ok = all(
        o.emit_text(o.build_selection_expr(n_vars, rank, "minmax")) == text
        for (n_vars, rank), text in _MINMAX_GOLDEN.items())
    min3 = o.compile_to_pyfunc(o.build_selection_expr(3, 1, "arithmetic"))
    min4 = o.compile_to_pyfunc(o.build_selection_expr(4, 1, "arithmetic"))
    rng = random.Random(3)
    for _ in range(1000):
        xs = [rng.uniform(-1e3, 1e3) for _ in range(4)]
        scale = max(1.0, max(abs(x) for x in xs))
        if abs(min3(xs[:3]) - _flat_min3(*xs[:3])) > 1e-9 * scale:
            ok = False
        if abs(min4(xs) - _flat_min4(*xs)) > 1e-9 * scale:
            ok = False
    _report(3, "golden formula renderings and flattened expansions", ok)


def test_criterion_4_pairwise_identities():
    ok = True
    for a in range(-1000, 1001):
        fa = float(a)
        for b in range(-1000, 1001):
            fb = float(b)
            if o.pairwise_min_arith(fa, fb) != min(fa, fb):
                ok = False
            if o.pairwise_max_arith(fa, fb) != max(fa, fb):
                ok = False
    rng = random.Random(4)
    for _ in range(10 ** 5):
        a = rng.uniform(-1e6, 1e6)
        b = rng.uniform(-1e6, 1e6)
        tol = 1e-12 * max(1.0, abs(a), abs(b))
        if abs(o.pairwise_min_arith(a, b) - min(a, b)) > tol:
            ok = False
        if abs(o.pairwise_max_arith(a, b) - max(a, b)) > tol:
            ok = False
    _report(4, "branchless pairwise min/max identities", ok)


def _sorted_median(values):
    ordered = sorted(values)
    half = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[half]
    return (ordered[half - 1] + ordered[half]) / 2


def test_criterion_5_median_agreement():
    rng = random.Random(5)
    ok = True
    for parity in (1, 0):
        lengths = [L for L in range(1, 16) if L % 2 == parity]
        for _ in range(10 ** 4):
            length = rng.choice(lengths)
            values = [float(rng.randint(-1000, 1000)) for _ in range(length)]
            if o.median(values, mode="memo") != _sorted_median(values):
                ok = False
    _report(5, "median equals sort-based median", ok)


def test_criterion_6_call_count_law():
    ok = all(
        o.count_calls(length, rank) == (length - rank + 2) ** (rank - 1)
        for length in range(1, 9) for rank in range(1, length + 1))
    _report(6, "base-case call count law", ok)


def test_criterion_7_pipeline_soundness():
    ok = True
    rng = random.Random(7)
    for length in range(1, 7):
        for rank in range(1, length + 1):
            root, _ = o.cse(o.build_selection_expr(length, rank,
                                                   "arithmetic"))
            program = o.emit_slp(root)
            fn = o.compile_to_pyfunc(root)
            for _ in range(200):
                xs = [rng.uniform(-100, 100) for _ in range(length)]
                named = {i + 1: x for i, x in enumerate(xs)}
                expected = o.select_naive(rank, xs)
                tol = 1e-9 * max(1.0, max(abs(x) for x in xs))
                if abs(o.interpret_slp(program, named) - expected) > tol:
                    ok = False
                if abs(fn(xs) - expected) > tol:
                    ok = False
            for _ in range(50):
                xs = [float(rng.randint(-8, 8)) for _ in range(length)]
                named = {i + 1: x for i, x in enumerate(xs)}
                expected = o.select_naive(rank, xs)
                if o.interpret_slp(program, named) != expected:
                    ok = False
                if fn(xs) != expected:
                    ok = False
    _report(7, "lower/CSE/SLP pipeline equals direct selection", ok)


def test_criterion_8_deterministic_outputs(capsys):
    def run(argv):
        code = main(argv)
        return code, capsys.readouterr()

    verify_argv = ["verify", "--exhaustive", "--max-n", "4",
                   "--random", "--trials", "50", "--seed", "7"]
    bench_argv = ["bench", "--growth", "--max-n", "6", "--repeats", "0"]
    ok = (run(verify_argv) == run(verify_argv)
          and run(bench_argv) == run(bench_argv))
    _report(8, "byte-identical verify and bench output", ok)
