"""Acceptance criteria 1-14.

Each test prints one ``PASS criterion N`` or ``FAIL criterion N`` line (run
with ``-s`` or look at the captured output) and then asserts.  The default
cutoff is D = 4; ``test_extended`` reruns every suite at D = 6.
"""

import json

import pytest

from fglschur.dual import compare_printed_onerow
from fglschur.fgl import ADDITIVE, K_THEORY, UNIVERSAL
from fglschur.partitions import partitions, strict_partitions
from fglschur.schur import schur_P, schur_Q, schur_s_factorial
from fglschur.suites import SUITES, RunConfig
from fglschur.tableaux import check_conjectures
from oracles import classical_P, classical_Q, classical_s, same

D = 4


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}" + (f": {detail}" if detail else ""))
        return ok

    return emit


def _suite(name, **kw):
    rep = SUITES[name](RunConfig(**kw))
    failed = [f"{c.name}: {c.witness}" for c in rep.failures()]
    return rep, failed


def _summary(rep, failed):
    return f"{len(rep.cases)} cases, {len(failed)} failed" + (f" (first: {failed[0]})" if failed else "")


def test_criterion_01_fgl_axioms(report):
    rep, failed = _suite("fgl-axioms", degree=6)
    assert report(1, rep.ok, _summary(rep, failed)), failed


def test_criterion_02_classical(report):
    bad = []
    for n in range(1, 5):
        for lam in strict_partitions(4, n):
            d = sum(lam)
            if not same(schur_P(lam, n, ADDITIVE, False, d).value, classical_P(lam, n)):
                bad.append(("P", lam, n))
            if not same(schur_Q(lam, n, ADDITIVE, False, d).value, classical_Q(lam, n)):
                bad.append(("Q", lam, n))
        for lam in partitions(4, n):
            if not same(schur_s_factorial(lam, n, ADDITIVE, False, sum(lam)).value, classical_s(lam, n)):
                bad.append(("s", lam, n))
    assert report(2, not bad, f"mismatches {bad}" if bad else "P, Q, s match the tableau and bialternant oracles"), bad


def test_criterion_03_supersymmetry(report):
    rep, failed = _suite("supersymmetry", degree=D)
    assert report(3, rep.ok, _summary(rep, failed)), failed


def test_criterion_04_factorization(report):
    rep, failed = _suite("factorization", degree=D)
    assert report(4, rep.ok, _summary(rep, failed)), failed


def test_criterion_05_vanishing(report):
    rep, failed = _suite("vanishing", degree=D)
    literal = [c for c in rep.cases if not c.asserted and not c.ok]
    detail = _summary(rep, failed) + f"; odd-length P diagonals use the zero-padded shape ({len(literal)} literal readings differ)"
    assert report(5, rep.ok, detail), failed


def test_criterion_06_cauchy(report):
    rep, failed = _suite("cauchy", degree=D, n=4, n_y=4)
    assert report(6, rep.ok, _summary(rep, failed)), failed


def test_criterion_07_printed_onerow(report):
    ok = True
    lines = []
    for p in (ADDITIVE, K_THEORY, UNIVERSAL):
        rep = compare_printed_onerow(p)
        for key in ("qhat_1", "qhat_2", "qhat_3", "phat_1"):
            ok &= rep[key]["match"]
        for key in ("phat_2", "phat_3"):
            if not rep[key]["match"]:
                lines.append(f"{p.label} {key}: recomputed {rep[key]['recomputed']} (recomputed - printed = {rep[key]['difference']})")
    detail = "qhat_1..3 and phat_1 match; " + ("; ".join(lines) if lines else "no divergence")
    assert report(7, ok, detail)


def test_criterion_08_duality(report):
    rep, failed = _suite("duality", degree=D)
    assert report(8, rep.ok, _summary(rep, failed)), failed


@pytest.mark.parametrize("degree,n_y", [(D, 4), (7, 3)])
def test_criterion_09_k_recursion(report, degree, n_y):
    rep, failed = _suite("k-recursion", degree=degree, n_y=n_y, fgl="k-theory")
    low = min(c.info["compared_cutoff"] for c in rep.cases)
    assert low >= 0, "some checks compared nothing"
    assert report(9, rep.ok, f"D={degree}, n_y={n_y}: " + _summary(rep, failed) + f", compared through degree >= {low}"), failed


@pytest.fixture(scope="module")
def scan4():
    return check_conjectures(4, 4)


def test_criterion_10_one_row(report, scan4):
    rows = [r for kind in ("gp", "gq") for r in scan4["results"][kind] if len(r["lambda"]) == 1]
    ok = all(r["beta=-1"]["status"] == "PASS" for r in rows if r["lambda"][0] <= 4)
    plus = all(r["beta=+1"]["status"] == "PASS" for r in rows)
    detail = "gp_k, gq_k equal the duals at beta = -1 for k <= 4, n_y = 4"
    detail += "; the normalized beta = +1 convention also passes" if plus else ""
    assert report(10, ok, detail)


def test_criterion_11_hook_sum(report):
    rep, failed = _suite("hook-sum", max_size=5, n_y=4)
    assert report(11, rep.ok, _summary(rep, failed)), failed


@pytest.mark.slow
def test_criterion_12_conjecture_scan(report):
    scan = check_conjectures(6, 4)
    table = []
    for kind in ("gp", "gq"):
        for r in scan["results"][kind]:
            table.append(f"{kind}{r['lambda']}: {r['beta=-1']['status']}/{r['beta=+1']['status']} g:{r['g_sign_pattern']}")
    for r in scan["results"]["staircase"]:
        table.append(f"{r['name']}: {r['status']}")
    # conjectural: the table is the deliverable, nothing beyond its production is asserted
    report(12, True, f"{len(table)} rows emitted\n  " + "\n  ".join(table))
    assert table


def test_criterion_13_appendix(report):
    rep, failed = _suite("appendix-vanishing", degree=D)
    assert report(13, rep.ok, _summary(rep, failed)), failed


def test_criterion_14_determinism(report):
    outs = []
    for _ in range(2):
        outs.append(
            [json.dumps(SUITES[s](RunConfig(degree=3)).to_json_obj(), sort_keys=True) for s in ("cauchy", "k-recursion")]
            + [json.dumps(check_conjectures(3, 3), sort_keys=True)]
        )
    assert report(14, outs[0] == outs[1], "byte-identical JSON across repeated runs")


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SUITES))
def test_extended(report, name):
    rep, failed = _suite(name, degree=6)
    assert report(f"extended {name} (D=6)", rep.ok, _summary(rep, failed)), failed
