"""Acceptance criteria 1-8, one PASS/FAIL line each (shown in the terminal summary)."""

import time
from contextlib import contextmanager

import pytest

from tangent_syzygies import cli, verify
from tangent_syzygies.geometry import dim_estimate, pencil_product, rnc
from tangent_syzygies.multilinear import Space
from tangent_syzygies.schur import bottom_syzygy_dims_segre, lascoux_bottom_dims
from tangent_syzygies.syzygy import KoszulSpot, koszul_cohomology_dim

INTRO = "x0*x4 - 4*x1*x3 + 3*x2^2"


@contextmanager
def criterion(report, number: int, title: str, limit: float | None):
    t0 = time.perf_counter()
    detail = {"msg": ""}
    ok = False
    try:
        yield detail
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        in_time = limit is None or elapsed < limit
        ok = ok and in_time
        msg = f" {detail['msg']}" if detail["msg"] else ""
        bound = "no limit" if limit is None else f"limit {limit:g}s"
        report.append(f"[{number}] {'PASS' if ok else 'FAIL'} {title}: {elapsed:.2f}s ({bound}){msg}")
    assert in_time, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"


def failed(checks):
    return [c for c in checks if not c.ok]


def test_1_intro_equation(acceptance_report, capsys):
    with criterion(acceptance_report, 1, "intro equation of tau(nu_4)", 1.0) as d:
        code = cli.main(["equations", '{"kind": "rnc", "params": {"d": 4}}', "--q", "1", "--k", "1"])
        out = capsys.readouterr().out
        d["msg"] = out.strip()
        assert code == 0
        assert out == f"dim=1; basis: {INTRO}\n"


def test_2_membership(acceptance_report):
    with criterion(acceptance_report, 2, "b_map columns vanish on sigma_q tau^k nu_d", 30.0) as d:
        checks = verify.suite_membership(points=50, max_d=8)
        d["msg"] = f"{len(checks)} tensors x 50 points"
        assert any(c.name.startswith("intro") for c in checks)
        assert {q for q, _, _ in verify.membership_cases(8)} == {1, 2}
        assert not failed(checks), failed(checks)


def test_3_eks_genus0(acceptance_report):
    with criterion(acceptance_report, 3, "b_map surjective at genus 0", 300.0) as d:
        checks = verify.suite_eks_genus0()
        assert [(q, k, dd, f) for q, k, dd, f in verify.EKS_CASES] == [
            (1, 1, 4, (1, 1, 1, 1)),
            (1, 1, 8, (2, 2, 2, 2)),
            (2, 0, 4, (2, 2)),
            (2, 0, 6, (3, 3)),
            (3, 0, 6, (3, 3)),
        ]
        d["msg"] = "ranks " + " ".join(f"{c.got}/{c.expected}" for c in checks)
        assert len(checks) == 5
        assert all(c.expected > 0 for c in checks)
        assert not failed(checks), failed(checks)


def test_4_segre_rows(acceptance_report):
    seeds = [verify.DEFAULT_SEED, 1, 2]
    with criterion(acceptance_report, 4, "4-factor Segre tangent rows, 3 seeds", 600.0) as d:
        rows = {}
        for dims, p_max, want in [((2, 2, 2, 2), 1, "1,0"), ((3, 3, 3, 2), 2, "27,2,0")]:
            expected = [bottom_syzygy_dims_segre(p, 1, dims) for p in range(p_max + 1)]
            assert ",".join(map(str, expected)) == want
            verdicts = set()
            for seed in seeds:
                I = verify.segre_tangent_slice(dims, 1, 1, seed, sample=True)
                row = tuple(koszul_cohomology_dim(I, KoszulSpot(p, 2), rng=seed) for p in range(p_max + 1))
                verdicts.add(row)
            rows[dims] = verdicts
            assert verdicts == {tuple(expected)}, (dims, verdicts)
        d["msg"] = " ".join(f"{'x'.join(map(str, k))}={','.join(map(str, next(iter(v))))}" for k, v in rows.items())


def test_5_lascoux(acceptance_report):
    with criterion(acceptance_report, 5, "Lascoux rows of 2x3 and 2x4 minors", 60.0) as d:
        checks = verify.suite_lascoux(p_max=3)
        row23 = [koszul_cohomology_dim(verify.minor_ideal(2, 3), KoszulSpot(p, 2)) for p in range(3)]
        d["msg"] = f"2x3 row {','.join(map(str, row23))}"
        assert row23 == [3, 2, 0]
        assert row23 == [lascoux_bottom_dims(p, 1, 2, 3) for p in range(3)]
        assert len(checks) == 8
        assert not failed(checks), failed(checks)


def test_6_green_lazarsfeld(acceptance_report):
    with criterion(acceptance_report, 6, "Green-Lazarsfeld decompositions and box-product spans", 600.0) as d:
        checks = verify.suite_green_lazarsfeld(max_dim=4, spans=True)
        d["msg"] = f"{len(checks)} checks"
        cases = list(verify.green_lazarsfeld_cases(4))
        assert len(cases) == 4 * 4 * 3 * 2
        assert not failed(checks), failed(checks)


def test_7_properties(acceptance_report):
    with criterion(acceptance_report, 7, "property suites", None) as d:
        assert verify.PROPERTY_INSTANCES >= 100
        checks = verify.suite_properties(instances=verify.PROPERTY_INSTANCES)
        d["msg"] = f"{len(checks)} properties x {verify.PROPERTY_INSTANCES} instances"
        assert set(verify.PROPERTIES) == {"jacobi", "euler", "leibniz", "delta-squared", "wedge-prolong", "range-equivalence"}
        assert not failed(checks), failed(checks)


def test_8_fulton_hansen(acceptance_report):
    with criterion(acceptance_report, 8, "dimensions of tau and sigma_2", 30.0) as d:
        x = pencil_product([2, 2])
        surface = (dim_estimate(x, 1, 1, rng=0), dim_estimate(x, 2, 0, rng=0))
        curves = {dd: (dim_estimate(rnc(dd), 1, 1, rng=dd), dim_estimate(rnc(dd), 2, 0, rng=dd)) for dd in range(4, 9)}
        d["msg"] = f"O(2,2): {surface}, nu_4..8: {sorted(set(curves.values()))}"
        assert surface == (4, 5)
        assert all(v == (2, 3) for v in curves.values())
        assert not failed(verify.suite_fulton_hansen())
