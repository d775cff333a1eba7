"""Acceptance gate: ten end-to-end criteria, exact comparisons, wall-clock limits.

Each test carries an ``acceptance`` marker; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run.
"""

from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

from floral_ehrhart import ehrhart_engine as ee
from floral_ehrhart import orthotope_model as om
from floral_ehrhart import sp_core
from floral_ehrhart.cli import main
from floral_ehrhart.floral_algebra import FloralVector, h, h_inverse
from floral_ehrhart.lattice_oracle import verify_against_formula

from .reference import (
    CLASS_COUNTS,
    CUMULATIVE_COUNTS,
    H_DIM4,
    H_INV_DIM4,
    H_INV_LOW,
    H_LOW,
    ORTHOGON_CENSUS,
    ORTHOGON_COEFFS,
    ORTHOGON_DIR_CENSUS,
    ORTHOGON_DIR_COEFFS,
    ORTHOGON_EULER,
    TORUS_CENSUS,
    TORUS_COEFFS,
    TORUS_DIR_COEFFS,
)

RANDOM_2D = [(2, 20, seed) for seed in range(100)]
RANDOM_3D = [(3, 30, seed) for seed in range(25)]


@contextmanager
def within(seconds: float):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, limit {seconds}s"


def fresh_table(cap: int) -> sp_core.ClassTable:
    return sp_core.build_class_table.__wrapped__(cap)


def census_rows(census) -> dict[str, list[int]]:
    out: dict[str, list[int]] = {}
    for enc, k, n in census.records():
        out.setdefault(enc, [0] * (census.degree(census.table.id_of(enc)) + 1))[k] = n
    return out


def coeff_rows(cp) -> dict[str, list[int]]:
    return {cp.table.encoding(c): row for c, row in cp.coeffs.items()}


def dir_rows(mp) -> dict[str, dict]:
    return {mp.table.encoding(c): row for c, row in mp.coeffs.items()}


def nonzero(ref):
    return {enc: {s: v for s, v in row.items() if v} for enc, row in ref.items()}


def row_of(table, vec) -> dict[str, int]:
    return {table.encoding(k): int(v) for k, v in vec.items()}


@pytest.fixture(scope="module")
def corpus():
    shapes = [om.random_generic(d, n, seed) for d, n, seed in RANDOM_2D + RANDOM_3D]
    return shapes


# ---------------------------------------------------------------------------


@pytest.mark.acceptance(1, "class enumeration")
def test_criterion_01_class_enumeration():
    with within(1.0):
        counts = [0] * 8
        for d in sp_core.enumerate_classes(7):
            counts[d.dim] += 1
    assert tuple(counts) == CLASS_COUNTS
    assert tuple(sum(counts[: i + 1]) for i in range(8)) == CUMULATIVE_COUNTS


@pytest.mark.acceptance(2, "h tables")
def test_criterion_02_h_tables():
    with within(1.0):
        table = fresh_table(4)
        rows = {table.encoding(c): row_of(table, h(FloralVector.basis(table, c))) for c in range(len(table))}
    assert len(H_LOW) == 8 and len(H_DIM4) == 10
    for enc, row in {**H_LOW, **H_DIM4}.items():
        assert rows[enc] == row, enc


@pytest.mark.acceptance(3, "h^-1 tables")
def test_criterion_03_h_inverse_tables():
    with within(1.0):
        table = fresh_table(4)
        rows = {
            table.encoding(c): row_of(table, h_inverse(FloralVector.basis(table, c))) for c in range(len(table))
        }
    for enc, row in {**H_INV_LOW, **H_INV_DIM4}.items():
        if enc != "x+x+x+x":
            assert rows[enc] == row, enc
    # the recomputed row
    cid = table.id_of("x+x+x+x")
    e = FloralVector.basis(table, cid)
    assert rows["x+x+x+x"] == {"1": -1, "x": -4, "x+x": 6, "x+x+x": -4, "x+x+x+x": 1}
    assert h(h_inverse(e)) == e
    s = table.s_rows[cid]
    assert table.sigmas[cid] == -1 and s[0] == (-1) ** 4 * table.sigmas[cid]
    assert sum(c << table.dim(b) for b, c in s.items()) == table.sigmas[cid]
    comp = table.complements[cid]
    assert {table.complements[b]: c for b, c in s.items() if b} == {
        b: c for b, c in table.s_rows[comp].items() if b
    }


@pytest.mark.acceptance(4, "planar example")
def test_criterion_04_planar_example(orthogon):
    with within(1.0):
        table = sp_core.build_class_table(6)
        census = om.classify(orthogon, table)
        cp = ee.class_ehrhart(census)
        total = ee.total_ehrhart(cp)
        phi = ee.euler_vector(cp, census)
        recip = ee.reciprocity_check(cp)
        mp = ee.multivariable_ehrhart(census)
    assert census_rows(census) == ORTHOGON_CENSUS
    assert coeff_rows(cp) == ORTHOGON_COEFFS
    assert sum(total) == 37 and total == [1, 17, 19]
    assert phi == FloralVector.from_encodings(table, ORTHOGON_EULER)
    assert ee.euler_characteristic(cp) == 1
    assert recip.ok
    for enc, row in ORTHOGON_DIR_CENSUS.items():
        for dirs, n in row.items():
            assert census.count_dirs(enc, dirs) == n
    assert dir_rows(mp) == nonzero(ORTHOGON_DIR_COEFFS)


@pytest.mark.acceptance(5, "solid torus example")
def test_criterion_05_torus_example(torus):
    with within(5.0):
        table = sp_core.build_class_table(6)
        census = om.classify(torus, table)
        cp = ee.class_ehrhart(census)
        mp = ee.multivariable_ehrhart(census)
    assert len(torus) == 28
    assert census_rows(census) == TORUS_CENSUS
    assert coeff_rows(cp) == TORUS_COEFFS
    assert dir_rows(mp) == nonzero(TORUS_DIR_COEFFS)
    assert ee.euler_characteristic(cp) == 0


@pytest.mark.acceptance(6, "main theorem")
def test_criterion_06_main_theorem(orthogon, torus, corpus, table):
    with within(60.0):
        shapes = [orthogon, torus] + corpus
        failures = []
        for P in shapes:
            census = om.classify(P, table)
            if not ee.verify_main_theorem(census, ee.class_ehrhart(census)).ok:
                failures.append(P)
    assert sum(P.dim == 2 for P in corpus) >= 100 and sum(P.dim == 3 for P in corpus) >= 25
    assert not failures


@pytest.mark.acceptance(7, "counting lemma")
def test_criterion_07_counting_lemma(orthogon, torus, table):
    with within(1.0):
        bad = []
        for P in (orthogon, torus):
            census = om.classify(P, table)
            for beta in range(len(table)):
                if table.dim(beta) > P.dim:
                    continue
                for k in range(P.dim + 1):
                    lhs, rhs = ee.counting_lemma_check(census, beta, k)
                    if lhs != rhs:
                        bad.append((P.dim, table.encoding(beta), k, lhs, rhs))
        demo = ee.counting_lemma_check(om.classify(orthogon, table), "x", 0)
    assert not bad
    assert demo == (17, 17)


@pytest.mark.acceptance(8, "oracle equivalence")
def test_criterion_08_oracle(orthogon, torus, corpus, table):
    with within(120.0):
        mismatches = []
        for P in [orthogon, torus] + corpus:
            report = verify_against_formula(P, table, t_max=4)
            mismatches.extend(report.mismatches)
    assert not mismatches, mismatches[:5]


@pytest.mark.acceptance(9, "identity suite")
def test_criterion_09_identities():
    with within(5.0):
        table = sp_core.build_class_table(6)
        n = len(table)
        basis = [FloralVector.basis(table, c) for c in range(n)]
        images = [h(e) for e in basis]
        for a in range(n):
            for b in range(a, n):
                if table.dim(a) + table.dim(b) <= 6:
                    assert h(basis[a] * basis[b]) == images[a] * images[b]
        for a in range(1, n):
            d = table.diagrams[a]
            assert sp_core.complement(sp_core.complement(d)) == d
            assert table.mus[a] + table.mus[table.complements[a]] == 2 ** d.dim
        for a in range(n):
            s = table.s_rows[a]
            assert s[a] == 1
            assert s.get(0, 0) == (-1) ** table.dim(a) * table.sigmas[a]
            assert sum(c << table.dim(b) for b, c in s.items()) == table.sigmas[a]
            assert all(table.dim(b) < table.dim(a) for b in s if b != a)
            comp = table.complements[a]
            if comp is not None:
                assert all(table.s_rows[comp].get(table.complements[b], 0) == c for b, c in s.items() if b)


@pytest.mark.acceptance(10, "negative controls")
def test_criterion_10_negative_controls(data_dir, capsys):
    assert main(["analyze", str(data_dir / "checkerboard.txt")]) == 2
    err = capsys.readouterr().err
    assert "anchor=(1, 1)" in err and "occupancy=" in err
    assert main(["verify", str(data_dir / "orthogon_19.txt"), "--corrupt-census"]) == 3
