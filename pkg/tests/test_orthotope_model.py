from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floral_ehrhart import orthotope_model as om
from floral_ehrhart.errors import (
    CellNotInP,
    DimensionOutOfRange,
    EmptyInput,
    InputError,
    NotGeneric,
    RaggedTuple,
)
from floral_ehrhart.orthotope_model import GridCell
from floral_ehrhart.sp_core import build_class_table

from .reference import ORTHOGON_CENSUS, ORTHOGON_DIR_CENSUS, TORUS_CENSUS


def _census_table(census) -> dict[str, list[int]]:
    out: dict[str, list[int]] = {}
    for enc, k, n in census.records():
        row = out.setdefault(enc, [0] * (census.degree(census.table.id_of(enc)) + 1))
        row[k] = n
    return out


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_single_voxel(d, table):
    P = om.load(d, [(0,) * d])
    census = om.classify(P, table)
    # every face of the cube sees a single orthant: class x*...*x of its codimension
    for cid, k in census.by_k:
        enc = table.encoding(cid)
        assert enc == "*".join(["x"] * (d - k)) or (enc == "1" and k == d)
    assert census.count(0, d) == 1
    assert sum(census.by_k.values()) == 3**d


def test_orthogon_census(orthogon, table):
    census = om.classify(orthogon, table)
    assert _census_table(census) == ORTHOGON_CENSUS
    for enc, row in ORTHOGON_DIR_CENSUS.items():
        for dirs, n in row.items():
            assert census.count_dirs(enc, dirs) == n


def test_torus_census(torus, table):
    assert len(torus) == 28
    assert _census_table(om.classify(torus, table)) == TORUS_CENSUS


def test_checkerboard_is_not_generic(checkerboard, table):
    assert not om.is_generic(checkerboard)
    with pytest.raises(NotGeneric) as info:
        om.classify(checkerboard, table)
    err = info.value
    assert err.anchor == (1, 1)
    assert err.mask == 0b1001
    assert "anchor=(1, 1)" in str(err) and "occupancy=1001" in str(err)


def test_cells_and_tangent_cones():
    P = om.load(2, [(0, 0), (1, 0)])
    cells = om.cells_of(P)
    assert len(cells) == len(set(cells)) == 15  # 6 vertices, 7 edges, 2 squares
    assert all(om.contains_cell(P, c) for c in cells)
    cone = om.tangent_cone_at(P, GridCell((1, 0), ()))
    assert sorted(cone.points()) == [(-1, 1), (1, 1)]
    with pytest.raises(CellNotInP):
        om.tangent_cone_at(P, GridCell((5, 5), ()))


def test_text_and_structured_io_round_trip(torus):
    assert om.parse_text(om.dumps_text(torus, "note")) == torus
    assert om.parse_structured(om.dumps_structured(torus)) == torus
    assert om.parse_any(om.dumps_structured(torus)) == torus


def test_text_parser_tolerates_comments():
    P = om.parse_text("# header\n\ndim 2  # plane\n0 0\n 1 0 # right\n0 0\n")
    assert P.voxels == frozenset({(0, 0), (1, 0)})


@pytest.mark.parametrize(
    "text, error",
    [
        ("", EmptyInput),
        ("dim 2\n", EmptyInput),
        ("dim 0\n", DimensionOutOfRange),
        ("dim 7\n" + " ".join(["0"] * 7), DimensionOutOfRange),
        ("dim 2\n0 0 0\n", RaggedTuple),
        ("dim 2\n0 a\n", InputError),
        ("0 0\n", InputError),
        ('{"dim": 2}', InputError),
        ('{"dim": 2, "voxels": [[0, 0.5]]}', InputError),
        ("{not json", InputError),
    ],
)
def test_malformed_input(text, error):
    with pytest.raises(error):
        om.parse_any(text)


def _shift(P, offset):
    return om.load(P.dim, [tuple(a + b for a, b in zip(v, offset)) for v in P.voxels])


def _reflect(P, axis):
    return om.load(P.dim, [tuple(-c - 1 if i == axis else c for i, c in enumerate(v)) for v in P.voxels])


@pytest.mark.parametrize("axis", [0, 1, 2])
def test_census_is_invariant_under_translation_and_reflection(torus, table, axis):
    base = om.classify(torus, table).by_k
    assert om.classify(_shift(torus, (3, -7, 2)), table).by_k == base
    assert om.classify(_reflect(torus, axis), table).by_k == base


def test_census_merge(orthogon, table):
    census = om.classify(orthogon, table)
    doubled = census.merge(census)
    assert doubled.count("x", 1) == 68


def test_random_generic_is_seeded_and_generic(table):
    P = om.random_generic(2, 25, seed=42)
    assert P == om.random_generic(2, 25, seed=42)
    assert len(P) == 25 and om.is_generic(P)
    assert om.random_generic(2, 1, seed=0).voxels == frozenset({(0, 0)})
    with pytest.raises(DimensionOutOfRange):
        om.random_generic(7, 3, seed=0)


@given(st.integers(1, 3), st.integers(1, 12), st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_random_shapes_have_consistent_census(d, n, seed):
    tab = build_class_table(d)
    P = om.random_generic(d, n, seed)
    census = om.classify(P, tab)
    assert census.count(0, d) == n
    assert sum(census.by_k.values()) == len(om.cells_of(P))
    regrouped = Counter()
    for (cid, dirs), v in census.by_dirs.items():
        regrouped[cid, len(dirs)] += v
    assert regrouped == census.by_k
