"""Brute-force lattice point counts of dilates, independent of the algebra.

For a lattice point ``x`` of the dilate ``tP`` the orthant in direction
``q`` is probed at ``(x + q/2) / t`` (componentwise).  The numerator
``2x + q`` is odd, so the probe never sits on a grid hyperplane of ``P`` and
lies in the interior of exactly one voxel; all comparisons are integer floor
divisions.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence, Union

from .ehrhart_engine import class_ehrhart, multivariable_ehrhart
from .errors import NonFloralPointInDilate
from .orthotope_model import CellCensus, VoxelSet, classify
from .sp_core import CONST_TRUE, ClassTable, Floral, OrthantSet, recognize

Dilation = Union[int, Sequence[int]]


def as_dilation(dilation: Dilation, dim: int) -> tuple[int, ...]:
    ts = (dilation,) * dim if isinstance(dilation, int) else tuple(dilation)
    if len(ts) != dim:
        raise ValueError(f"dilation {dilation!r} does not have {dim} entries")
    if any(not isinstance(t, int) or t < 1 for t in ts):
        raise ValueError(f"dilation entries must be positive integers, got {dilation!r}")
    return ts


def direct_census(P: VoxelSet, dilation: Dilation, table: ClassTable) -> Counter:
    """Lattice points of the dilate, counted by the class of their tangent cone."""
    ts = as_dilation(dilation, P.dim)
    d = P.dim
    # per axis and lattice coordinate: voxel index below (q=-1) and above (q=+1)
    axes = [
        [((2 * x - 1) // (2 * t), (2 * x + 1) // (2 * t)) for x in range(t * a, t * b + 1)]
        for t, a, b in zip(ts, P.lower, P.upper)
    ]
    orthants = list(itertools.product((0, 1), repeat=d))
    bits = [sum(c << i for i, c in enumerate(o)) for o in orthants]
    voxels = P.voxels
    class_of: dict[int, int] = {}
    counts: Counter = Counter()
    for pairs in itertools.product(*axes):
        mask = 0
        for o, bit in zip(orthants, bits):
            if tuple(pair[c] for pair, c in zip(pairs, o)) in voxels:
                mask |= 1 << bit
        if not mask:
            continue
        cid = class_of.get(mask)
        if cid is None:
            res = recognize(OrthantSet(d, mask))
            if res is CONST_TRUE:
                cid = 0
            elif isinstance(res, Floral):
                cid = table.id_of(res.diagram)
            else:
                raise NonFloralPointInDilate(
                    f"lattice point between voxel layers {pairs} of dilate {ts} has occupancy {mask:b}"
                )
            class_of[mask] = cid
        counts[cid] += 1
    return counts


def occupancy(P: VoxelSet, x: Sequence[int], ts: Sequence[int]) -> OrthantSet:
    """Orthant occupancy of ``P`` dilated by ``ts`` around the lattice point ``x``."""
    d = P.dim
    mask = 0
    for p in range(1 << d):
        voxel = tuple(
            (2 * x[i] + (1 if p >> i & 1 else -1)) // (2 * ts[i]) for i in range(d)
        )
        if voxel in P.voxels:
            mask |= 1 << p
    return OrthantSet(d, mask)


@dataclass(frozen=True)
class OracleRecord:
    dilation: tuple[int, ...]
    encoding: str
    oracle: int
    formula: int
    source: str

    @property
    def ok(self) -> bool:
        return self.oracle == self.formula


@dataclass
class OracleReport:
    records: list[OracleRecord] = field(default_factory=list)

    @property
    def mismatches(self) -> list[OracleRecord]:
        return [r for r in self.records if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        n = len(self.records)
        bad = len(self.mismatches)
        dilations = len({(r.dilation, r.source) for r in self.records})
        return f"{n} comparisons over {dilations} dilations, {bad} mismatches"


def nonuniform_dilations(dim: int, t_max: int, seed: int = 0, sample: int = 32) -> list[tuple[int, ...]]:
    """Every vector with entries in ``1..min(3, t_max)`` for ``dim <= 3``; a seeded sample above."""
    top = min(3, t_max)
    full = list(itertools.product(range(1, top + 1), repeat=dim))
    if dim <= 3:
        return full
    rng = random.Random(seed)
    return sorted(rng.sample(full, min(sample, len(full))))


def verify_against_formula(
    P: VoxelSet,
    table: ClassTable,
    t_max: int,
    census: CellCensus | None = None,
    seed: int = 0,
) -> OracleReport:
    """Compare brute-force counts with the polynomial predictions.

    ``census`` overrides the classified census, which lets callers feed in a
    deliberately corrupted one.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    census = census if census is not None else classify(P, table)
    cp = class_ehrhart(census)
    mp = multivariable_ehrhart(census, table)
    report = OracleReport()

    def compare(ts: tuple[int, ...], predicted: dict[int, int], source: str) -> None:
        observed = direct_census(P, ts, table)
        for cid in sorted(set(observed) | set(predicted)):
            report.records.append(
                OracleRecord(ts, table.encoding(cid), observed.get(cid, 0), predicted.get(cid, 0), source)
            )

    for t in range(1, t_max + 1):
        compare((t,) * P.dim, {cid: cp.evaluate(cid, t) for cid in cp.coeffs}, "uniform")
    for ts in nonuniform_dilations(P.dim, t_max, seed):
        compare(ts, {cid: mp.evaluate(cid, ts) for cid in mp.coeffs}, "multivariable")
    return report
