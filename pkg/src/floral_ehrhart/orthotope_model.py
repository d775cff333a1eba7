"""Integral orthotopes given as unions of unit voxels, and their cube census.

``P`` is the union of closed unit cubes ``v + [0, 1]^d`` over the voxel
corners ``v``.  Space is partitioned into relatively open integral unit cubes
(grid cells); every cell inside ``P`` carries a tangent cone which, for a
generic orthotope, is read-once.  The census counts cells by floral class
and dimension, and by floral class and spanned direction set.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import sp_core
from .errors import (
    CellNotInP,
    DimensionOutOfRange,
    EmptyInput,
    GenerationFailed,
    InputError,
    NotGeneric,
    RaggedTuple,
)
from .sp_core import CONST_TRUE, ClassTable, Floral, OrthantSet, recognize

Voxel = tuple[int, ...]


@dataclass(frozen=True)
class VoxelSet:
    dim: int
    voxels: frozenset[Voxel]

    @property
    def lower(self) -> Voxel:
        return tuple(min(v[i] for v in self.voxels) for i in range(self.dim))

    @property
    def upper(self) -> Voxel:
        """Componentwise maximum corner of ``P`` (one past the largest voxel)."""
        return tuple(max(v[i] for v in self.voxels) + 1 for i in range(self.dim))

    def __len__(self) -> int:
        return len(self.voxels)

    def __contains__(self, v: Voxel) -> bool:
        return v in self.voxels

    def sorted_voxels(self) -> list[Voxel]:
        return sorted(self.voxels)


def load(dim: int, voxels: Iterable[Sequence[int]]) -> VoxelSet:
    if not isinstance(dim, int) or not 1 <= dim <= sp_core.MAX_DIM:
        raise DimensionOutOfRange(f"dimension must be in 1..{sp_core.MAX_DIM}, got {dim!r}")
    out = set()
    for v in voxels:
        v = tuple(v)
        if len(v) != dim:
            raise RaggedTuple(f"voxel {v} does not have {dim} coordinates")
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in v):
            raise InputError(f"voxel {v} has non-integer coordinates")
        out.add(v)
    if not out:
        raise EmptyInput("no voxels given")
    return VoxelSet(dim, frozenset(out))


# ---------------------------------------------------------------------------
# text / structured I/O


def parse_text(text: str) -> VoxelSet:
    """Parse ``dim d`` followed by one voxel per line; ``#`` starts a comment."""
    dim = None
    voxels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if dim is None:
            if len(fields) != 2 or fields[0].lower() != "dim":
                raise InputError(f"line {lineno}: expected 'dim <d>', got {line!r}")
            try:
                dim = int(fields[1])
            except ValueError:
                raise InputError(f"line {lineno}: bad dimension {fields[1]!r}") from None
            continue
        try:
            voxels.append(tuple(int(f) for f in fields))
        except ValueError:
            raise InputError(f"line {lineno}: non-integer coordinate in {line!r}") from None
    if dim is None:
        raise EmptyInput("missing 'dim' header")
    return load(dim, voxels)


def parse_structured(text: str) -> VoxelSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid structured input: {exc}") from None
    if not isinstance(obj, dict) or "dim" not in obj or "voxels" not in obj:
        raise InputError("structured input needs fields 'dim' and 'voxels'")
    return load(obj["dim"], obj["voxels"])


def parse_any(text: str) -> VoxelSet:
    return parse_structured(text) if text.lstrip().startswith("{") else parse_text(text)


def read_file(path: str) -> VoxelSet:
    with open(path, encoding="utf-8") as fh:
        return parse_any(fh.read())


def dumps_text(P: VoxelSet, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"dim {P.dim}")
    lines.extend(" ".join(map(str, v)) for v in P.sorted_voxels())
    return "\n".join(lines) + "\n"


def dumps_structured(P: VoxelSet) -> str:
    return json.dumps({"dim": P.dim, "voxels": [list(v) for v in P.sorted_voxels()]})


# ---------------------------------------------------------------------------
# cells and tangent cones


@dataclass(frozen=True, order=True)
class GridCell:
    """Relatively open unit cube ``{anchor + sum_{i in I} t_i e_i : 0 < t_i < 1}``.

    ``directions`` lists the spanned coordinates ``I`` (1-based, ascending).
    """

    anchor: Voxel
    directions: tuple[int, ...] = ()

    @property
    def k(self) -> int:
        return len(self.directions)

    def normals(self, dim: int) -> tuple[int, ...]:
        """0-based coordinates not spanned by the cell."""
        spanned = {i - 1 for i in self.directions}
        return tuple(i for i in range(dim) if i not in spanned)


def _adjacent_voxels(P: VoxelSet, c: GridCell) -> Iterator[Voxel]:
    normals = c.normals(P.dim)
    for offs in itertools.product((0, -1), repeat=len(normals)):
        v = list(c.anchor)
        for i, o in zip(normals, offs):
            v[i] += o
        yield tuple(v)


def contains_cell(P: VoxelSet, c: GridCell) -> bool:
    return any(v in P.voxels for v in _adjacent_voxels(P, c))


def cells_of(P: VoxelSet) -> list[GridCell]:
    """Every grid cell contained in ``P``, each once, in sorted order.

    Cells are generated from the closed cubes of the voxels, which is exactly
    the set of cells lying in ``P``.
    """
    seen: set[GridCell] = set()
    for v in P.voxels:
        seen.update(_closed_cube_cells(v))
    return sorted(seen)


def tangent_cone_at(P: VoxelSet, c: GridCell) -> OrthantSet:
    """Occupancy of the orthants normal to ``c``.

    Normal sign ``+1`` looks at the voxel with the same coordinate as the
    anchor, ``-1`` at the one below it.  Bit ``j`` of a packed point refers to
    the ``j``-th normal coordinate in ascending order.
    """
    normals = c.normals(P.dim)
    m = len(normals)
    mask = 0
    for p in range(1 << m):
        v = list(c.anchor)
        for j, i in enumerate(normals):
            if not p >> j & 1:
                v[i] -= 1
        if tuple(v) in P.voxels:
            mask |= 1 << p
    if not mask:
        raise CellNotInP(f"cell {c} is not contained in P")
    return OrthantSet(m, mask)


def cell_class(P: VoxelSet, c: GridCell, table: ClassTable) -> int:
    cone = tangent_cone_at(P, c)
    res = recognize(cone)
    if res is CONST_TRUE:
        return 0
    if isinstance(res, Floral):
        return table.id_of(res.diagram)
    raise NotGeneric(c.anchor, c.directions, cone.arity, cone.mask)


# ---------------------------------------------------------------------------
# census


@dataclass
class CellCensus:
    """Cube counts ``C_{a,k}`` and ``C_{a,I}`` keyed by class id."""

    dim: int
    table: ClassTable
    by_k: Counter = field(default_factory=Counter)
    by_dirs: Counter = field(default_factory=Counter)

    def count(self, cls_key, k: int) -> int:
        return self.by_k.get((self._cid(cls_key), k), 0)

    def count_dirs(self, cls_key, directions: Iterable[int]) -> int:
        return self.by_dirs.get((self._cid(cls_key), tuple(sorted(directions))), 0)

    def _cid(self, key) -> int:
        return key if isinstance(key, int) else self.table.id_of(key)

    def degree(self, cid: int) -> int:
        return self.dim - self.table.dim(cid)

    def classes(self) -> list[int]:
        return sorted({cid for cid, _ in self.by_k})

    def merge(self, other: "CellCensus") -> "CellCensus":
        if other.dim != self.dim or other.table is not self.table:
            raise ValueError("cannot merge censuses of different shapes")
        return CellCensus(self.dim, self.table, self.by_k + other.by_k, self.by_dirs + other.by_dirs)

    def records(self) -> list[tuple[str, int, int]]:
        return [(self.table.encoding(cid), k, n) for (cid, k), n in sorted(self.by_k.items())]

    def direction_records(self) -> list[tuple[str, list[int], int]]:
        return [
            (self.table.encoding(cid), list(dirs), n)
            for (cid, dirs), n in sorted(self.by_dirs.items(), key=lambda kv: (kv[0][0], len(kv[0][1]), kv[0][1]))
        ]


def classify(P: VoxelSet, table: ClassTable) -> CellCensus:
    """Census of ``P``; raises :class:`NotGeneric` at the first bad cell."""
    if table.max_dim < P.dim:
        raise sp_core.DimensionCapExceeded(f"table cap {table.max_dim} below dimension {P.dim}")
    census = CellCensus(P.dim, table)
    for c in cells_of(P):
        cid = cell_class(P, c, table)
        census.by_k[cid, c.k] += 1
        census.by_dirs[cid, c.directions] += 1
    return census


def is_generic(P: VoxelSet) -> bool:
    return all(_cell_is_floral(P, c) for c in cells_of(P))


def _cell_is_floral(P: VoxelSet, c: GridCell) -> bool:
    return recognize(tangent_cone_at(P, c)) is not sp_core.NOT_FLORAL


def _closed_cube_cells(v: Voxel) -> Iterator[GridCell]:
    d = len(v)
    for corner in itertools.product((0, 1), repeat=d):
        anchor = tuple(a + b for a, b in zip(v, corner))
        free = [i + 1 for i in range(d) if corner[i] == 0]
        for r in range(len(free) + 1):
            for dirs in itertools.combinations(free, r):
                yield GridCell(anchor, dirs)


def random_generic(dim: int, n: int, seed: int, attempts: int = 200) -> VoxelSet:
    """Seeded random face-connected generic orthotope with ``n`` voxels.

    Growth attaches a uniformly chosen free face-neighbour; a candidate that
    would make some cell of its closed cube non-floral is rejected and the
    next one drawn.  A growth that runs out of candidates restarts.
    """
    if not 1 <= dim <= sp_core.MAX_DIM:
        raise DimensionOutOfRange(f"dimension must be in 1..{sp_core.MAX_DIM}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    steps = [tuple(s if j == i else 0 for j in range(dim)) for i in range(dim) for s in (1, -1)]
    for _ in range(attempts):
        voxels = {(0,) * dim}
        while len(voxels) < n:
            frontier = sorted(
                {tuple(a + b for a, b in zip(v, s)) for v in voxels for s in steps} - voxels
            )
            rng.shuffle(frontier)
            for cand in frontier:
                trial = VoxelSet(dim, frozenset(voxels | {cand}))
                if all(_cell_is_floral(trial, c) for c in _closed_cube_cells(cand)):
                    voxels.add(cand)
                    break
            else:
                break
        if len(voxels) == n:
            P = VoxelSet(dim, frozenset(voxels))
            if is_generic(P):
                return P
    raise GenerationFailed(f"no generic orthotope with {n} voxels after {attempts} attempts")
