"""Class-refined Ehrhart polynomials and the identities they satisfy.

Everything here is a pure function of a :class:`CellCensus`.  Quantities that
can be obtained two ways (binomial sum vs. shifted census polynomial, Euler
vector from coefficients vs. from vertices only) are computed both ways and
cross-checked; a disagreement raises :class:`IdentityFailed`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .errors import IdentityFailed
from .floral_algebra import D, Dyadic, FloralVector, h_inverse
from .orthotope_model import CellCensus
from .sp_core import ClassTable

Subset = tuple[int, ...]


def poly_eval(coeffs: Sequence[int], t: int) -> int:
    return sum(c * t**k for k, c in enumerate(coeffs))


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass
class ClassPolynomial:
    """``L_a(tP) = sum_k coeffs[a][k] t^k`` for each class id ``a``."""

    dim: int
    table: ClassTable
    coeffs: dict[int, list[int]] = field(default_factory=dict)

    def coefficient(self, cls_key, k: int) -> int:
        row = self.coeffs.get(self._cid(cls_key), [])
        return row[k] if k < len(row) else 0

    def row(self, cls_key) -> list[int]:
        return list(self.coeffs.get(self._cid(cls_key), []))

    def degree(self, cid: int) -> int:
        return self.dim - self.table.dim(cid)

    def evaluate(self, cls_key, t: int) -> int:
        return poly_eval(self.coeffs.get(self._cid(cls_key), []), t)

    def _cid(self, key) -> int:
        return key if isinstance(key, int) else self.table.id_of(key)

    def column(self, k: int) -> FloralVector:
        """``sum_a L_{a,k} e_a``."""
        return FloralVector(self.table, {a: row[k] for a, row in self.coeffs.items() if k < len(row)})


@dataclass
class MultiClassPolynomial:
    """``L_a(tP) = sum_I coeffs[a][I] prod_{i in I} t_i`` (1-based ``I``)."""

    dim: int
    table: ClassTable
    coeffs: dict[int, dict[Subset, int]] = field(default_factory=dict)

    def coefficient(self, cls_key, subset: Iterable[int]) -> int:
        cid = cls_key if isinstance(cls_key, int) else self.table.id_of(cls_key)
        return self.coeffs.get(cid, {}).get(tuple(sorted(subset)), 0)

    def evaluate(self, cls_key, ts: Sequence[int]) -> int:
        cid = cls_key if isinstance(cls_key, int) else self.table.id_of(cls_key)
        total = 0
        for subset, c in self.coeffs.get(cid, {}).items():
            term = c
            for i in subset:
                term *= ts[i - 1]
            total += term
        return total

    def specialize(self) -> dict[int, list[int]]:
        """Set every ``t_i = t``: univariate coefficient lists per class."""
        out: dict[int, list[int]] = {}
        for cid, row in self.coeffs.items():
            coeffs = [0] * (self.dim + 1)
            for subset, c in row.items():
                coeffs[len(subset)] += c
            out[cid] = _trim(coeffs)
        return out


def subsets(d: int) -> list[Subset]:
    """All subsets of ``{1..d}``, by size then lexicographically."""
    return [s for r in range(d + 1) for s in itertools.combinations(range(1, d + 1), r)]


# ---------------------------------------------------------------------------


def _binomial_route(census: CellCensus, cid: int) -> list[int]:
    deg = census.degree(cid)
    return [
        sum((-1) ** (j + k) * comb(j, k) * census.count(cid, j) for j in range(k, deg + 1))
        for k in range(deg + 1)
    ]


def _shift_route(census: CellCensus, cid: int) -> list[int]:
    # expand sum_j C_{a,j} (t - 1)^j
    deg = census.degree(cid)
    out = [0] * (deg + 1)
    for j in range(deg + 1):
        c = census.count(cid, j)
        for k in range(j + 1):
            out[k] += c * comb(j, k) * (-1) ** (j - k)
    return out


def class_ehrhart(census: CellCensus) -> ClassPolynomial:
    cp = ClassPolynomial(census.dim, census.table)
    for cid in census.classes():
        a, b = _binomial_route(census, cid), _shift_route(census, cid)
        if a != b:
            raise IdentityFailed(f"coefficient routes disagree for {census.table.encoding(cid)}: {a} vs {b}")
        cp.coeffs[cid] = _trim(a)
    return cp


def total_ehrhart(cp: ClassPolynomial) -> list[int]:
    out = [0] * (cp.dim + 1)
    for row in cp.coeffs.values():
        for k, c in enumerate(row):
            out[k] += c
    return _trim(out)


def main_theorem_rhs(census: CellCensus, k: int, table: ClassTable | None = None) -> FloralVector:
    """``2^(k-d) sum_{deg a = k} C_{a,k} D(h^-1(e_a))``, asserted integral."""
    table = table or census.table
    d = census.dim
    if not 0 <= k <= d:
        raise ValueError(f"k must lie in 0..{d}")
    return _weighted_inverse_sum(table, d, k, lambda cid: census.count(cid, k))


def _weighted_inverse_sum(table: ClassTable, d: int, k: int, count) -> FloralVector:
    acc = FloralVector(table)
    for cid in table.ids_of_dim(d - k):
        c = count(cid)
        if c:
            acc = acc + D(h_inverse(FloralVector.basis(table, cid))) * c
    acc = acc * Dyadic(1, d - k)
    acc.to_int_dict()
    return acc


@dataclass
class TheoremReport:
    results: dict[int, bool]
    lhs: dict[int, FloralVector]
    rhs: dict[int, FloralVector]

    @property
    def ok(self) -> bool:
        return all(self.results.values())


def verify_main_theorem(census: CellCensus, cp: ClassPolynomial, table: ClassTable | None = None) -> TheoremReport:
    table = table or census.table
    results, lhs, rhs = {}, {}, {}
    for k in range(census.dim + 1):
        lhs[k] = cp.column(k)
        rhs[k] = main_theorem_rhs(census, k, table)
        results[k] = lhs[k] == rhs[k]
    return TheoremReport(results, lhs, rhs)


def counting_lemma_check(census: CellCensus, beta, k: int, table: ClassTable | None = None) -> tuple[Dyadic, Dyadic]:
    """Both sides of the double count of cells incident to cubes of type ``beta``."""
    table = table or census.table
    b = beta if isinstance(beta, int) else table.id_of(beta)
    lhs = Dyadic(0)
    for a in census.classes():
        m = table.m_rows[a].get(b, 0)
        c = census.count(a, k)
        if m and c:
            lhs = lhs + Dyadic(m * c, table.dim(a))
    deg = census.dim - table.dim(b)
    rhs = Dyadic(comb(deg, k) * census.count(b, deg), table.dim(b)) if deg >= 0 else Dyadic(0)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Euler vector and derived valuations


def euler_vector(cp: ClassPolynomial, census: CellCensus | None = None) -> FloralVector:
    """``sum_a L_{a,0} e_a``; with a census, cross-checked against the vertex formula."""
    phi = cp.column(0)
    if census is not None:
        acc = main_theorem_rhs(census, 0, cp.table)
        if acc != phi:
            raise IdentityFailed(f"Euler vector mismatch: {phi!r} vs vertex formula {acc!r}")
    return phi


def euler_characteristic(cp: ClassPolynomial) -> int:
    return (-1) ** cp.dim * cp.coefficient(0, 0)


def bouquet_sign_sum(census: CellCensus) -> Dyadic:
    """``2^-d`` times the sum of bouquet signs over the vertices of ``P``."""
    table = census.table
    total = sum(table.sigmas[cid] * census.count(cid, 0) for cid in table.ids_of_dim(census.dim))
    return Dyadic(total, census.dim)


@dataclass
class ReciprocityReport:
    interior: list[int]
    reflected: list[int]

    @property
    def ok(self) -> bool:
        return self.interior == self.reflected


def reciprocity_check(cp: ClassPolynomial) -> ReciprocityReport:
    """Compare ``L_1(tP)`` with ``(-1)^d L(-tP)`` coefficientwise."""
    total = total_ehrhart(cp)
    sign = (-1) ** cp.dim
    reflected = _trim([sign * (-1) ** k * c for k, c in enumerate(total)])
    return ReciprocityReport(cp.row(0), reflected)


@dataclass(frozen=True)
class Valuations:
    vertices: int
    edges: int
    boundary_measure: int
    volume: int


def special_valuations(cp: ClassPolynomial) -> Valuations:
    d = cp.dim
    table = cp.table
    vertices = sum(cp.coefficient(a, 0) for a in table.ids_of_dim(d))
    edges = -sum(cp.coefficient(a, 0) for a in table.ids_of_dim(d - 1))
    boundary = cp.coefficient("x", d - 1)
    if boundary != -2 * cp.coefficient(0, d - 1):
        raise IdentityFailed(
            f"boundary coefficient {boundary} != -2 * {cp.coefficient(0, d - 1)}"
        )
    return Valuations(vertices, edges, boundary, cp.coefficient(0, d))


# ---------------------------------------------------------------------------
# multivariable


def multivariable_ehrhart(census: CellCensus, table: ClassTable | None = None) -> MultiClassPolynomial:
    table = table or census.table
    d = census.dim
    mp = MultiClassPolynomial(d, table)
    for subset in subsets(d):
        acc = _weighted_inverse_sum(table, d, len(subset), lambda cid: census.count_dirs(cid, subset))
        for cid, v in acc.to_int_dict().items():
            mp.coeffs.setdefault(cid, {})[subset] = v
    for cid in mp.coeffs:
        mp.coeffs[cid] = dict(sorted(mp.coeffs[cid].items(), key=lambda kv: (len(kv[0]), kv[0])))
    mp.coeffs = dict(sorted(mp.coeffs.items()))
    return mp
