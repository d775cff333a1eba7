"""The algebra of floral classes.

Elements are finitely supported vectors ``sum c_alpha e_alpha`` over the
classes of a :class:`~floral_ehrhart.sp_core.ClassTable`, with exact dyadic
coefficients.  Multiplication is ``e_a . e_b = e_{a*b}``; ``h`` is the linear
map sending ``e_a`` to its m-row, ``D`` scales ``e_a`` by ``2**dim(a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union

from .errors import IdentityFailed, NonIntegralResult, TableMismatch
from .sp_core import ClassTable, product


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """Exact rational ``numerator / 2**exponent`` kept in lowest terms."""

    numerator: int
    exponent: int = 0

    def __post_init__(self) -> None:
        n, e = self.numerator, self.exponent
        if e < 0:
            n, e = n << -e, 0
        if n == 0:
            e = 0
        while e and not n & 1:
            n >>= 1
            e -= 1
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def coerce(cls, value: "Scalar") -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise ValueError(f"{value} is not dyadic")
            return cls(value.numerator, den.bit_length() - 1)
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    def __add__(self, other: "Scalar") -> "Dyadic":
        other = Dyadic.coerce(other)
        e = max(self.exponent, other.exponent)
        return Dyadic(
            (self.numerator << (e - self.exponent)) + (other.numerator << (e - other.exponent)), e
        )

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.numerator, self.exponent)

    def __abs__(self) -> "Dyadic":
        return self if self.numerator >= 0 else -self

    def __sub__(self, other: "Scalar") -> "Dyadic":
        return self + (-Dyadic.coerce(other))

    def __rsub__(self, other: "Scalar") -> "Dyadic":
        return Dyadic.coerce(other) - self

    def __mul__(self, other: "Scalar") -> "Dyadic":
        other = Dyadic.coerce(other)
        return Dyadic(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def scale2(self, power: int) -> "Dyadic":
        """Multiply by ``2**power`` (``power`` may be negative)."""
        if power >= 0:
            return Dyadic(self.numerator << power, self.exponent)
        return Dyadic(self.numerator, self.exponent - power)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Dyadic.coerce(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.numerator == other.numerator and self.exponent == other.exponent

    def __lt__(self, other: "Scalar") -> bool:
        return self.to_fraction() < Dyadic.coerce(other).to_fraction()

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __bool__(self) -> bool:
        return self.numerator != 0

    def is_integer(self) -> bool:
        return self.exponent == 0

    def __int__(self) -> int:
        if self.exponent:
            raise NonIntegralResult(f"{self} is not an integer")
        return self.numerator

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


Scalar = Union[int, Fraction, Dyadic]


class FloralVector:
    """Finitely supported vector ClassId -> Dyadic bound to one class table."""

    __slots__ = ("table", "_coeffs")

    def __init__(self, table: ClassTable, coeffs: Mapping[int, Scalar] | None = None):
        self.table = table
        clean: dict[int, Dyadic] = {}
        for cid, c in (coeffs or {}).items():
            if not 0 <= cid < len(table):
                raise KeyError(f"class id {cid} not in table")
            c = Dyadic.coerce(c)
            if c:
                clean[cid] = c
        self._coeffs = dict(sorted(clean.items()))

    @classmethod
    def basis(cls, table: ClassTable, cls_key) -> "FloralVector":
        cid = cls_key if isinstance(cls_key, int) else table.id_of(cls_key)
        return cls(table, {cid: 1})

    @classmethod
    def from_encodings(cls, table: ClassTable, coeffs: Mapping[str, Scalar]) -> "FloralVector":
        return cls(table, {table.id_of(k): v for k, v in coeffs.items()})

    def items(self) -> Iterable[tuple[int, Dyadic]]:
        return self._coeffs.items()

    def __getitem__(self, cid: int) -> Dyadic:
        return self._coeffs.get(cid, Dyadic(0))

    def coefficient(self, key) -> Dyadic:
        return self[key if isinstance(key, int) else self.table.id_of(key)]

    def __len__(self) -> int:
        return len(self._coeffs)

    def _check(self, other: "FloralVector") -> None:
        if not isinstance(other, FloralVector):
            raise TypeError("expected a FloralVector")
        if other.table is not self.table:
            raise TableMismatch("vectors are bound to different class tables")

    def __add__(self, other: "FloralVector") -> "FloralVector":
        return add(self, other)

    def __neg__(self) -> "FloralVector":
        return FloralVector(self.table, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "FloralVector") -> "FloralVector":
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, FloralVector):
            return multiply(self, other)
        c = Dyadic.coerce(other)
        return FloralVector(self.table, {k: v * c for k, v in self._coeffs.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FloralVector):
            return NotImplemented
        return self.table is other.table and self._coeffs == other._coeffs

    __hash__ = None  # type: ignore[assignment]

    def is_integral(self) -> bool:
        return all(v.is_integer() for v in self._coeffs.values())

    def to_int_dict(self) -> dict[int, int]:
        """Coefficients as plain integers; raises NonIntegralResult otherwise."""
        bad = [f"{self.table.encoding(k)}: {v}" for k, v in self._coeffs.items() if not v.is_integer()]
        if bad:
            raise NonIntegralResult("non-integral coefficients " + ", ".join(bad))
        return {k: int(v) for k, v in self._coeffs.items()}

    def render(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"FloralVector({render(self)})"


def render(v: FloralVector) -> str:
    """``"3·(1) + 2·(x) + 1·(x+x)"``; the zero vector renders as ``"0"``."""
    if not len(v):
        return "0"
    terms = []
    for cid, c in v.items():
        text = f"{abs(c) if c.numerator < 0 else c}·({v.table.encoding(cid)})"
        if not terms:
            terms.append(("-" if c.numerator < 0 else "") + text)
        else:
            terms.append(("- " if c.numerator < 0 else "+ ") + text)
    return " ".join(terms)


def zero(table: ClassTable) -> FloralVector:
    return FloralVector(table)


def add(u: FloralVector, v: FloralVector) -> FloralVector:
    u._check(v)
    out = dict(u.items())
    for k, c in v.items():
        out[k] = out.get(k, Dyadic(0)) + c
    return FloralVector(u.table, out)


def multiply(u: FloralVector, v: FloralVector) -> FloralVector:
    u._check(v)
    table = u.table
    out: dict[int, Dyadic] = {}
    for a, ca in u.items():
        for b, cb in v.items():
            ab = table.id_of(product(table.diagrams[a], table.diagrams[b], cap=table.max_dim))
            out[ab] = out.get(ab, Dyadic(0)) + ca * cb
    return FloralVector(table, out)


def _apply_rows(v: FloralVector, rows) -> FloralVector:
    out: dict[int, Dyadic] = {}
    for a, ca in v.items():
        for b, m in rows[a].items():
            out[b] = out.get(b, Dyadic(0)) + ca * m
    return FloralVector(v.table, out)


def h(v: FloralVector) -> FloralVector:
    return _apply_rows(v, v.table.m_rows)


def h_inverse(v: FloralVector) -> FloralVector:
    return _apply_rows(v, v.table.s_rows)


def D(v: FloralVector) -> FloralVector:
    return FloralVector(v.table, {a: c.scale2(v.table.dim(a)) for a, c in v.items()})


# ---------------------------------------------------------------------------
# s-rows: two independent routes, cross-checked


def _row_add(acc: dict[int, int], row: Mapping[int, int], scale: int) -> None:
    for k, c in row.items():
        acc[k] = acc.get(k, 0) + scale * c


def _strip_zero(row: dict[int, int]) -> dict[int, int]:
    return {k: c for k, c in sorted(row.items()) if c}


def s_rows_by_series(table: ClassTable) -> list[dict[int, int]]:
    """``h^-1 = sum_k (-1)^k (h - Id)^k``, truncated where ``h - Id`` vanishes."""

    def h_minus_id(vec: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for a, c in vec.items():
            _row_add(out, table.m_rows[a], c)
            out[a] = out.get(a, 0) - c
        return _strip_zero(out)

    rows = []
    for a in range(len(table)):
        total = {a: 1}
        term = {a: 1}
        for k in range(1, table.dim(a) + 1):
            term = h_minus_id(term)
            _row_add(total, term, -1 if k % 2 else 1)
        rows.append(_strip_zero(total))
    return rows


def s_rows_by_substitution(table: ClassTable) -> list[dict[int, int]]:
    """Back-substitution on the dimension-triangular m-matrix."""
    rows: list[dict[int, int]] = [{} for _ in range(len(table))]
    order = sorted(range(len(table)), key=table.dim)
    for a in order:
        acc = {a: 1}
        for b, m in table.m_rows[a].items():
            if b != a:
                _row_add(acc, rows[b], -m)
        rows[a] = _strip_zero(acc)
    return rows


def h_inverse_rows(table: ClassTable) -> list[dict[int, int]]:
    """Coefficients ``s_{a,b}`` of ``h^-1(e_a)`` for every class of the table."""
    by_series = s_rows_by_series(table)
    by_subst = s_rows_by_substitution(table)
    if by_series != by_subst:
        bad = [table.encoding(i) for i, (p, q) in enumerate(zip(by_series, by_subst)) if p != q]
        raise IdentityFailed(f"h^-1 series and back-substitution disagree on {bad}")
    return by_series
