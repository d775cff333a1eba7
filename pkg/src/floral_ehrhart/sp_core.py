"""Series-parallel diagrams, read as read-once Boolean formulas.

A diagram is a rooted tree whose leaves are segments (Boolean variables) and
whose internal nodes are conjunctions (series, ``*``) or disjunctions
(parallel, ``+``).  The unlabeled canonical diagram is the congruence class of
a floral vertex; its leaves are the coordinate directions and a literal is
"this coordinate has a prescribed sign".

Index conventions used throughout the package:

* sign vectors and orientations are tuples over ``{-1, 0, +1}`` indexed by
  coordinate position;
* sets of coordinates or leaves handed back to the caller are 1-based, so that
  ``{1, 2}`` means "the first and second coordinate";
* a point of ``{-1, +1}^m`` is packed into an integer whose bit ``i`` is set
  iff coordinate ``i`` (0-based) is ``+1``; an :class:`OrthantSet` is a bit
  mask over those packed points.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .errors import ComplementOfIdentity, DimensionCapExceeded, LengthMismatch

#: Largest dimension for class tables, products and orthotopes.  Raise it at
#: your own risk: table construction visits ``3**d`` sign vectors per class.
MAX_DIM = 6

#: Enumeration alone is cheap, so it is allowed further than ``MAX_DIM``.
ENUMERATION_CAP = 10

ONE_KIND = "1"
LEAF = "x"
SERIES = "*"
PARALLEL = "+"

#: Terms of OEIS A000084 for n = 0..10 (number of series-parallel networks).
A000084 = (1, 1, 2, 4, 10, 24, 66, 180, 522, 1532, 4624)


@dataclass(frozen=True)
class SpDiagram:
    """A (possibly non-canonical) series-parallel tree.

    Instances built by hand may violate the canonical invariants; pass them
    through :func:`canonicalize` before comparing.  Canonical diagrams compare
    equal iff their encodings are equal.
    """

    kind: str
    children: tuple["SpDiagram", ...] = ()

    def __post_init__(self) -> None:
        if self.kind in (ONE_KIND, LEAF):
            if self.children:
                raise ValueError(f"{self.kind!r} node cannot have children")
        elif self.kind in (SERIES, PARALLEL):
            if not self.children:
                raise ValueError("series/parallel node needs at least one child")
        else:
            raise ValueError(f"unknown node kind {self.kind!r}")

    @cached_property
    def dim(self) -> int:
        if self.kind == LEAF:
            return 1
        return sum(c.dim for c in self.children)

    @cached_property
    def text(self) -> str:
        if self.kind in (ONE_KIND, LEAF):
            return self.kind
        if self.kind == SERIES:
            return SERIES.join(
                f"({c.text})" if c.kind == PARALLEL else c.text for c in self.children
            )
        return PARALLEL.join(c.text for c in self.children)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"SpDiagram({self.text!r})"


ONE = SpDiagram(ONE_KIND)
X = SpDiagram(LEAF)


def series_node(*children: SpDiagram) -> SpDiagram:
    return SpDiagram(SERIES, tuple(children))


def parallel_node(*children: SpDiagram) -> SpDiagram:
    return SpDiagram(PARALLEL, tuple(children))


def _sort_key(d: SpDiagram) -> tuple[int, str]:
    # larger sub-diagrams first, then by text: gives "x*x+x" and "(x+x)*x"
    return (-d.dim, d.text)


_CANONICAL: dict[str, SpDiagram] = {}


def canonicalize(tree: SpDiagram) -> SpDiagram:
    """Collapse single-child nodes, flatten same-kind nesting, sort children."""
    if tree.kind in (ONE_KIND, LEAF):
        return tree
    hit = _CANONICAL.get(tree.text)
    if hit is not None:
        return hit
    out = _canonicalize(tree)
    _CANONICAL[tree.text] = out
    return out


def _canonicalize(tree: SpDiagram) -> SpDiagram:
    kids: list[SpDiagram] = []
    for child in tree.children:
        child = canonicalize(child)
        if child.kind == ONE_KIND:
            if tree.kind == SERIES:
                continue
            raise ValueError("the identity class cannot appear under a disjunction")
        if child.kind == tree.kind:
            kids.extend(child.children)
        else:
            kids.append(child)
    if not kids:
        return ONE
    if len(kids) == 1:
        return kids[0]
    kids.sort(key=_sort_key)
    return SpDiagram(tree.kind, tuple(kids))


def encode(d: SpDiagram) -> str:
    return d.text


def parse(text: str) -> SpDiagram:
    """Parse an encoding such as ``"(x+x)*x"`` into a canonical diagram."""
    src = "".join(text.split())
    pos = 0

    def peek() -> str:
        return src[pos] if pos < len(src) else ""

    def expr() -> SpDiagram:
        nonlocal pos
        terms = [term()]
        while peek() == PARALLEL:
            pos += 1
            terms.append(term())
        return terms[0] if len(terms) == 1 else parallel_node(*terms)

    def term() -> SpDiagram:
        nonlocal pos
        factors = [factor()]
        while peek() == SERIES:
            pos += 1
            factors.append(factor())
        return factors[0] if len(factors) == 1 else series_node(*factors)

    def factor() -> SpDiagram:
        nonlocal pos
        ch = peek()
        if ch == LEAF:
            pos += 1
            return X
        if ch == ONE_KIND:
            pos += 1
            return ONE
        if ch == "(":
            pos += 1
            inner = expr()
            if peek() != ")":
                raise ValueError(f"unbalanced parenthesis in {text!r}")
            pos += 1
            return inner
        raise ValueError(f"unexpected {ch or 'end of input'!r} at {pos} in {text!r}")

    tree = expr()
    if pos != len(src):
        raise ValueError(f"trailing input at {pos} in {text!r}")
    return canonicalize(tree)


def _swap(tree: SpDiagram) -> SpDiagram:
    if tree.kind in (ONE_KIND, LEAF):
        return tree
    kind = PARALLEL if tree.kind == SERIES else SERIES
    return SpDiagram(kind, tuple(_swap(c) for c in tree.children))


def complement(d: SpDiagram) -> SpDiagram:
    """De Morgan dual: the floral vertex occupying the complementary orthants."""
    if d.kind == ONE_KIND:
        raise ComplementOfIdentity("the class '1' has no complement")
    return canonicalize(_swap(d))


def product(a: SpDiagram, b: SpDiagram, cap: int | None = None) -> SpDiagram:
    """Conjunction of two diagrams (the Cartesian product of the cones)."""
    cap = MAX_DIM if cap is None else cap
    if a.dim + b.dim > cap:
        raise DimensionCapExceeded(f"dim {a.dim} + {b.dim} exceeds cap {cap}")
    return canonicalize(series_node(a, b))


def mu(d: SpDiagram) -> int:
    """Number of satisfying assignments, i.e. occupied full-dimensional orthants."""
    if d.kind == ONE_KIND:
        return 1
    if d.kind == LEAF:
        return 1
    if d.kind == SERIES:
        return math.prod(mu(c) for c in d.children)
    missing = math.prod((1 << c.dim) - mu(c) for c in d.children)
    return (1 << d.dim) - missing


def rho_sigma(d: SpDiagram) -> tuple[int, int]:
    """Loop count (binary disjunctions) and bouquet sign ``(-1)**rho``."""

    def loops(node: SpDiagram) -> int:
        own = len(node.children) - 1 if node.kind == PARALLEL else 0
        return own + sum(loops(c) for c in node.children)

    rho = loops(d)
    return rho, -1 if rho % 2 else 1


# ---------------------------------------------------------------------------
# Enumeration


@lru_cache(maxsize=None)
def _classes_of_size(n: int) -> tuple[SpDiagram, ...]:
    if n == 0:
        return (ONE,)
    if n == 1:
        return (X,)
    series = _series_of_size(n)
    both = list(series) + [complement(s) for s in series]
    return tuple(sorted(both, key=lambda d: d.text))


@lru_cache(maxsize=None)
def _series_of_size(n: int) -> tuple[SpDiagram, ...]:
    # children of a series node: leaves or parallel diagrams, all smaller than n
    cands = [X] + [d for m in range(2, n) for d in _classes_of_size(m) if d.kind == PARALLEL]
    out: list[SpDiagram] = []

    def grow(start: int, remaining: int, chosen: list[SpDiagram]) -> None:
        if remaining == 0:
            out.append(canonicalize(SpDiagram(SERIES, tuple(chosen))))
            return
        for i in range(start, len(cands)):
            if cands[i].dim <= remaining:
                chosen.append(cands[i])
                grow(i, remaining - cands[i].dim, chosen)
                chosen.pop()

    grow(0, n, [])
    return tuple(out)


def enumerate_classes(max_dim: int) -> list[SpDiagram]:
    """Every canonical diagram with at most ``max_dim`` leaves, by (dim, encoding)."""
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    if max_dim > ENUMERATION_CAP:
        raise DimensionCapExceeded(f"enumeration limited to dimension {ENUMERATION_CAP}")
    return [d for n in range(max_dim + 1) for d in _classes_of_size(n)]


# ---------------------------------------------------------------------------
# Partial evaluation


class Const(enum.Enum):
    FALSE = "false"
    TRUE = "true"


CONST_FALSE = Const.FALSE
CONST_TRUE = Const.TRUE


@dataclass(frozen=True)
class Residual:
    diagram: SpDiagram
    leaves: frozenset[int]


def support_size(signs: Sequence[int]) -> int:
    """``k(s)``: the number of nonzero entries of a sign vector."""
    return sum(1 for s in signs if s)


_PEVAL_CACHE: dict[tuple[str, tuple[int, ...]], object] = {}


def _peval(node: SpDiagram, signs: tuple[int, ...]):
    """True / False, or ``(residual tree, free leaves)`` with leaves 1-based within ``node``.

    Memoized on the node's text and its slice of the sign vector; the text
    determines the formula up to associativity, which does not affect the
    result.
    """
    key = (node.text, signs)
    hit = _PEVAL_CACHE.get(key)
    if hit is not None:
        return hit
    if node.kind == ONE_KIND:
        res = True
    elif node.kind == LEAF:
        res = True if signs[0] > 0 else False if signs[0] < 0 else (X, (1,))
    else:
        absorbing = node.kind == PARALLEL
        parts = []
        offset = 0
        res = None
        for child in node.children:
            part = _peval(child, signs[offset : offset + child.dim])
            if part is absorbing:
                res = absorbing
                break
            if not isinstance(part, bool):
                tree, leaves = part
                parts.append((tree, tuple(i + offset for i in leaves)))
            offset += child.dim
        if res is None:
            if not parts:
                res = not absorbing
            else:
                tree = SpDiagram(node.kind, tuple(t for t, _ in parts))
                res = (tree, tuple(i for _, leaves in parts for i in leaves))
    _PEVAL_CACHE[key] = res
    return res


def partial_eval(d: SpDiagram, signs: Sequence[int]) -> Union[Const, Residual]:
    """Substitute ``+1 -> true``, ``-1 -> false`` and simplify.

    Leaves are numbered 1..dim in left-to-right order of the canonical diagram.
    """
    if len(signs) != d.dim:
        raise LengthMismatch(f"sign vector of length {len(signs)} for a diagram of dim {d.dim}")
    res = _peval(d, tuple(signs))
    if res is True:
        return CONST_TRUE
    if res is False:
        return CONST_FALSE
    tree, leaves = res
    return Residual(canonicalize(tree), frozenset(leaves))


# ---------------------------------------------------------------------------
# Orthant sets and recognition


@dataclass(frozen=True)
class OrthantSet:
    arity: int
    mask: int

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        if self.mask < 0 or self.mask >> (1 << self.arity):
            raise ValueError(f"mask {self.mask:#x} out of range for arity {self.arity}")

    @classmethod
    def from_points(cls, arity: int, points: Iterable[Sequence[int]]) -> "OrthantSet":
        mask = 0
        for q in points:
            if len(q) != arity:
                raise LengthMismatch(f"point {tuple(q)} has wrong length for arity {arity}")
            mask |= 1 << pack_signs(q)
        return cls(arity, mask)

    def __contains__(self, q: Sequence[int]) -> bool:
        return bool(self.mask >> pack_signs(q) & 1)

    def points(self) -> list[tuple[int, ...]]:
        return [unpack_signs(p, self.arity) for p in range(1 << self.arity) if self.mask >> p & 1]

    def __len__(self) -> int:
        return bin(self.mask).count("1")


def pack_signs(q: Sequence[int]) -> int:
    return sum(1 << i for i, s in enumerate(q) if s > 0)


def unpack_signs(p: int, arity: int) -> tuple[int, ...]:
    return tuple(1 if p >> i & 1 else -1 for i in range(arity))


class NotFloral(enum.Enum):
    NOT_FLORAL = "not-floral"


NOT_FLORAL = NotFloral.NOT_FLORAL


@dataclass(frozen=True)
class Floral:
    diagram: SpDiagram
    orientation: tuple[int, ...]
    essential: frozenset[int]


def orthant_set(
    d: SpDiagram,
    orientation: Sequence[int] | None = None,
    labeling: Sequence[int] | None = None,
    arity: int | None = None,
) -> OrthantSet:
    """Truth set of ``d`` as a set of orthants.

    ``labeling[j]`` is the 1-based coordinate carried by leaf ``j+1`` (identity
    by default); ``orientation[c]`` is the sign making coordinate ``c+1``'s
    literal true (all ``+1`` by default).
    """
    m = d.dim if arity is None else arity
    labeling = tuple(range(1, d.dim + 1)) if labeling is None else tuple(labeling)
    orientation = (1,) * m if orientation is None else tuple(orientation)
    if len(labeling) != d.dim or len(orientation) != m:
        raise LengthMismatch("labeling/orientation do not match the diagram")
    mask = 0
    for p in range(1 << m):
        q = unpack_signs(p, m)
        signs = tuple(1 if q[c - 1] == orientation[c - 1] else -1 for c in labeling)
        if partial_eval(d, signs) is CONST_TRUE:
            mask |= 1 << p
    return OrthantSet(m, mask)


def _essential_coords(n: int, mask: int) -> list[int]:
    out = []
    for i in range(n):
        bit = 1 << i
        if any((mask >> p & 1) != (mask >> (p ^ bit) & 1) for p in range(1 << n) if not p & bit):
            out.append(i)
    return out


def _restrict(mask: int, coords: Sequence[int]) -> int:
    """Project a mask onto ``coords`` (other coordinates must be inessential)."""
    out = 0
    for j in range(1 << len(coords)):
        p = sum(1 << c for k, c in enumerate(coords) if j >> k & 1)
        if mask >> p & 1:
            out |= 1 << j
    return out


def _product_split(n: int, mask: int) -> tuple[list[int], int, list[int], int] | None:
    pts = [p for p in range(1 << n) if mask >> p & 1]
    full = (1 << n) - 1
    for a in range(1, full):
        if not a & 1:
            continue
        left = {p & a for p in pts}
        right = {p & ~a & full for p in pts}
        if len(left) * len(right) == len(pts):
            a_coords = [i for i in range(n) if a >> i & 1]
            b_coords = [i for i in range(n) if not a >> i & 1]
            return a_coords, _compress(left, a_coords), b_coords, _compress(right, b_coords)
    return None


def _compress(points: Iterable[int], coords: Sequence[int]) -> int:
    """Mask over ``coords`` of the given packed points (projection)."""
    out = 0
    for p in points:
        out |= 1 << sum(1 << k for k, c in enumerate(coords) if p >> c & 1)
    return out


def _relabel(tree, coords: Sequence[int]):
    tag = tree[0]
    if tag == LEAF:
        return (LEAF, coords[tree[1]], tree[2])
    return (tag, tuple(_relabel(c, coords) for c in tree[1]))


@lru_cache(maxsize=None)
def _recognize_mask(n: int, mask: int):
    """Labeled read-once tree over local coordinates, a bool, or None."""
    ess = _essential_coords(n, mask)
    if len(ess) < n:
        sub = _recognize_mask(len(ess), _restrict(mask, ess))
        return sub if sub is None or isinstance(sub, bool) else _relabel(sub, ess)
    if n == 0:
        return bool(mask & 1)
    if n == 1:
        return (LEAF, 0, 1 if mask == 0b10 else -1)
    split = _product_split(n, mask)
    if split is not None:
        a, ma, b, mb = split
        return _join(SERIES, _recognize_mask(len(a), ma), a, _recognize_mask(len(b), mb), b)
    full = (1 << (1 << n)) - 1
    split = _product_split(n, full ^ mask)
    if split is not None:
        # T is the complement of a product: a disjunction of complemented factors
        a, ma, b, mb = split
        fa, fb = (1 << (1 << len(a))) - 1, (1 << (1 << len(b))) - 1
        return _join(PARALLEL, _recognize_mask(len(a), fa ^ ma), a, _recognize_mask(len(b), fb ^ mb), b)
    return None


def _join(kind: str, left, a: Sequence[int], right, b: Sequence[int]):
    # a factor that is not read-once makes the whole set non-floral
    if left is None or right is None:
        return None
    return (kind, (_relabel(left, a), _relabel(right, b)))


def _strip(tree, orientation: list[int]) -> SpDiagram:
    if tree[0] == LEAF:
        orientation[tree[1]] = tree[2]
        return X
    return SpDiagram(tree[0], tuple(_strip(c, orientation) for c in tree[1]))


def recognize(T: OrthantSet) -> Union[Const, Floral, NotFloral]:
    """Decide whether an orthant set is the truth set of a read-once formula."""
    tree = _recognize_mask(T.arity, T.mask)
    if tree is None:
        return NOT_FLORAL
    if isinstance(tree, bool):
        return CONST_TRUE if tree else CONST_FALSE
    orientation = [1] * T.arity
    diagram = canonicalize(_strip(tree, orientation))
    essential = frozenset(c + 1 for c in _essential_coords(T.arity, T.mask))
    return Floral(diagram, tuple(orientation), essential)


# ---------------------------------------------------------------------------
# Class table


@dataclass(frozen=True, eq=False)
class ClassTable:
    """All classes up to ``max_dim`` with their invariants and h / h^-1 rows.

    Rows are mappings ClassId -> integer and must be treated as read-only.
    """

    max_dim: int
    diagrams: tuple[SpDiagram, ...]
    mus: tuple[int, ...]
    rhos: tuple[int, ...]
    sigmas: tuple[int, ...]
    complements: tuple[int | None, ...]
    m_rows: tuple[Mapping[int, int], ...] = ()
    s_rows: tuple[Mapping[int, int], ...] = ()
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {d.text: i for i, d in enumerate(self.diagrams)})

    def __len__(self) -> int:
        return len(self.diagrams)

    def id_of(self, d: SpDiagram | str) -> int:
        key = parse(d).text if isinstance(d, str) else d.text
        try:
            return self._index[key]
        except KeyError:
            raise DimensionCapExceeded(f"class {key!r} is not in a table capped at {self.max_dim}") from None

    def encoding(self, cid: int) -> str:
        return self.diagrams[cid].text

    def dim(self, cid: int) -> int:
        return self.diagrams[cid].dim

    def ids_of_dim(self, k: int) -> list[int]:
        return [i for i, d in enumerate(self.diagrams) if d.dim == k]


def m_row(d: SpDiagram, table: ClassTable) -> dict[int, int]:
    """Coefficients of ``h(e_d)``: generalized orthants of each floral type."""
    if d.dim > table.max_dim:
        raise DimensionCapExceeded(f"dim {d.dim} exceeds table cap {table.max_dim}")
    counts: dict[int, int] = {}
    for s in itertools.product((-1, 0, 1), repeat=d.dim):
        free = s.count(0)
        res = _peval(d, s)
        if res is True:
            if free == 0:
                counts[0] = counts.get(0, 0) + 1
        elif res is not False and len(res[1]) == free:
            cid = table.id_of(canonicalize(res[0]))
            counts[cid] = counts.get(cid, 0) + 1
    return dict(sorted(counts.items()))


@lru_cache(maxsize=None)
def build_class_table(max_dim: int = MAX_DIM) -> ClassTable:
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    if max_dim > MAX_DIM:
        raise DimensionCapExceeded(f"max_dim {max_dim} exceeds MAX_DIM={MAX_DIM}")
    diagrams = tuple(enumerate_classes(max_dim))
    index = {d.text: i for i, d in enumerate(diagrams)}
    rs = [rho_sigma(d) for d in diagrams]
    table = ClassTable(
        max_dim=max_dim,
        diagrams=diagrams,
        mus=tuple(mu(d) for d in diagrams),
        rhos=tuple(r for r, _ in rs),
        sigmas=tuple(s for _, s in rs),
        complements=tuple(None if d.kind == ONE_KIND else index[complement(d).text] for d in diagrams),
    )
    table = replace(table, m_rows=tuple(m_row(d, table) for d in diagrams))
    from .floral_algebra import h_inverse_rows

    return replace(table, s_rows=tuple(h_inverse_rows(table)))


# glyph dictionary for the eight classes of dimension at most 3, in the order
# they are customarily tabulated
GLYPH_ORDER = ("1", "x", "x*x", "x+x", "x*x*x", "(x+x)*x", "x*x+x", "x+x+x")
