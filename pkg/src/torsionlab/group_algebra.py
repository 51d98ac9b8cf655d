"""Exact arithmetic in integral group rings Z[G] and matrices over them.

Groups are given by normal forms: the trivial group, a cyclic group Z/n
(elements are exponents of a generator ``t`` reduced mod n), or a finite
group presented by its multiplication table.  Ring elements are finitely
supported integer combinations of group elements, stored as a sorted tuple
of ``(index, coefficient)`` pairs with no zero coefficients.

Modules are left modules throughout: a matrix ``M`` acts on row vectors
``v -> v M``, so the matrix of "first ``A``, then ``B``" is ``A @ B``.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

__all__ = [
    "GroupMismatchError",
    "GroupSpec",
    "GroupElement",
    "RingElement",
    "TrivialUnit",
    "RingMatrix",
    "ring_add",
    "ring_mul",
    "character_eval",
    "matrix_mul",
    "matrix_identity",
    "elementary_row_op",
    "elementary_col_op",
    "regular_representation",
    "ring_matrix_inverse",
    "is_unit",
    "ring_inverse",
    "bass_unit",
    "parse_ring_element",
    "format_ring_element",
]


class GroupMismatchError(ValueError):
    """Raised when combining objects that live over different groups."""


@dataclass(frozen=True)
class GroupSpec:
    """A finite group with decidable normal forms.

    Use the constructors :meth:`trivial`, :meth:`cyclic` and :meth:`table`.
    """

    kind: str
    n: int = 1
    table: tuple[tuple[int, ...], ...] | None = None
    inverse: tuple[int, ...] | None = None
    identity: int = 0

    def __post_init__(self):
        if self.kind == "trivial":
            if self.n != 1:
                raise ValueError("trivial group has order 1")
        elif self.kind == "cyclic":
            if self.n < 1:
                raise ValueError(f"cyclic group order must be positive, got {self.n}")
        elif self.kind == "table":
            _check_table(self.n, self.table, self.inverse, self.identity)
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @classmethod
    def trivial(cls) -> GroupSpec:
        return cls("trivial", 1)

    @classmethod
    def cyclic(cls, n: int) -> GroupSpec:
        return cls("cyclic", n)

    @classmethod
    def from_table(cls, table, identity: int | None = None, inverse=None) -> GroupSpec:
        table = tuple(tuple(int(x) for x in row) for row in table)
        order = len(table)
        if identity is None:
            identity = next(
                (e for e in range(order) if all(table[e][g] == g for g in range(order))),
                -1,
            )
        if inverse is None:
            inverse = tuple(
                next((h for h in range(order) if table[g][h] == identity), -1)
                for g in range(order)
            )
        return cls("table", order, table, tuple(inverse), identity)

    @property
    def order(self) -> int:
        return self.n

    @property
    def is_abelian(self) -> bool:
        if self.kind != "table":
            return True
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.n) for b in range(a))

    @property
    def unit_index(self) -> int:
        return self.identity if self.kind == "table" else 0

    def mul(self, a: int, b: int) -> int:
        if self.kind == "table":
            return self.table[a][b]
        return (a + b) % self.n

    def inv(self, a: int) -> int:
        if self.kind == "table":
            return self.inverse[a]
        return (-a) % self.n

    def normalize(self, a: int) -> int:
        if self.kind == "table":
            if not 0 <= a < self.n:
                raise ValueError(f"element index {a} out of range for group of order {self.n}")
            return a
        return a % self.n

    def element(self, a: int) -> GroupElement:
        return GroupElement(self, self.normalize(a))

    def elements(self) -> list[GroupElement]:
        return [GroupElement(self, i) for i in range(self.n)]

    def to_json(self) -> dict:
        if self.kind == "trivial":
            return {"kind": "trivial"}
        if self.kind == "cyclic":
            return {"kind": "cyclic", "n": self.n}
        return {
            "kind": "table",
            "order": self.n,
            "table": [list(row) for row in self.table],
            "inverse": list(self.inverse),
            "identity": self.identity,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> GroupSpec:
        kind = obj.get("kind")
        if kind == "trivial":
            return cls.trivial()
        if kind == "cyclic":
            return cls.cyclic(int(obj["n"]))
        if kind == "table":
            g = cls.from_table(obj["table"], obj.get("identity"), obj.get("inverse"))
            if "order" in obj and int(obj["order"]) != g.n:
                raise ValueError("table size does not match declared order")
            return g
        raise ValueError(f"unknown group kind {kind!r}")


def _check_table(order, table, inverse, identity):
    if table is None or inverse is None:
        raise ValueError("table group needs a table and an inverse list")
    if order < 1 or len(table) != order or any(len(r) != order for r in table):
        raise ValueError("multiplication table must be order x order")
    full = set(range(order))
    for row in table:
        if set(row) != full:
            raise ValueError("multiplication table is not a Latin square")
    for col in range(order):
        if {table[r][col] for r in range(order)} != full:
            raise ValueError("multiplication table is not a Latin square")
    if not 0 <= identity < order:
        raise ValueError("identity index out of range")
    for g in range(order):
        if table[identity][g] != g or table[g][identity] != g:
            raise ValueError(f"index {identity} is not a two-sided identity")
    if len(inverse) != order:
        raise ValueError("inverse list has wrong length")
    for g in range(order):
        h = inverse[g]
        if not 0 <= h < order or table[g][h] != identity or table[h][g] != identity:
            raise ValueError(f"inverse of {g} is inconsistent with the table")
    for a in range(order):
        for b in range(order):
            ab = table[a][b]
            for c in range(order):
                if table[ab][c] != table[a][table[b][c]]:
                    raise ValueError("multiplication table is not associative")


@dataclass(frozen=True)
class GroupElement:
    group: GroupSpec
    index: int

    def __mul__(self, other: GroupElement) -> GroupElement:
        _same(self.group, other.group)
        return GroupElement(self.group, self.group.mul(self.index, other.index))

    def inverse(self) -> GroupElement:
        return GroupElement(self.group, self.group.inv(self.index))

    @property
    def is_identity(self) -> bool:
        return self.index == self.group.unit_index


def _same(g: GroupSpec, h: GroupSpec) -> None:
    if g is not h and g != h:
        raise GroupMismatchError(f"group mismatch: {g.to_json()} vs {h.to_json()}")


class RingElement:
    """An element of Z[G]; immutable and hashable."""

    __slots__ = ("group", "_terms", "_hash")

    def __init__(self, group: GroupSpec, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        acc: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            if c:
                k = group.normalize(k)
                acc[k] = acc.get(k, 0) + int(c)
        self.group = group
        self._terms = tuple(sorted((k, c) for k, c in acc.items() if c))
        self._hash = None

    @classmethod
    def _raw(cls, group: GroupSpec, terms: tuple[tuple[int, int], ...]) -> RingElement:
        obj = cls.__new__(cls)
        obj.group = group
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, group: GroupSpec) -> RingElement:
        return cls._raw(group, ())

    @classmethod
    def one(cls, group: GroupSpec) -> RingElement:
        return cls._raw(group, ((group.unit_index, 1),))

    @classmethod
    def scalar(cls, group: GroupSpec, c: int) -> RingElement:
        return cls(group, {group.unit_index: c})

    @classmethod
    def monomial(cls, group: GroupSpec, g: int, c: int = 1) -> RingElement:
        return cls(group, {g: c})

    @classmethod
    def norm_element(cls, group: GroupSpec) -> RingElement:
        """Sum of all group elements."""
        return cls._raw(group, tuple((k, 1) for k in range(group.order)))

    @property
    def terms(self) -> dict[GroupElement, int]:
        return {GroupElement(self.group, k): c for k, c in self._terms}

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms

    def coefficient(self, k: int) -> int:
        k = self.group.normalize(k)
        for key, c in self._terms:
            if key == k:
                return c
        return 0

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_one(self) -> bool:
        return self._terms == ((self.group.unit_index, 1),)

    def augmentation(self) -> int:
        return sum(c for _, c in self._terms)

    def as_trivial_unit(self) -> TrivialUnit | None:
        """Return ``±g`` if this element is a trivial unit, else ``None``."""
        if len(self._terms) == 1 and self._terms[0][1] in (1, -1):
            k, c = self._terms[0]
            return TrivialUnit(c, GroupElement(self.group, k))
        return None

    def conjugate(self) -> RingElement:
        """The involution g -> g^-1."""
        return RingElement(self.group, [(self.group.inv(k), c) for k, c in self._terms])

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == RingElement.scalar(self.group, other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.group == other.group and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.group, self._terms))
        return self._hash

    def __add__(self, other) -> RingElement:
        return ring_add(self, _coerce(self.group, other))

    __radd__ = __add__

    def __neg__(self) -> RingElement:
        return RingElement._raw(self.group, tuple((k, -c) for k, c in self._terms))

    def __sub__(self, other) -> RingElement:
        return ring_add(self, -_coerce(self.group, other))

    def __rsub__(self, other) -> RingElement:
        return ring_add(_coerce(self.group, other), -self)

    def __mul__(self, other) -> RingElement:
        if isinstance(other, int):
            return RingElement._raw(self.group, tuple((k, c * other) for k, c in self._terms)) if other else RingElement.zero(self.group)
        return ring_mul(self, _coerce(self.group, other))

    def __rmul__(self, other) -> RingElement:
        if isinstance(other, int):
            return self * other
        return ring_mul(_coerce(self.group, other), self)

    def __pow__(self, e: int) -> RingElement:
        if e < 0:
            raise ValueError("negative powers are not supported; use ring_matrix_inverse")
        out = RingElement.one(self.group)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __repr__(self) -> str:
        return f"RingElement({format_ring_element(self)!r})"

    def __str__(self) -> str:
        return format_ring_element(self)


def _coerce(group: GroupSpec, x) -> RingElement:
    if isinstance(x, RingElement):
        return x
    if isinstance(x, TrivialUnit):
        return x.element
    if isinstance(x, GroupElement):
        return RingElement(group, {x.index: 1})
    if isinstance(x, int):
        return RingElement.scalar(group, x)
    raise TypeError(f"cannot use {type(x).__name__} as a ring element")


def ring_add(a: RingElement, b: RingElement) -> RingElement:
    _same(a.group, b.group)
    if not a._terms:
        return b
    if not b._terms:
        return a
    acc = dict(a._terms)
    for k, c in b._terms:
        s = acc.get(k, 0) + c
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return RingElement._raw(a.group, tuple(sorted(acc.items())))


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    _same(a.group, b.group)
    if not a._terms or not b._terms:
        return RingElement.zero(a.group)
    g = a.group
    acc: dict[int, int] = {}
    if g.kind == "table":
        tab = g.table
        for ka, ca in a._terms:
            row = tab[ka]
            for kb, cb in b._terms:
                k = row[kb]
                acc[k] = acc.get(k, 0) + ca * cb
    else:
        n = g.n
        for ka, ca in a._terms:
            for kb, cb in b._terms:
                k = (ka + kb) % n
                acc[k] = acc.get(k, 0) + ca * cb
    return RingElement._raw(g, tuple(sorted((k, c) for k, c in acc.items() if c)))


@lru_cache(maxsize=None)
def _roots(n: int, j: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * ((j * k) % n) / n) for k in range(n))


def character_eval(a: RingElement, j: int) -> complex:
    """Evaluate ``a`` at the character ``t -> exp(2 pi i j / n)`` of Z/n.

    ``j = 0`` is the augmentation and is computed exactly.
    """
    g = a.group
    if g.kind == "trivial":
        if j != 0:
            raise ValueError("the trivial group only has the character j = 0")
        return complex(a.augmentation())
    if g.kind != "cyclic":
        raise ValueError("character_eval needs a cyclic group")
    if not 0 <= j < g.n:
        raise ValueError(f"character index {j} out of range 0..{g.n - 1}")
    if j == 0:
        return complex(a.augmentation())
    roots = _roots(g.n, j)
    return sum((c * roots[k] for k, c in a._terms), 0j)


@dataclass(frozen=True)
class TrivialUnit:
    """A unit of the form ``±g``."""

    sign: int
    g: GroupElement

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("trivial unit sign must be +1 or -1")

    @classmethod
    def of(cls, group: GroupSpec, sign: int = 1, index: int = 0) -> TrivialUnit:
        if index == 0 and group.kind == "table":
            index = group.identity
        return cls(sign, group.element(index))

    @property
    def group(self) -> GroupSpec:
        return self.g.group

    @property
    def element(self) -> RingElement:
        return RingElement._raw(self.g.group, ((self.g.index, self.sign),))

    def inverse(self) -> TrivialUnit:
        return TrivialUnit(self.sign, self.g.inverse())

    def __mul__(self, other: TrivialUnit) -> TrivialUnit:
        return TrivialUnit(self.sign * other.sign, self.g * other.g)

    def __str__(self) -> str:
        return format_ring_element(self.element)


# --- text form -------------------------------------------------------------

_MONO = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)\s*(?P<star>\*)?\s*)?
        (?P<sym>(?:t|g)(?:\s*\^\s*(?P<exp>-?\d+)|(?P<idx>\d+))?)?\s*""",
    re.VERBOSE,
)


def parse_ring_element(text: str, group: GroupSpec) -> RingElement:
    """Parse a signed sum of monomials such as ``1 - t^2 + 3*t^5``.

    Cyclic groups use ``t^k`` (negative exponents allowed), table groups use
    ``g<k>`` for the element with table index ``k``; a bare integer is a
    multiple of the identity.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty ring element")
    if s == "0":
        return RingElement.zero(group)
    pos = 0
    acc: dict[int, int] = {}
    first = True
    while pos < len(s):
        m = _MONO.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse ring element {text!r} at position {pos}")
        sign, coef, sym = m.group("sign"), m.group("coef"), m.group("sym")
        if sign is None and not first:
            raise ValueError(f"missing sign in {text!r} at position {pos}")
        if coef is None and sym is None:
            raise ValueError(f"empty term in {text!r} at position {pos}")
        if m.group("star") and sym is None:
            raise ValueError(f"dangling '*' in {text!r}")
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        if sym is None:
            k = group.unit_index
        elif sym.startswith("t"):
            if group.kind != "cyclic":
                if group.kind == "trivial" and m.group("idx") is None:
                    k = 0
                else:
                    raise ValueError(f"'t' monomials need a cyclic group: {text!r}")
            else:
                if m.group("idx") is not None:
                    raise ValueError(f"malformed monomial in {text!r}")
                k = int(m.group("exp")) if m.group("exp") is not None else 1
        else:
            if group.kind != "table":
                raise ValueError(f"'g' monomials need a table group: {text!r}")
            idx = m.group("idx")
            if idx is None:
                raise ValueError(f"table monomials are written g<index>: {text!r}")
            k = int(idx)
        k = group.normalize(k)
        acc[k] = acc.get(k, 0) + c
        pos = m.end()
        first = False
    return RingElement(group, acc)


def _monomial_text(group: GroupSpec, k: int) -> str:
    if k == group.unit_index:
        return ""
    if group.kind == "table":
        return f"g{k}"
    return "t" if k == 1 else f"t^{k}"


def format_ring_element(a: RingElement) -> str:
    """Canonical text: ascending index, explicit signs between terms."""
    if not a._terms:
        return "0"
    parts = []
    for i, (k, c) in enumerate(a._terms):
        mono = _monomial_text(a.group, k)
        mag = abs(c)
        if mono == "":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# --- matrices --------------------------------------------------------------


class RingMatrix:
    """Sparse matrix over Z[G] with labelled rows and columns."""

    __slots__ = ("group", "rows", "cols", "entries", "_row_index", "_col_index")

    def __init__(self, group: GroupSpec, rows: Iterable[str], cols: Iterable[str], entries=None):
        self.group = group
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("matrix labels must be unique")
        self._row_index = None
        self._col_index = None
        clean: dict[tuple[str, str], RingElement] = {}
        if entries:
            rs, cs = set(self.rows), set(self.cols)
            for (r, c), v in entries.items():
                if r not in rs or c not in cs:
                    raise KeyError(f"entry ({r}, {c}) outside the matrix labels")
                v = _coerce(group, v)
                _same(group, v.group)
                if v:
                    clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, group: GroupSpec, rows, cols, data) -> RingMatrix:
        """Build from a dense nested list of ring elements or ints."""
        ents = {}
        for r, line in zip(rows, data):
            for c, v in zip(cols, line):
                ents[(r, c)] = v
        return cls(group, rows, cols, ents)

    def __getitem__(self, key: tuple[str, str]) -> RingElement:
        v = self.entries.get(key)
        return v if v is not None else RingElement.zero(self.group)

    def row(self, r: str) -> dict[str, RingElement]:
        return {c: v for (rr, c), v in self.entries.items() if rr == r}

    def col(self, c: str) -> dict[str, RingElement]:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def dense(self) -> list[list[RingElement]]:
        return [[self[(r, c)] for c in self.cols] for r in self.rows]

    def submatrix(self, rows, cols) -> RingMatrix:
        rows, cols = tuple(rows), tuple(cols)
        rs, cs = set(rows), set(cols)
        return RingMatrix(
            self.group, rows, cols,
            {(r, c): v for (r, c), v in self.entries.items() if r in rs and c in cs},
        )

    def relabel(self, rowmap: Mapping[str, str], colmap: Mapping[str, str]) -> RingMatrix:
        return RingMatrix(
            self.group,
            [rowmap.get(r, r) for r in self.rows],
            [colmap.get(c, c) for c in self.cols],
            {(rowmap.get(r, r), colmap.get(c, c)): v for (r, c), v in self.entries.items()},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (
            self.group == other.group
            and set(self.rows) == set(other.rows)
            and set(self.cols) == set(other.cols)
            and self.entries == other.entries
        )

    def __add__(self, other: RingMatrix) -> RingMatrix:
        _check_shape(self, other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return RingMatrix(self.group, self.rows, self.cols, out)

    def __neg__(self) -> RingMatrix:
        return RingMatrix(self.group, self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: RingMatrix) -> RingMatrix:
        return self + (-other)

    def __matmul__(self, other: RingMatrix) -> RingMatrix:
        return matrix_mul(self, other)

    def scale_left(self, c: RingElement) -> RingMatrix:
        return RingMatrix(self.group, self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def __repr__(self) -> str:
        body = ", ".join(f"{r}->{c}: {v}" for (r, c), v in sorted(self.entries.items()))
        return f"RingMatrix({len(self.rows)}x{len(self.cols)}; {body})"


def _check_shape(a: RingMatrix, b: RingMatrix):
    _same(a.group, b.group)
    if set(a.rows) != set(b.rows) or set(a.cols) != set(b.cols):
        raise ValueError("matrix labels do not match")


def matrix_mul(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    """Product ``a @ b``; columns of ``a`` must be the rows of ``b`` as sets."""
    _same(a.group, b.group)
    if set(a.cols) != set(b.rows):
        raise ValueError("inner labels do not match")
    by_row: dict[str, list[tuple[str, RingElement]]] = {}
    for (r, c), v in b.entries.items():
        by_row.setdefault(r, []).append((c, v))
    out: dict[tuple[str, str], RingElement] = {}
    for (r, k), v in a.entries.items():
        for c, w in by_row.get(k, ()):
            p = v * w
            key = (r, c)
            out[key] = out[key] + p if key in out else p
    return RingMatrix(a.group, a.rows, b.cols, out)


def matrix_identity(group: GroupSpec, labels: Iterable[str]) -> RingMatrix:
    labels = tuple(labels)
    one = RingElement.one(group)
    return RingMatrix(group, labels, labels, {(x, x): one for x in labels})


def elementary_row_op(m: RingMatrix, target: str, source: str, c: RingElement) -> RingMatrix:
    """``row[target] += c * row[source]`` (left multiplication by ``c``)."""
    if target == source:
        raise ValueError("elementary row operation needs target != source")
    if target not in m.rows or source not in m.rows:
        raise KeyError(f"unknown row label {target!r} or {source!r}")
    c = _coerce(m.group, c)
    if not c:
        return m
    out = dict(m.entries)
    for (r, col), v in m.entries.items():
        if r == source:
            key = (target, col)
            s = out.get(key, RingElement.zero(m.group)) + c * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return RingMatrix(m.group, m.rows, m.cols, out)


def elementary_col_op(m: RingMatrix, target: str, source: str, c: RingElement) -> RingMatrix:
    """``col[target] += col[source] * c`` (right multiplication by ``c``)."""
    if target == source:
        raise ValueError("elementary column operation needs target != source")
    if target not in m.cols or source not in m.cols:
        raise KeyError(f"unknown column label {target!r} or {source!r}")
    c = _coerce(m.group, c)
    if not c:
        return m
    out = dict(m.entries)
    for (r, col), v in m.entries.items():
        if col == source:
            key = (r, target)
            s = out.get(key, RingElement.zero(m.group)) + v * c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return RingMatrix(m.group, m.rows, m.cols, out)


# --- integer shadows ---------------------------------------------------------


def regular_block(a: RingElement) -> list[list[int]]:
    """Integer matrix of ``x -> x * a`` on Z[G] in the basis of group elements.

    Row ``g`` holds the coordinates of ``g * a``.
    """
    g = a.group
    n = g.order
    out = [[0] * n for _ in range(n)]
    for row in range(n):
        for k, c in a._terms:
            out[row][g.mul(row, k)] += c
    return out


def regular_representation(m: RingMatrix) -> list[list[int]]:
    """Expand every entry into its |G| x |G| integer block.

    Block rows follow ``m.rows``, block columns follow ``m.cols``.  Products
    are respected: ``reg(A @ B) == reg(A) * reg(B)``.
    """
    n = m.group.order
    R, C = len(m.rows), len(m.cols)
    out = [[0] * (C * n) for _ in range(R * n)]
    ri = {r: i for i, r in enumerate(m.rows)}
    ci = {c: i for i, c in enumerate(m.cols)}
    for (r, c), v in m.entries.items():
        blk = regular_block(v)
        i0, j0 = ri[r] * n, ci[c] * n
        for a in range(n):
            line = out[i0 + a]
            for b in range(n):
                if blk[a][b]:
                    line[j0 + b] = blk[a][b]
    return out


def ring_matrix_inverse(m: RingMatrix) -> RingMatrix | None:
    """Exact inverse over Z[G], or ``None`` if ``m`` is not invertible.

    The result has rows ``m.cols`` and columns ``m.rows``.
    """
    from .smith import integer_inverse

    if len(m.rows) != len(m.cols):
        return None
    reg = regular_representation(m)
    inv = integer_inverse(reg)
    if inv is None:
        return None
    g = m.group
    n = g.order
    e = g.unit_index
    ents = {}
    for i, r in enumerate(m.cols):
        for j, c in enumerate(m.rows):
            # row of the identity element holds the coefficients directly
            line = inv[i * n + e]
            ents[(r, c)] = RingElement(g, {b: line[j * n + b] for b in range(n)})
    return RingMatrix(g, m.cols, m.rows, ents)


def is_unit(a: RingElement) -> bool:
    m = RingMatrix(a.group, ["x"], ["y"], {("x", "y"): a})
    return ring_matrix_inverse(m) is not None


def ring_inverse(a: RingElement) -> RingElement | None:
    m = RingMatrix(a.group, ["x"], ["y"], {("x", "y"): a})
    inv = ring_matrix_inverse(m)
    return None if inv is None else inv[("y", "x")]


def bass_unit(n: int, k: int, m: int) -> RingElement:
    """The Bass unit ``(1 + t + ... + t^(k-1))^m + (1 - k^m)/n * N`` in Z[Z/n].

    Needs ``gcd(k, n) == 1`` and ``k^m = 1 mod n``.
    """
    if math.gcd(k, n) != 1 or pow(k, m, n) != 1 % n:
        raise ValueError(f"need gcd(k, n) = 1 and k^m = 1 mod n (n={n}, k={k}, m={m})")
    g = GroupSpec.cyclic(n)
    base = RingElement(g, {i: 1 for i in range(k)}) ** m
    return base + RingElement.norm_element(g) * ((1 - k ** m) // n)
