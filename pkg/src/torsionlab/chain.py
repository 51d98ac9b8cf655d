"""Based, optionally filtered, Z-graded chain complexes of free Z[G]-modules.

Conventions:

* the differential raises degree by one; a CW cell of dimension ``n`` sits in
  degree ``-n``;
* ``d`` is stored as a square :class:`RingMatrix` on generator labels, with
  entry ``(x, y)`` the coefficient of ``y`` in ``d(x)``;
* a filtration assigns an integer level to every generator and the span of
  the generators of level ``<= p`` must be a subcomplex for every ``p``
  (the differential never raises the level).

Acyclicity over Z[G] is tested on the underlying complex of free abelian
groups: a bounded complex of free Z[G]-modules is contractible iff its
restriction to Z is, because Z[G] is free of finite rank over Z.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .group_algebra import (
    GroupSpec,
    RingElement,
    RingMatrix,
    _same,
    matrix_mul,
    regular_representation,
)
from .smith import SmithForm, invariant_factors, smith_normal_form

__all__ = [
    "Generator",
    "BasedComplex",
    "ValidationReport",
    "ChainMap",
    "ChainHomotopy",
    "validate",
    "underlying_integer_matrix",
    "integral_homology",
    "is_acyclic",
    "smith_normal_form",
    "shift",
    "direct_sum",
    "relabel",
    "graded_piece",
    "two_term",
]


@dataclass(frozen=True)
class Generator:
    label: str
    degree: int
    filtration: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


class BasedComplex:
    """A finite based complex; immutable after construction.

    Construction only checks that labels are unique and that ``d`` is
    indexed by them; use :func:`validate` for the chain-complex axioms.
    Equality ignores the order of the basis.
    """

    __slots__ = ("group", "generators", "d", "_by_label")

    def __init__(self, group: GroupSpec, generators: Iterable[Generator], d=None):
        self.group = group
        self.generators = tuple(generators)
        labels = [g.label for g in self.generators]
        if len(set(labels)) != len(labels):
            raise ValueError("generator labels must be unique")
        self._by_label = {g.label: g for g in self.generators}
        if d is None:
            d = RingMatrix(group, labels, labels)
        elif not isinstance(d, RingMatrix):
            d = RingMatrix(group, labels, labels, d)
        else:
            _same(group, d.group)
            if set(d.rows) != set(labels) or set(d.cols) != set(labels):
                raise ValueError("differential labels do not match the generators")
            if d.rows != tuple(labels) or d.cols != tuple(labels):
                d = RingMatrix(group, labels, labels, d.entries)
        self.d = d

    @classmethod
    def empty(cls, group: GroupSpec) -> BasedComplex:
        return cls(group, ())

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def generator(self, label: str) -> Generator:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"no generator labelled {label!r}") from None

    def degree(self, label: str) -> int:
        return self.generator(label).degree

    @property
    def is_filtered(self) -> bool:
        return bool(self.generators) and self.generators[0].filtration is not None

    def degrees(self) -> list[int]:
        return sorted({g.degree for g in self.generators})

    def in_degree(self, k: int) -> list[str]:
        return [g.label for g in self.generators if g.degree == k]

    def levels(self) -> list[int]:
        return sorted({g.filtration for g in self.generators if g.filtration is not None})

    def at_level(self, p: int) -> list[str]:
        return [g.label for g in self.generators if g.filtration == p]

    def block(self, k: int) -> RingMatrix:
        """The differential from degree ``k`` to degree ``k + 1``."""
        return self.d.submatrix(self.in_degree(k), self.in_degree(k + 1))

    @property
    def is_empty(self) -> bool:
        return not self.generators

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasedComplex):
            return NotImplemented
        return (
            self.group == other.group
            and set(self.generators) == set(other.generators)
            and self.d.entries == other.d.entries
        )

    def __hash__(self):
        return hash((self.group, frozenset(self.generators), frozenset(self.d.entries.items())))

    def __repr__(self) -> str:
        gens = ", ".join(f"{g.label}@{g.degree}" for g in self.generators)
        return f"BasedComplex({gens}; {len(self.d.entries)} nonzero entries)"


def validate(c: BasedComplex) -> ValidationReport:
    """Check every complex invariant; report the first violation."""
    filt = [g.filtration is None for g in c.generators]
    if any(filt) and not all(filt):
        missing = next(g.label for g in c.generators if g.filtration is None)
        return ValidationReport(False, f"filtration missing on generator {missing!r}")
    for (x, y), v in c.d.entries.items():
        if c.degree(y) != c.degree(x) + 1:
            return ValidationReport(
                False,
                f"d({x}) has a {y} term but deg({y})={c.degree(y)} != deg({x})+1={c.degree(x) + 1}",
            )
        if c.is_filtered and c.generator(y).filtration > c.generator(x).filtration:
            return ValidationReport(False, f"d({x}) has a {y} term of higher filtration level")
    dd = matrix_mul(c.d, c.d)
    if dd.entries:
        (x, z), v = min(dd.entries.items())
        return ValidationReport(False, f"d^2 != 0: coefficient of {z} in d(d({x})) is {v}")
    return ValidationReport(True)


def underlying_integer_matrix(c: BasedComplex, from_degree: int) -> list[list[int]]:
    """Integer matrix of the differential leaving ``from_degree``.

    Rows are indexed by (generator, group element) and columns likewise for
    degree ``from_degree + 1``; row ``(x, g)`` is ``d(g x)`` in the Z-basis.
    """
    return regular_representation(c.block(from_degree))


def integral_homology(c: BasedComplex) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Homology of the underlying Z-complex: ``{degree: (free rank, torsion)}``."""
    n = c.group.order
    out = {}
    ranks, torsion = {}, {}
    for k in c.degrees():
        if c.in_degree(k + 1):
            inv = invariant_factors(underlying_integer_matrix(c, k))
        else:
            inv = ()
        ranks[k] = len(inv)
        torsion[k + 1] = tuple(d for d in inv if d != 1)
    for k in c.degrees():
        dim = n * len(c.in_degree(k))
        free = dim - ranks.get(k, 0) - ranks.get(k - 1, 0)
        tor = torsion.get(k, ())
        if free or tor:
            out[k] = (free, tor)
    return out


def is_acyclic(c: BasedComplex) -> bool:
    return not integral_homology(c)


def shift(c: BasedComplex, k: int) -> BasedComplex:
    """Add ``k`` to every degree and multiply the differential by ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    gens = [Generator(g.label, g.degree + k, g.filtration) for g in c.generators]
    d = c.d if sign == 1 else -c.d
    return BasedComplex(c.group, gens, d)


def relabel(c: BasedComplex, mapping: Mapping[str, str]) -> BasedComplex:
    gens = [Generator(mapping.get(g.label, g.label), g.degree, g.filtration) for g in c.generators]
    return BasedComplex(c.group, gens, c.d.relabel(mapping, mapping).entries)


def prefixed(c: BasedComplex, prefix: str) -> BasedComplex:
    return relabel(c, {x: prefix + x for x in c.labels})


def direct_sum(*parts: BasedComplex) -> BasedComplex:
    if not parts:
        raise ValueError("direct_sum needs at least one complex")
    group = parts[0].group
    gens, ents = [], {}
    for p in parts:
        _same(group, p.group)
        gens.extend(p.generators)
        ents.update(p.d.entries)
    return BasedComplex(group, gens, ents)


def with_filtration(c: BasedComplex, levels: Mapping[str, int] | None) -> BasedComplex:
    if levels is None:
        gens = [Generator(g.label, g.degree) for g in c.generators]
    else:
        gens = [Generator(g.label, g.degree, levels[g.label]) for g in c.generators]
    return BasedComplex(c.group, gens, c.d)


def graded_piece(c: BasedComplex, level: int) -> BasedComplex:
    """The associated graded complex at ``level`` (returned unfiltered)."""
    labels = c.at_level(level)
    gens = [Generator(x, c.degree(x)) for x in labels]
    keep = set(labels)
    return BasedComplex(
        c.group, gens,
        {(x, y): v for (x, y), v in c.d.entries.items() if x in keep and y in keep},
    )


def restrict(c: BasedComplex, labels: Iterable[str]) -> BasedComplex:
    keep = set(labels)
    gens = [g for g in c.generators if g.label in keep]
    return BasedComplex(
        c.group, gens,
        {(x, y): v for (x, y), v in c.d.entries.items() if x in keep and y in keep},
    )


def two_term(matrix: RingMatrix, degree: int = -1) -> BasedComplex:
    """Complex with the rows of ``matrix`` in ``degree`` and columns in ``degree + 1``."""
    gens = [Generator(r, degree) for r in matrix.rows] + [Generator(c, degree + 1) for c in matrix.cols]
    return BasedComplex(matrix.group, gens, matrix.entries)


class ChainMapError(ValueError):
    pass


@dataclass(frozen=True)
class ChainMap:
    """Degree-0 map; ``f`` has rows = source labels, cols = target labels."""

    source: BasedComplex
    target: BasedComplex
    f: RingMatrix

    def check(self) -> ValidationReport:
        s, t, f = self.source, self.target, self.f
        _same(s.group, t.group)
        if set(f.rows) != set(s.labels) or set(f.cols) != set(t.labels):
            return ValidationReport(False, "map labels do not match source/target generators")
        for (x, y), v in f.entries.items():
            if s.degree(x) != t.degree(y):
                return ValidationReport(False, f"f({x}) has a {y} term of different degree")
            if s.is_filtered and t.is_filtered:
                if t.generator(y).filtration > s.generator(x).filtration:
                    return ValidationReport(False, f"f({x}) has a {y} term of higher filtration level")
        lhs = matrix_mul(f, t.d)
        rhs = matrix_mul(s.d, f)
        diff = lhs - rhs
        if diff.entries:
            (x, y), v = min(diff.entries.items())
            return ValidationReport(False, f"d f != f d: discrepancy {v} at ({x}, {y})")
        return ValidationReport(True)

    def compose(self, after: ChainMap) -> ChainMap:
        """``after ∘ self``."""
        if after.source != self.target:
            raise ChainMapError("maps are not composable")
        return ChainMap(self.source, after.target, matrix_mul(self.f, after.f))

    def __neg__(self) -> ChainMap:
        return ChainMap(self.source, self.target, -self.f)

    @classmethod
    def identity(cls, c: BasedComplex) -> ChainMap:
        from .group_algebra import matrix_identity

        return cls(c, c, matrix_identity(c.group, c.labels))


@dataclass(frozen=True)
class ChainHomotopy:
    """``phi`` (rows = source labels, cols = target labels) lowers degree by one.

    The defining identity is ``d phi + phi d = f - g`` read as maps; with
    row-vector matrices this is ``phi @ d_D + d_C @ phi == F - G``.
    """

    f: ChainMap
    g: ChainMap
    phi: RingMatrix

    def check(self) -> ValidationReport:
        f, g, phi = self.f, self.g, self.phi
        if f.source != g.source or f.target != g.target:
            return ValidationReport(False, "f and g have different source/target")
        s, t = f.source, f.target
        for (x, y), v in phi.entries.items():
            if t.degree(y) != s.degree(x) - 1:
                return ValidationReport(False, f"phi({x}) has a {y} term of the wrong degree")
        lhs = matrix_mul(phi, t.d) + matrix_mul(s.d, phi)
        diff = lhs - (f.f - g.f)
        if diff.entries:
            (x, y), v = min(diff.entries.items())
            return ValidationReport(False, f"d phi + phi d != f - g: discrepancy {v} at ({x}, {y})")
        return ValidationReport(True)
