"""Elementary moves on based complexes and scripts built from them.

A move script that reduces an acyclic complex to the empty complex is a
machine-checkable certificate that its Whitehead torsion vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .chain import BasedComplex, Generator
from .group_algebra import RingElement, RingMatrix, TrivialUnit, _coerce

__all__ = [
    "Expand",
    "Collapse",
    "Slide",
    "BaseChange",
    "Move",
    "MoveScript",
    "MoveError",
    "ScriptError",
    "apply",
    "run",
    "trace",
    "verify_trivial",
    "inverse_script",
    "inverse_move",
    "describe",
]


class MoveError(ValueError):
    """A move whose precondition fails on the current complex."""


class ScriptError(ValueError):
    def __init__(self, index: int, move, cause: Exception):
        super().__init__(f"move {index} ({describe(move)}) is not applicable: {cause}")
        self.index = index
        self.move = move
        self.cause = cause


@dataclass(frozen=True)
class Expand:
    """Adjoin ``a`` in degree ``degree`` and ``b`` in ``degree + 1`` with ``d(a) = b``."""

    a: str
    b: str
    degree: int
    filtration: int | None = None


@dataclass(frozen=True)
class Collapse:
    """Remove a pair ``a -> b`` whose entry is 1 and alone in its row and column."""

    a: str
    b: str


@dataclass(frozen=True)
class Slide:
    """Replace ``target`` by ``target + c * source`` (same degree)."""

    target: str
    source: str
    c: RingElement


@dataclass(frozen=True)
class BaseChange:
    """Replace ``label`` by ``u * label`` for a trivial unit ``u``."""

    label: str
    u: TrivialUnit


Move = Union[Expand, Collapse, Slide, BaseChange]


@dataclass(frozen=True)
class MoveScript:
    initial: BasedComplex
    moves: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __len__(self) -> int:
        return len(self.moves)

    def then(self, more) -> MoveScript:
        return MoveScript(self.initial, self.moves + tuple(more))


def describe(m) -> str:
    if isinstance(m, Expand):
        return f"expand {m.a}->{m.b} at degree {m.degree}"
    if isinstance(m, Collapse):
        return f"collapse {m.a}->{m.b}"
    if isinstance(m, Slide):
        return f"slide {m.target} += ({m.c})*{m.source}"
    if isinstance(m, BaseChange):
        return f"base change {m.label} *= {m.u}"
    return repr(m)


def _row_op(ents: dict, group, target: str, source: str, c: RingElement):
    for (r, col), v in [kv for kv in ents.items() if kv[0][0] == source]:
        key = (target, col)
        s = ents[key] + c * v if key in ents else c * v
        if s:
            ents[key] = s
        else:
            ents.pop(key, None)


def _col_op(ents: dict, group, target: str, source: str, c: RingElement):
    for (r, col), v in [kv for kv in ents.items() if kv[0][1] == source]:
        key = (r, target)
        s = ents[key] + v * c if key in ents else v * c
        if s:
            ents[key] = s
        else:
            ents.pop(key, None)


def apply(c: BasedComplex, m) -> BasedComplex:
    """Apply one move; raises :class:`MoveError` if its precondition fails."""
    g = c.group
    if isinstance(m, Slide):
        for x in (m.target, m.source):
            if x not in c:
                raise MoveError(f"unknown generator {x!r}")
        if m.target == m.source:
            raise MoveError("a slide needs target != source")
        t, s = c.generator(m.target), c.generator(m.source)
        if t.degree != s.degree:
            raise MoveError(f"cannot slide {m.source} (degree {s.degree}) into {m.target} (degree {t.degree})")
        if c.is_filtered and s.filtration > t.filtration:
            raise MoveError(
                f"source {m.source} has higher filtration level ({s.filtration}) than target {m.target} ({t.filtration})"
            )
        coef = _coerce(g, m.c)
        if not coef:
            return c
        ents = dict(c.d.entries)
        _row_op(ents, g, m.target, m.source, coef)
        _col_op(ents, g, m.source, m.target, -coef)
        return BasedComplex(g, c.generators, RingMatrix(g, c.labels, c.labels, ents))
    if isinstance(m, BaseChange):
        if m.label not in c:
            raise MoveError(f"unknown generator {m.label!r}")
        if m.u.group != g:
            raise MoveError("unit lives over a different group")
        u, uinv = m.u.element, m.u.inverse().element
        ents = {}
        for (r, col), v in c.d.entries.items():
            if r == m.label:
                v = u * v
            if col == m.label:
                v = v * uinv
            ents[(r, col)] = v
        return BasedComplex(g, c.generators, RingMatrix(g, c.labels, c.labels, ents))
    if isinstance(m, Expand):
        if m.a == m.b:
            raise MoveError("expansion labels must differ")
        for x in (m.a, m.b):
            if x in c:
                raise MoveError(f"label {x!r} already in use")
        if c.is_filtered and m.filtration is None:
            raise MoveError("expansion into a filtered complex needs a filtration level")
        if not c.is_empty and not c.is_filtered and m.filtration is not None:
            raise MoveError("expansion with a filtration level into an unfiltered complex")
        gens = c.generators + (Generator(m.a, m.degree, m.filtration), Generator(m.b, m.degree + 1, m.filtration))
        ents = dict(c.d.entries)
        ents[(m.a, m.b)] = RingElement.one(g)
        labels = c.labels + (m.a, m.b)
        return BasedComplex(g, gens, RingMatrix(g, labels, labels, ents))
    if isinstance(m, Collapse):
        for x in (m.a, m.b):
            if x not in c:
                raise MoveError(f"unknown generator {x!r}")
        v = c.d[(m.a, m.b)]
        if not v.is_one:
            raise MoveError(f"entry ({m.a}, {m.b}) is {v}, not 1")
        for (r, col), w in sorted(c.d.entries.items()):
            if r == m.a and col != m.b:
                raise MoveError(f"row {m.a} has another nonzero entry {w} in column {col}")
            if col == m.b and r != m.a:
                raise MoveError(f"column {m.b} has another nonzero entry {w} in row {r}")
        keep = [x for x in c.generators if x.label not in (m.a, m.b)]
        labels = tuple(x.label for x in keep)
        ents = {
            k: w for k, w in c.d.entries.items()
            if m.a not in k and m.b not in k
        }
        return BasedComplex(g, keep, RingMatrix(g, labels, labels, ents))
    raise TypeError(f"not a move: {m!r}")


def trace(s: MoveScript) -> list[BasedComplex]:
    """All intermediate complexes, ``[initial, after move 0, ...]``."""
    states = [s.initial]
    cur = s.initial
    for i, m in enumerate(s.moves):
        try:
            cur = apply(cur, m)
        except MoveError as exc:
            raise ScriptError(i, m, exc) from exc
        states.append(cur)
    return states


def run(s: MoveScript) -> BasedComplex:
    cur = s.initial
    for i, m in enumerate(s.moves):
        try:
            cur = apply(cur, m)
        except MoveError as exc:
            raise ScriptError(i, m, exc) from exc
    return cur


def verify_trivial(s: MoveScript) -> bool:
    """True iff the script runs and ends at the empty complex."""
    return run(s).is_empty


def inverse_move(before: BasedComplex, m):
    if isinstance(m, Expand):
        return Collapse(m.a, m.b)
    if isinstance(m, Collapse):
        a = before.generator(m.a)
        return Expand(m.a, m.b, a.degree, a.filtration)
    if isinstance(m, Slide):
        return Slide(m.target, m.source, -_coerce(before.group, m.c))
    if isinstance(m, BaseChange):
        return BaseChange(m.label, m.u.inverse())
    raise TypeError(f"not a move: {m!r}")


def inverse_script(s: MoveScript) -> MoveScript:
    states = trace(s)
    inv = [inverse_move(states[i], m) for i, m in enumerate(s.moves)]
    return MoveScript(states[-1], tuple(reversed(inv)))
