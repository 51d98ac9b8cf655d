"""Seeded generators of random complexes, moves and maps for property tests.

Everything takes a ``random.Random`` so runs are reproducible from a seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .chain import BasedComplex, ChainHomotopy, ChainMap, Generator, direct_sum, with_filtration
from .group_algebra import (
    GroupSpec,
    RingElement,
    RingMatrix,
    TrivialUnit,
    bass_unit,
    elementary_col_op,
    elementary_row_op,
    matrix_identity,
    matrix_mul,
    parse_ring_element,
    ring_inverse,
)
from .moves import BaseChange, Collapse, Expand, MoveScript, Slide, apply, inverse_script, run

__all__ = [
    "known_units",
    "random_ring_element",
    "random_trivial_unit",
    "random_acyclic_complex",
    "random_complex",
    "random_move",
    "random_isomorphism",
    "random_homotopy",
    "random_filtered_trivial",
    "random_unit_triangular",
    "random_invertible_matrix",
    "FilteredInstance",
]


@lru_cache(maxsize=None)
def known_units(n: int) -> tuple[tuple[RingElement, RingElement], ...]:
    """Pairs ``(u, u^-1)`` of units of Z[Z/n] that are not of the form ±g."""
    g = GroupSpec.cyclic(n)
    cands = []
    if n == 5:
        cands += [bass_unit(5, 2, 4), parse_ring_element("t + t^-1 - 1", g), parse_ring_element("1 - t - t^4", g)]
    elif n == 7:
        cands += [bass_unit(7, 2, 3), parse_ring_element("t + t^-1 - 1", g)]
    elif n == 12:
        cands += [bass_unit(12, 5, 2)]
    out = []
    for u in cands:
        v = ring_inverse(u)
        if v is not None and u.as_trivial_unit() is None:
            out.append((u, v))
    return tuple(out)


def random_ring_element(rng: random.Random, group: GroupSpec, terms: int = 2, coef: int = 2) -> RingElement:
    acc: dict[int, int] = {}
    for _ in range(rng.randint(1, terms)):
        k = rng.randrange(group.order)
        acc[k] = acc.get(k, 0) + rng.choice([c for c in range(-coef, coef + 1) if c])
    return RingElement(group, acc)


def random_trivial_unit(rng: random.Random, group: GroupSpec) -> TrivialUnit:
    return TrivialUnit.of(group, rng.choice((1, -1)), rng.randrange(group.order))


def _random_unit_pair(rng: random.Random, group: GroupSpec, nontrivial_rate: float):
    """A unit and its inverse, sometimes a non-trivial one."""
    units = known_units(group.n) if group.kind == "cyclic" else ()
    if units and rng.random() < nontrivial_rate:
        u, v = rng.choice(units)
        return (u, v) if rng.random() < 0.5 else (v, u)
    t = random_trivial_unit(rng, group)
    return t.element, t.inverse().element


def _random_slides(rng: random.Random, c: BasedComplex, count: int) -> BasedComplex:
    for _ in range(count):
        degs = [k for k in c.degrees() if len(c.in_degree(k)) > 1]
        if not degs:
            break
        x, y = rng.sample(c.in_degree(rng.choice(degs)), 2)
        c = apply(c, Slide(x, y, random_ring_element(rng, c.group, 2, 1)))
    return c


def random_acyclic_complex(
    rng: random.Random,
    group: GroupSpec,
    max_gens: int = 8,
    nontrivial_rate: float = 0.4,
    slides: int = 6,
) -> BasedComplex:
    """Direct sum of unit two-term pieces, scrambled by random slides.

    Pieces use non-trivial units of Z[Z/n] where known, so the result can
    have non-trivial torsion.
    """
    pairs = rng.randint(1, max(1, max_gens // 2))
    gens, ents = [], {}
    for i in range(pairs):
        k = rng.randint(-2, 1)
        u, _ = _random_unit_pair(rng, group, nontrivial_rate)
        gens += [Generator(f"a{i}", k), Generator(f"b{i}", k + 1)]
        ents[(f"a{i}", f"b{i}")] = u
    return _random_slides(rng, BasedComplex(group, gens, ents), slides)


def random_complex(rng: random.Random, group: GroupSpec, max_gens: int = 4) -> BasedComplex:
    """A small complex, not necessarily acyclic."""
    c = random_acyclic_complex(rng, group, max_gens=max(2, max_gens - 1), nontrivial_rate=0.0, slides=0)
    # replace each unit by an arbitrary coefficient and add a free cycle now and then
    ents = {k: random_ring_element(rng, group, 2, 2) for k in c.d.entries}
    gens = list(c.generators)
    if len(gens) < max_gens and rng.random() < 0.5:
        gens.append(Generator("z", rng.randint(-1, 1)))
    return _random_slides(rng, BasedComplex(group, gens, {k: v for k, v in ents.items() if v}), 3)


def random_move(rng: random.Random, c: BasedComplex, stem: str = "x"):
    """A random move whose precondition holds on ``c`` (unfiltered ``c``)."""
    g = c.group
    collapsible = []
    for (x, y), v in c.d.entries.items():
        if v.is_one and len(c.d.row(x)) == 1 and len(c.d.col(y)) == 1:
            collapsible.append((x, y))
    slidable = [k for k in c.degrees() if len(c.in_degree(k)) > 1]
    r = rng.random()
    if r < 0.15 and collapsible:
        return Collapse(*sorted(collapsible)[rng.randrange(len(collapsible))])
    if r < 0.55 and slidable:
        x, y = rng.sample(c.in_degree(rng.choice(slidable)), 2)
        return Slide(x, y, random_ring_element(rng, g, 2, 2))
    if r < 0.8 and not c.is_empty:
        return BaseChange(rng.choice(c.labels), random_trivial_unit(rng, g))
    i = 0
    while f"{stem}{i}a" in c or f"{stem}{i}b" in c:
        i += 1
    degs = c.degrees() or [0]
    return Expand(f"{stem}{i}a", f"{stem}{i}b", rng.randint(degs[0] - 1, degs[-1]))


def random_isomorphism(
    rng: random.Random, c: BasedComplex, ops: int = 4, nontrivial_rate: float = 0.4, suffix: str = "'"
) -> ChainMap:
    """A based isomorphism ``c -> d`` with ``d = H^-1 d_c H`` for random ``H``.

    ``H`` is a product of elementary same-degree operations and diagonal
    units; the target's generators are the source's with ``suffix`` added.
    """
    g = c.group
    src = c.labels
    tgt = [x + suffix for x in src]
    rename = dict(zip(src, tgt))
    H = RingMatrix(g, src, tgt, {(x, rename[x]): RingElement.one(g) for x in src})
    Hinv = RingMatrix(g, tgt, src, {(rename[x], x): RingElement.one(g) for x in src})
    for _ in range(ops):
        degs = [k for k in c.degrees() if len(c.in_degree(k)) > 1]
        if degs and rng.random() < 0.6:
            i, j = rng.sample([rename[x] for x in c.in_degree(rng.choice(degs))], 2)
            w = random_ring_element(rng, g, 2, 1)
            H = elementary_col_op(H, j, i, w)
            Hinv = elementary_row_op(Hinv, i, j, -w)
        elif src:
            i = rename[rng.choice(src)]
            u, v = _random_unit_pair(rng, g, nontrivial_rate)
            H = RingMatrix(g, H.rows, H.cols, {k: (e * u if k[1] == i else e) for k, e in H.entries.items()})
            Hinv = RingMatrix(g, Hinv.rows, Hinv.cols, {k: (v * e if k[0] == i else e) for k, e in Hinv.entries.items()})
    d = matrix_mul(matrix_mul(Hinv, c.d), H)
    target = BasedComplex(g, [Generator(rename[x.label], x.degree) for x in c.generators], d)
    return ChainMap(c, target, H)


def random_homotopy(rng: random.Random, f: ChainMap, density: float = 0.5) -> ChainHomotopy:
    """``(f, g, phi)`` with ``g = f - (d phi + phi d)`` for a random ``phi``."""
    C, D = f.source, f.target
    g = C.group
    ents = {}
    for x in C.generators:
        for y in D.generators:
            if y.degree == x.degree - 1 and rng.random() < density:
                v = random_ring_element(rng, g, 2, 2)
                if v:
                    ents[(x.label, y.label)] = v
    phi = RingMatrix(g, C.labels, D.labels, ents)
    G = f.f - (matrix_mul(phi, D.d) + matrix_mul(C.d, phi))
    return ChainHomotopy(f, ChainMap(C, D, G), phi)


@dataclass(frozen=True)
class FilteredInstance:
    complex: BasedComplex
    per_level: dict  # level -> MoveScript emptying that graded piece


def random_filtered_trivial(
    rng: random.Random, group: GroupSpec, levels: int | None = None, cross: int = 6
) -> FilteredInstance:
    """A filtered complex whose graded pieces are simply trivial.

    Each level is built from expansions scrambled by slides and base
    changes; the emptying script of a piece is the inverse of its build
    script.  Random slides from lower into higher levels then add
    filtration-respecting cross terms.
    """
    if levels is None:
        levels = rng.randint(2, 4)
    used = sorted(rng.sample(range(0, 2 * levels + 2), levels))  # gaps are allowed
    pieces, per_level = [], {}
    for p in used:
        moves = []
        cur = BasedComplex.empty(group)
        for i in range(rng.randint(1, 2)):
            m = Expand(f"p{p}a{i}", f"p{p}b{i}", rng.randint(-1, 0))
            moves.append(m)
            cur = apply(cur, m)
        for _ in range(rng.randint(0, 3)):
            degs = [k for k in cur.degrees() if len(cur.in_degree(k)) > 1]
            if degs and rng.random() < 0.6:
                x, y = rng.sample(cur.in_degree(rng.choice(degs)), 2)
                m = Slide(x, y, random_ring_element(rng, group, 2, 2))
            else:
                m = BaseChange(rng.choice(cur.labels), random_trivial_unit(rng, group))
            moves.append(m)
            cur = apply(cur, m)
        build = MoveScript(BasedComplex.empty(group), tuple(moves))
        per_level[p] = inverse_script(build)
        pieces.append(with_filtration(run(build), {x: p for x in cur.labels}))
    c = direct_sum(*pieces)
    for _ in range(cross):
        x = rng.choice(c.generators)
        below = [y for y in c.generators if y.degree == x.degree and y.filtration < x.filtration]
        if below:
            y = rng.choice(below)
            c = apply(c, Slide(x.label, y.label, random_ring_element(rng, group, 2, 2)))
    return FilteredInstance(c, per_level)


def random_unit_triangular(rng: random.Random, group: GroupSpec, max_gens: int = 5) -> ChainMap:
    """A filtered map ``C -> D`` with one generator per level and ±g diagonal.

    ``D`` is ``C`` after filtered slides and base changes; ``f`` is the
    corresponding change of basis plus a random strictly level-lowering
    null-homotopic term.
    """
    C0 = random_complex(rng, group, max_gens)
    order = sorted(C0.generators, key=lambda x: (-x.degree, rng.random()))
    levels = {x.label: i for i, x in enumerate(order)}
    C = with_filtration(C0, levels)
    rename = {x: "y" + x for x in C.labels}
    D = BasedComplex(
        group,
        [Generator(rename[x.label], x.degree, x.filtration) for x in C.generators],
        C.d.relabel(rename, rename).entries,
    )
    F = RingMatrix(group, C.labels, D.labels, {(x, rename[x]): RingElement.one(group) for x in C.labels})
    for _ in range(rng.randint(0, 4)):
        y = rng.choice(D.generators)
        lower = [z for z in D.generators if z.degree == y.degree and z.filtration < y.filtration]
        if lower and rng.random() < 0.6:
            z = rng.choice(lower)
            w = random_ring_element(rng, group, 2, 2)
            D = apply(D, Slide(y.label, z.label, w))
            F = elementary_col_op(F, z.label, y.label, -w)
        else:
            u = random_trivial_unit(rng, group)
            D = apply(D, BaseChange(y.label, u))
            uinv = u.inverse().element
            F = RingMatrix(group, F.rows, F.cols, {k: (e * uinv if k[1] == y.label else e) for k, e in F.entries.items()})
    # add d phi + phi d for phi strictly lowering the level
    ents = {}
    for x in C.generators:
        for y in D.generators:
            if y.degree == x.degree - 1 and y.filtration < x.filtration and rng.random() < 0.5:
                ents[(x.label, y.label)] = random_ring_element(rng, group, 2, 2)
    phi = RingMatrix(group, C.labels, D.labels, {k: v for k, v in ents.items() if v})
    F = F + matrix_mul(phi, D.d) + matrix_mul(C.d, phi)
    return ChainMap(C, D, F)


def random_invertible_matrix(rng: random.Random, group: GroupSpec, size: int, ops: int = 6, nontrivial_rate: float = 0.5):
    """``(A, A^-1)`` over Z[G], built from elementary operations and unit scalings."""
    rows = [f"r{i}" for i in range(size)]
    cols = [f"c{i}" for i in range(size)]
    A = RingMatrix(group, rows, cols, {(r, c): RingElement.one(group) for r, c in zip(rows, cols)})
    Ainv = RingMatrix(group, cols, rows, {(c, r): RingElement.one(group) for r, c in zip(rows, cols)})
    for _ in range(ops):
        if size > 1 and rng.random() < 0.6:
            i, j = rng.sample(range(size), 2)
            w = random_ring_element(rng, group, 2, 1)
            A = elementary_row_op(A, rows[i], rows[j], w)
            Ainv = elementary_col_op(Ainv, rows[j], rows[i], -w)
        else:
            i = rng.randrange(size)
            u, v = _random_unit_pair(rng, group, nontrivial_rate)
            A = RingMatrix(group, rows, cols, {k: (u * e if k[0] == rows[i] else e) for k, e in A.entries.items()})
            Ainv = RingMatrix(group, cols, rows, {k: (e * v if k[1] == rows[i] else e) for k, e in Ainv.entries.items()})
    return A, Ainv
