"""Torsion of acyclic based complexes and of chain homotopy equivalences.

Two routes to the Whitehead class of an acyclic complex are provided and
kept independent of each other:

* move scripts, which certify triviality exactly; and
* character torsion: for ``G = Z/n`` every character ``t -> zeta^j`` turns
  the complex into an acyclic complex of complex vector spaces whose torsion
  is a nonzero scalar, defined up to ``±zeta^k``.  ``log|tau_j|`` is
  therefore an exact invariant of the class, and it vanishes for every ``j``
  on trivial classes.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.linalg import qr

from .chain import (
    BasedComplex,
    ChainHomotopy,
    ChainMap,
    Generator,
    is_acyclic,
    restrict,
    graded_piece,
    relabel,
    validate,
    with_filtration,
)
from .group_algebra import (
    GroupSpec,
    RingElement,
    RingMatrix,
    TrivialUnit,
    ring_matrix_inverse,
)
from .moves import (
    BaseChange,
    Collapse,
    Expand,
    MoveError,
    MoveScript,
    ScriptError,
    Slide,
    apply,
    inverse_script,
    run,
)

__all__ = [
    "DEFAULT_TOL",
    "decision_tolerance",
    "NotAcyclicError",
    "CertificateError",
    "TorsionVector",
    "mapping_cone",
    "torsion_scalar",
    "torsion_vector",
    "Emptied",
    "TwoTerm",
    "Stuck",
    "greedy_reduce",
    "Decision",
    "is_trivial_torsion",
    "lift_filtration_certificate",
    "HomotopyEvidence",
    "homotopy_equal_torsion",
    "unit_triangular_certificate",
    "CompositionReport",
    "torsion_of_composition",
]

DEFAULT_TOL = 1e-6


def decision_tolerance() -> float:
    """The logabs threshold for non-triviality; ``TORSIONLAB_TOL`` overrides it."""
    raw = os.environ.get("TORSIONLAB_TOL")
    return float(raw) if raw else DEFAULT_TOL


class NotAcyclicError(ValueError):
    def __init__(self, message: str, degree: int | None = None, character: int | None = None):
        super().__init__(message)
        self.degree = degree
        self.character = character


class CertificateError(ValueError):
    def __init__(self, message: str, level: int | None = None, index: int | None = None):
        super().__init__(message)
        self.level = level
        self.index = index


# --- mapping cone ------------------------------------------------------------


def mapping_cone(f: ChainMap, source_prefix: str = "C:", target_prefix: str = "D:") -> BasedComplex:
    """``C[1] ⊕ D`` with differential ``[[-d_C, f], [0, d_D]]``.

    Source generators come first, one degree lower and relabelled with
    ``source_prefix``.  The cone is filtered when both ends are.
    """
    rep = f.check()
    if not rep:
        raise ValueError(f"invalid chain map: {rep.message}")
    C, D = f.source, f.target
    filtered = C.is_filtered and D.is_filtered
    gens = [
        Generator(source_prefix + g.label, g.degree - 1, g.filtration if filtered else None)
        for g in C.generators
    ] + [
        Generator(target_prefix + g.label, g.degree, g.filtration if filtered else None)
        for g in D.generators
    ]
    ents = {}
    for (x, y), v in C.d.entries.items():
        ents[(source_prefix + x, source_prefix + y)] = -v
    for (x, y), v in f.f.entries.items():
        ents[(source_prefix + x, target_prefix + y)] = v
    for (x, y), v in D.d.entries.items():
        ents[(target_prefix + x, target_prefix + y)] = v
    return BasedComplex(C.group, gens, ents)


# --- character torsion ---------------------------------------------------------


@dataclass(frozen=True)
class TorsionVector:
    """Character torsions ``tau_j`` for ``j = 1 .. n-1`` of a complex over Z[Z/n]."""

    n: int
    entries: tuple[complex, ...]
    logabs: tuple[float, ...]

    def max_logabs(self) -> float:
        return max((abs(x) for x in self.logabs), default=0.0)

    def is_trivial(self, tol: float | None = None) -> bool:
        return self.max_logabs() <= (decision_tolerance() if tol is None else tol)

    def logabs_close(self, other: TorsionVector, tol: float = 1e-9) -> bool:
        return self.n == other.n and all(
            abs(a - b) <= tol for a, b in zip(self.logabs, other.logabs)
        )

    def equal_up_to_trivial_units(self, other: TorsionVector, tol: float = 1e-9) -> bool:
        """Entrywise ``tau_j = ±zeta^(jk) * tau'_j`` for a single exponent ``k``."""
        if self.n != other.n or not self.logabs_close(other, tol):
            return False
        if self.n <= 1:
            return True
        ratios = [a / b for a, b in zip(self.entries, other.entries)]
        for k in range(self.n):
            for s in (1, -1):
                if all(
                    abs(r - s * np.exp(2j * np.pi * (j * k % self.n) / self.n)) <= tol * max(1.0, abs(r))
                    for j, r in enumerate(ratios, start=1)
                ):
                    return True
        return False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [[z.real, z.imag] for z in self.entries],
            "logabs": list(self.logabs),
        }


def _coeff_tensor(block: RingMatrix, rows, cols, n: int) -> np.ndarray:
    T = np.zeros((len(rows), len(cols), n), dtype=np.longdouble)
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: i for i, c in enumerate(cols)}
    for (r, c), v in block.entries.items():
        if r not in ri or c not in ci:
            continue
        i, j = ri[r], ci[c]
        for k, coef in v.items():
            T[i, j, k] = coef
    return T


def _roots(n: int, characters) -> np.ndarray:
    """``W[k, jj] = exp(2 pi i k j / n)`` in extended precision."""
    pi = np.arccos(np.longdouble(-1))
    expo = np.outer(np.arange(n), characters) % n
    ang = 2 * pi * expo.astype(np.longdouble) / n
    return np.cos(ang) + 1j * np.sin(ang)


def _batched_logdet(A: np.ndarray):
    """``(phase, log|det|)`` for a stack of square matrices, by partially pivoted LU.

    Works in whatever precision ``A`` carries; LAPACK is bypassed so that
    extended precision survives.
    """
    A = A.copy()
    J, N, _ = A.shape
    idx = np.arange(J)
    logabs = np.zeros(J, dtype=np.longdouble)
    phase = np.ones(J, dtype=A.dtype)
    for col in range(N):
        p = col + np.argmax(np.abs(A[:, col:, col]), axis=1)
        swap = p != col
        if swap.any():
            top = A[idx, col].copy()
            A[idx, col] = A[idx, p]
            A[idx, p] = top
            phase[swap] = -phase[swap]
        piv = A[:, col, col]
        mag = np.abs(piv)
        if (mag == 0).any():
            return None
        logabs += np.log(mag)
        phase *= piv / mag
        if col + 1 < N:
            factors = A[:, col + 1:, col] / piv[:, None]
            A[:, col + 1:, col:] -= factors[:, :, None] * A[:, None, col, col:]
    return phase, logabs


def _character_torsions(c: BasedComplex, characters) -> list[tuple[complex, float]]:
    """``(tau_j, log|tau_j|)`` for every requested character index.

    Degrees are processed from low to high.  In each degree the rows not yet
    hit by the previous differential are mapped forward, a well-conditioned
    set of image columns is picked by pivoted QR, and the change of basis
    (those images plus the remaining unit vectors) contributes its
    determinant with sign ``(-1)^(k+1)``.  Determinants are taken in
    extended precision because units of Z[Z/n] can have character values of
    very different sizes.
    """
    g = c.group
    if g.kind == "cyclic":
        n = g.n
    elif g.kind == "trivial":
        n = 1
    else:
        raise ValueError("character torsion needs a trivial or cyclic group")
    characters = list(characters)
    for j in characters:
        if not 0 <= j < n:
            raise ValueError(f"character index {j} out of range 0..{n - 1}")
    if c.is_empty or not characters:
        return [(1 + 0j, 0.0) for _ in characters]
    J = len(characters)
    W = _roots(n, characters)  # n x J
    lo, hi = min(c.degrees()), max(c.degrees())
    labels = {k: c.in_degree(k) for k in range(lo, hi + 2)}
    logabs = np.zeros(J, dtype=np.longdouble)
    phase = np.ones(J, dtype=np.clongdouble)
    used = [[] for _ in range(J)]  # per character: columns of degree k hit from degree k-1
    for k in range(lo, hi + 1):
        n_k = len(labels[k])
        r = n_k - len(used[0])
        if r == 0:
            used = [[] for _ in range(J)]
            continue
        rows, cols = labels[k], labels[k + 1]
        n_next = len(cols)
        if n_next < r:
            raise NotAcyclicError(f"not acyclic in degree {k}", k, characters[0])
        T = _coeff_tensor(c.d, rows, cols, n)
        blocks = np.moveaxis(T @ W, 2, 0)  # J x rows x cols
        B = np.zeros((J, n_next, n_next), dtype=np.clongdouble)
        new_used = []
        for jj, j in enumerate(characters):
            S = [i for i in range(n_k) if i not in set(used[jj])]
            M = blocks[jj][S, :]
            M64 = M.astype(np.complex128)
            _, R, piv = qr(M64, pivoting=True, mode="economic")
            diag = np.abs(np.diag(R))
            scale = max(1.0, float(np.abs(M64).max()))
            if len(S) != r or diag.size < r or diag[r - 1] <= 1e-9 * scale:
                raise NotAcyclicError(
                    f"not acyclic in degree {k} after applying character {j}", k, j
                )
            chosen = sorted(int(p) for p in piv[:r])
            rest = [i for i in range(n_next) if i not in set(chosen)]
            B[jj, :r] = M
            B[jj, np.arange(r, n_next), rest] = 1
            new_used.append(chosen)
        res = _batched_logdet(B)
        if res is None:
            raise NotAcyclicError(f"not acyclic in degree {k}", k, characters[0])
        ph, la = res
        if k % 2:
            logabs += la
            phase *= ph
        else:
            logabs -= la
            phase /= ph
        used = new_used
    out = []
    for jj in range(J):
        la = float(logabs[jj])
        z = complex(phase[jj]) * math.exp(la)
        out.append((z, la))
    return out


def torsion_scalar(c: BasedComplex, j: int) -> complex:
    """Torsion of ``c`` with coefficients twisted by the character ``j``.

    One representative of a class defined up to ``±zeta^k``.  A two-term
    piece with source in an odd degree contributes its determinant, one
    with source in an even degree the inverse determinant.
    """
    return _character_torsions(c, [j])[0][0]


def torsion_logabs(c: BasedComplex, j: int) -> float:
    return _character_torsions(c, [j])[0][1]


def torsion_vector(c: BasedComplex) -> TorsionVector:
    g = c.group
    if g.kind != "cyclic":
        raise ValueError("torsion vectors are defined for cyclic groups")
    js = range(1, g.n)
    vals = _character_torsions(c, js)
    return TorsionVector(g.n, tuple(v for v, _ in vals), tuple(l for _, l in vals))


# --- greedy reduction ------------------------------------------------------------


@dataclass(frozen=True)
class Emptied:
    script: MoveScript

    @property
    def residual(self) -> BasedComplex:
        return BasedComplex.empty(self.script.initial.group)


@dataclass(frozen=True)
class TwoTerm:
    matrix: RingMatrix
    script: MoveScript
    residual: BasedComplex


@dataclass(frozen=True)
class Stuck:
    script: MoveScript
    residual: BasedComplex
    diagnostic: str


class _Builder:
    """Applies moves one at a time and records them."""

    def __init__(self, c: BasedComplex):
        self.initial = c
        self.cur = c
        self.moves: list = []
        self._fresh = 0

    def do(self, m) -> None:
        self.cur = apply(self.cur, m)
        self.moves.append(m)

    def fresh(self, stem: str) -> str:
        while True:
            self._fresh += 1
            label = f"{stem}{self._fresh}"
            if label not in self.cur:
                return label

    def script(self) -> MoveScript:
        return MoveScript(self.initial, tuple(self.moves))


def _eliminate(b: _Builder, x: str, y: str) -> None:
    """Cancel the pair ``x -> y`` whose entry is a trivial unit."""
    c = b.cur
    u = c.d[(x, y)].as_trivial_unit()
    if u is None:
        raise MoveError(f"entry ({x}, {y}) is not a trivial unit")
    if not c.d[(x, y)].is_one:
        b.do(BaseChange(x, u.inverse()))
    for (z, col), w in sorted(b.cur.d.entries.items()):
        if col == y and z != x:
            b.do(Slide(z, x, -w))
    for (row, col), w in sorted(b.cur.d.entries.items()):
        if row == x and col != y:
            b.do(Slide(y, col, w))
    b.do(Collapse(x, y))


def _pivot_candidates(c: BasedComplex):
    degs = c.degrees()
    lo, hi = degs[0], degs[-1]
    cands = []
    for (x, y), v in c.d.entries.items():
        if v.as_trivial_unit() is not None:
            k = c.degree(x)
            cands.append((min(k - lo, hi - k - 1), x, y))
    cands.sort()
    return cands


def _components(c: BasedComplex, rows, cols):
    parent = {x: x for x in list(rows) + list(cols)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (x, y) in c.d.entries:
        parent[find(x)] = find(y)
    groups: dict[str, tuple[list, list]] = {}
    for r in rows:
        groups.setdefault(find(r), ([], []))[0].append(r)
    for col in cols:
        groups.setdefault(find(col), ([], []))[1].append(col)
    comps = [(sorted(r), sorted(cl)) for r, cl in groups.values()]
    comps.sort(key=lambda rc: (len(rc[0]) + len(rc[1]), (rc[0] + rc[1])[0]))
    return comps


def _find_inverse_pairing(c: BasedComplex, P, Q, max_size: int = 6):
    """Pairing of P's rows with Q's columns making ``Q·P`` a signed permutation.

    Returns ``{p_row: q_col}`` or ``None``.
    """
    (prow, pcol), (qrow, qcol) = P, Q
    k = len(prow)
    if not (len(pcol) == len(qrow) == len(qcol) == k) or k > max_size:
        return None
    X = ring_matrix_inverse(c.d.submatrix(prow, pcol))
    if X is None:
        return None
    Qm = c.d.submatrix(qrow, qcol)
    qrows = {}
    for r in qrow:
        qrows.setdefault(tuple(Qm[(r, cc)] for cc in qcol), []).append(r)
    for perm in itertools.permutations(prow):
        # column qcol[i] of Q is matched with column perm[i] of X
        counts = {key: len(v) for key, v in qrows.items()}
        ok = True
        for p in pcol:
            key = tuple(X[(p, perm[i])] for i in range(k))
            if counts.get(key, 0) == 0:
                ok = False
                break
            counts[key] -= 1
        if ok:
            return {perm[i]: qcol[i] for i in range(k)}
    return None


def _merge(b: _Builder, P, Q, pairing: Mapping[str, str]) -> None:
    """Replace the two-term blocks ``P ⊕ Q`` by a single block ``-Q σ P``.

    ``pairing`` matches each row of P with a column of Q; it must be a
    bijection between equally sized square blocks.
    """
    (prow, pcol), (qrow, qcol) = P, Q
    c = b.cur
    Pm = c.d.submatrix(prow, pcol)
    Qm = c.d.submatrix(qrow, qcol)
    X = ring_matrix_inverse(Qm)
    if X is None:
        raise MoveError("block is not invertible")
    for r1 in prow:
        c2 = pairing[r1]
        for r2 in qrow:
            w = X[(c2, r2)]
            if w:
                b.do(Slide(r1, r2, w))
    for (r1, c1), w in sorted(Pm.entries.items()):
        b.do(Slide(pairing[r1], c1, w))
    back = {c2: r1 for r1, c2 in pairing.items()}
    for (r2, c2), w in sorted(Qm.entries.items()):
        b.do(Slide(r2, back[c2], -w))
    for r1 in prow:
        b.do(Collapse(r1, pairing[r1]))


def _pad(b: _Builder, comp, size: int, degree: int):
    rows, cols = list(comp[0]), list(comp[1])
    while len(rows) < size:
        x, y = b.fresh("_pad_a"), b.fresh("_pad_b")
        b.do(Expand(x, y, degree))
        rows.append(x)
        cols.append(y)
    return rows, cols


def _is_easy(c: BasedComplex, comp) -> bool:
    rows, cols = comp
    return len(rows) == 1 and len(cols) == 1 and c.d[(rows[0], cols[0])].as_trivial_unit() is not None


def _two_term_degree(c: BasedComplex) -> int | None:
    degs = c.degrees()
    if len(degs) == 2 and degs[1] == degs[0] + 1:
        return degs[0]
    return None


def _merge_step(b: _Builder) -> bool:
    c = b.cur
    k = _two_term_degree(c)
    if k is None:
        return False
    rows, cols = c.in_degree(k), c.in_degree(k + 1)
    comps = _components(c, rows, cols)
    if any(len(r) != len(cl) or not r for r, cl in comps):
        return False
    hard = [comp for comp in comps if not _is_easy(c, comp)]
    if len(hard) < 2:
        return False
    for P, Q in itertools.permutations(hard, 2):
        pairing = _find_inverse_pairing(c, P, Q)
        if pairing is not None:
            _merge(b, P, Q, pairing)
            return True
    P, Q = hard[0], hard[1]
    size = max(len(P[0]), len(Q[0]))
    P = _pad(b, P, size, k)
    Q = _pad(b, Q, size, k)
    if ring_matrix_inverse(b.cur.d.submatrix(*Q)) is None:
        return False
    _merge(b, P, Q, dict(zip(P[0], Q[1])))
    return True


def _euclid_step(b: _Builder) -> bool:
    """One round of integer division in the lowest nonzero block (trivial group only)."""
    c = b.cur
    if c.group.kind != "trivial":
        return False
    lo = c.degrees()[0]
    block = [(x, y, v.augmentation()) for (x, y), v in c.d.entries.items() if c.degree(x) == lo]
    if not block:
        return False
    _, a, bb = min((abs(v), x, y) for x, y, v in block)
    m = c.d[(a, bb)].augmentation()
    progressed = False
    for (z, col), w in sorted(c.d.entries.items()):
        if col == bb and z != a:
            q = w.augmentation() // m
            if q:
                b.do(Slide(z, a, RingElement.scalar(c.group, -q)))
                progressed = True
    for (row, col), w in sorted(b.cur.d.entries.items()):
        if row == a and col != bb:
            q = w.augmentation() // m
            if q:
                b.do(Slide(bb, col, RingElement.scalar(c.group, q)))
                progressed = True
    return progressed


def greedy_reduce(c: BasedComplex):
    """Reduce ``c`` by unit pivots, block merges and (over Z) Euclidean steps.

    Filtrations are ignored.  The outcome's script replays from the
    unfiltered input to the outcome's residual.
    """
    if c.is_filtered:
        c = with_filtration(c, None)
    b = _Builder(c)
    while True:
        cur = b.cur
        if cur.is_empty:
            return Emptied(b.script())
        if _merge_step(b):
            continue
        cands = _pivot_candidates(cur)
        if cands:
            _, x, y = cands[0]
            _eliminate(b, x, y)
            continue
        if _euclid_step(b):
            continue
        break
    cur = b.cur
    k = _two_term_degree(cur)
    if k is not None:
        return TwoTerm(cur.block(k), b.script(), cur)
    return Stuck(b.script(), cur, f"no trivial-unit pivot among {len(cur)} generators in degrees {cur.degrees()}")


# --- decisions -------------------------------------------------------------------


@dataclass(frozen=True)
class Decision:
    verdict: str  # "trivial" | "nontrivial" | "unknown"
    script: MoveScript | None = None
    character: int | None = None
    logabs: float | None = None
    torsion: TorsionVector | None = None
    detail: str = ""

    @property
    def exit_code(self) -> int:
        return {"trivial": 0, "nontrivial": 1, "unknown": 2}[self.verdict]


def is_trivial_torsion(c: BasedComplex, tol: float | None = None, check_acyclic: bool = True) -> Decision:
    """Decide whether ``c`` has trivial Whitehead torsion.

    ``trivial`` always ships an emptying script; ``nontrivial`` ships a
    character index whose ``log|tau_j|`` exceeds the tolerance.
    """
    tol = decision_tolerance() if tol is None else tol
    rep = validate(c)
    if not rep:
        raise ValueError(f"invalid complex: {rep.message}")
    if check_acyclic and not is_acyclic(c):
        raise NotAcyclicError("complex is not acyclic")
    tv = None
    if c.group.kind == "cyclic" and c.group.n > 1:
        tv = torsion_vector(c)
        worst = max(range(len(tv.logabs)), key=lambda i: (abs(tv.logabs[i]), -i))
        if abs(tv.logabs[worst]) > tol:
            return Decision(
                "nontrivial", character=worst + 1, logabs=tv.logabs[worst], torsion=tv,
                detail=f"log|tau_{worst + 1}| = {tv.logabs[worst]:.12g}",
            )
    outcome = greedy_reduce(c)
    if isinstance(outcome, Emptied):
        return Decision("trivial", script=outcome.script, torsion=tv, detail="emptied by greedy reduction")
    kind = "two-term residual" if isinstance(outcome, TwoTerm) else "stuck"
    return Decision("unknown", script=outcome.script, torsion=tv, detail=f"greedy reduction ended with a {kind}")


# --- filtered complexes ---------------------------------------------------------


def _lift(c: BasedComplex, per_level: Mapping[int, MoveScript], levels) -> _Builder:
    """Replay graded scripts for ``levels`` (top first) on the whole complex."""
    b = _Builder(c)
    for p in levels:
        graded = graded_piece(b.cur, p)
        script = per_level[p]
        if script.initial != graded:
            raise CertificateError(f"script for level {p} does not start at the graded piece of that level", p)
        try:
            if not run(script).is_empty:
                raise CertificateError(f"script for level {p} does not empty its graded piece", p)
        except ScriptError as exc:
            raise CertificateError(f"script for level {p} fails at move {exc.index}: {exc.cause}", p, exc.index) from exc
        for i, m in enumerate(script.moves):
            try:
                if isinstance(m, Expand):
                    b.do(Expand(m.a, m.b, m.degree, p))
                    continue
                if isinstance(m, Collapse):
                    # clear lower-filtration terms of d(a) by sliding them into b
                    for (row, col), w in sorted(b.cur.d.entries.items()):
                        if row == m.a and col != m.b:
                            b.do(Slide(m.b, col, w))
                b.do(m)
            except MoveError as exc:
                raise CertificateError(f"level {p}, move {i}: {exc}", p, i) from exc
    return b


def lift_filtration_certificate(c: BasedComplex, per_level: Mapping[int, MoveScript]) -> MoveScript:
    """Combine emptying scripts of the graded pieces into one for ``c``.

    Levels are processed from the top down.  Before each collapse the
    remaining terms of ``d(a)`` (all of lower filtration) are absorbed into
    ``b`` by extra slides, which keeps ``b`` in the top level.
    """
    if not c.is_filtered:
        if c.is_empty and not per_level:
            return MoveScript(c, ())
        raise CertificateError("complex is not filtered")
    rep = validate(c)
    if not rep:
        raise CertificateError(f"invalid filtered complex: {rep.message}")
    levels = sorted(c.levels(), reverse=True)
    missing = [p for p in levels if p not in per_level]
    if missing:
        raise CertificateError(f"no script for level {missing[0]}", missing[0])
    return _lift(c, per_level, levels).script()


def identity_cone_script(c: BasedComplex, pairs) -> MoveScript:
    """Emptying script for a cone of an identity, given its ``(a, b)`` unit pairs."""
    b = _Builder(c)
    for x, y in pairs:
        _eliminate(b, x, y)
    return b.script()


def strip_filtration(s: MoveScript) -> MoveScript:
    moves = tuple(Expand(m.a, m.b, m.degree) if isinstance(m, Expand) else m for m in s.moves)
    return MoveScript(with_filtration(s.initial, None), moves)


# --- homotopy invariance ----------------------------------------------------------


class HomotopyError(ValueError):
    pass


@dataclass(frozen=True)
class HomotopyEvidence:
    middle: BasedComplex
    to_f: MoveScript  # middle -> cone(f), cone labels under ``f_labels``
    to_g: MoveScript  # middle -> cone(g), cone labels under ``g_labels``
    graded: tuple[MoveScript, MoveScript]  # emptying scripts of the two top quotients
    f_labels: dict
    g_labels: dict
    cone_f: BasedComplex
    cone_g: BasedComplex
    torsion_f: TorsionVector | None
    torsion_g: TorsionVector | None
    statement: str

    @property
    def relation(self) -> MoveScript:
        """A script from cone(f) to cone(g) through the middle complex."""
        back = inverse_script(self.to_f)
        return MoveScript(back.initial, back.moves + self.to_g.moves)

    def check(self) -> bool:
        from .moves import verify_trivial

        return (
            all(verify_trivial(s) for s in self.graded)
            and relabel(run(self.to_f), self.f_labels) == self.cone_f
            and relabel(run(self.to_g), self.g_labels) == self.cone_g
        )


def homotopy_equal_torsion(h: ChainHomotopy) -> HomotopyEvidence:
    """Move-level evidence that homotopic equivalences have equal torsion.

    Builds ``C[2] ⊕ C[1] ⊕ C[1]' ⊕ D`` and strips off the cone of the
    identity under each of its two two-stage filtrations, leaving cone(f)
    and cone(-g); a final sign change on ``C[1]'`` gives cone(g).
    """
    rep = h.check()
    if not rep:
        raise HomotopyError(rep.message)
    f, g, phi = h.f, h.g, h.phi
    C, D = f.source, f.target
    G = C.group
    one = RingElement.one(G)
    gens = (
        [Generator("C2:" + x.label, x.degree - 2) for x in C.generators]
        + [Generator("C1a:" + x.label, x.degree - 1) for x in C.generators]
        + [Generator("C1b:" + x.label, x.degree - 1) for x in C.generators]
        + [Generator("D:" + y.label, y.degree) for y in D.generators]
    )
    ents = {}
    for (x, y), v in C.d.entries.items():
        ents[("C2:" + x, "C2:" + y)] = v
        ents[("C1a:" + x, "C1a:" + y)] = -v
        ents[("C1b:" + x, "C1b:" + y)] = -v
    for x in C.labels:
        ents[("C2:" + x, "C1a:" + x)] = one
        ents[("C2:" + x, "C1b:" + x)] = one
    # with row-vector matrices d^2 = 0 forces -phi in this corner
    for (x, y), v in phi.entries.items():
        ents[("C2:" + x, "D:" + y)] = -v
    for (x, y), v in f.f.entries.items():
        ents[("C1a:" + x, "D:" + y)] = v
    for (x, y), v in g.f.entries.items():
        ents[("C1b:" + x, "D:" + y)] = -v
    for (x, y), v in D.d.entries.items():
        ents[("D:" + x, "D:" + y)] = v
    middle = BasedComplex(G, gens, ents)
    mrep = validate(middle)
    if not mrep:
        raise HomotopyError(f"middle complex is invalid: {mrep.message}")

    order = sorted(C.generators, key=lambda x: -x.degree)

    def strip_top(keep: str, drop: str):
        levels = {x: (0 if x.startswith(keep) or x.startswith("D:") else 1) for x in middle.labels}
        filt = with_filtration(middle, levels)
        top = graded_piece(filt, 1)
        graded = identity_cone_script(top, [("C2:" + x.label, drop + x.label) for x in order])
        lifted = _lift(filt, {1: graded}, [1]).script()
        return graded, strip_filtration(lifted)

    graded_f, to_f = strip_top("C1a:", "C1b:")
    graded_g, to_g = strip_top("C1b:", "C1a:")
    # cone(-g) -> cone(g)
    neg = TrivialUnit.of(G, -1)
    to_g = to_g.then(BaseChange("C1b:" + x, neg) for x in C.labels)

    f_labels = {"C1a:" + x: "C:" + x for x in C.labels}
    g_labels = {"C1b:" + x: "C:" + x for x in C.labels}
    cone_f, cone_g = mapping_cone(f), mapping_cone(g)
    tf = tg = None
    statement = "tau(f) = tau(g) in Wh(G)"
    if G.kind == "cyclic" and G.n > 1:
        tf, tg = torsion_vector(cone_f), torsion_vector(cone_g)
        if not tf.logabs_close(tg, 1e-9):
            raise HomotopyError("character torsions of the two cones disagree")
        statement += f"; character torsions agree (max |Δ log| = {max((abs(a - b) for a, b in zip(tf.logabs, tg.logabs)), default=0.0):.3g})"
    return HomotopyEvidence(
        middle=middle,
        to_f=to_f,
        to_g=to_g,
        graded=(graded_f, graded_g),
        f_labels=f_labels,
        g_labels=g_labels,
        cone_f=cone_f,
        cone_g=cone_g,
        torsion_f=tf,
        torsion_g=tg,
        statement=statement,
    )


# --- unit triangular maps -------------------------------------------------------


def unit_triangular_certificate(f: ChainMap) -> MoveScript:
    """Emptying script for the cone of a unit upper-triangular filtered map.

    Each filtration level must hold exactly one source and one target
    generator, and the entry of ``f`` between them must be ``±g``.
    """
    C, D = f.source, f.target
    if not (C.is_filtered and D.is_filtered):
        raise CertificateError("source and target must be filtered")
    rep = f.check()
    if not rep:
        raise CertificateError(f"invalid chain map: {rep.message}")
    cone = mapping_cone(f)
    per_level = {}
    for p in cone.levels():
        src, tgt = C.at_level(p), D.at_level(p)
        if len(src) != 1 or len(tgt) != 1:
            raise CertificateError(
                f"level {p} has {len(src)} source and {len(tgt)} target generators; need exactly one each", p
            )
        x, y = src[0], tgt[0]
        u = f.f[(x, y)].as_trivial_unit()
        if u is None:
            raise CertificateError(f"diagonal entry f({x}) -> {y} = {f.f[(x, y)]} is not a trivial unit", p)
        piece = graded_piece(cone, p)
        per_level[p] = MoveScript(piece, (BaseChange("C:" + x, u.inverse()), Collapse("C:" + x, "D:" + y)))
    return lift_filtration_certificate(cone, per_level)


# --- composition ----------------------------------------------------------------


@dataclass(frozen=True)
class CompositionReport:
    composite: TorsionVector
    first: TorsionVector
    second: TorsionVector
    max_deviation: float
    additive: bool


def torsion_of_composition(f: ChainMap, g: ChainMap, tol: float = 1e-9) -> CompositionReport:
    """Compare the torsion of ``f ∘ g`` with the sum of the torsions of ``f`` and ``g``.

    ``g: B -> C`` is applied first, then ``f: C -> D``.
    """
    if g.target != f.source:
        raise ValueError("maps are not composable: target of g differs from source of f")
    fg = g.compose(f)
    t_fg = torsion_vector(mapping_cone(fg))
    t_f = torsion_vector(mapping_cone(f))
    t_g = torsion_vector(mapping_cone(g))
    dev = max(
        (abs(a - (b + c)) for a, b, c in zip(t_fg.logabs, t_f.logabs, t_g.logabs)),
        default=0.0,
    )
    return CompositionReport(t_fg, t_f, t_g, dev, dev <= tol)
