"""The acceptance suites, runnable from tests and from ``torsionlab selftest``.

Every suite is seeded and returns a :class:`CriterionResult`.  Decisions
made along the way are collected in an audit list that the soundness suite
re-checks independently.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .chain import BasedComplex, two_term, with_filtration
from .group_algebra import GroupSpec, RingMatrix
from .lens import LensSpace, classification_table, classify, closed_form_torsion, lens_complex
from .moves import apply, run, verify_trivial
from .randomgen import (
    random_acyclic_complex,
    random_complex,
    random_filtered_trivial,
    random_homotopy,
    random_invertible_matrix,
    random_isomorphism,
    random_move,
    random_unit_triangular,
)
from .torsion import (
    Emptied,
    greedy_reduce,
    homotopy_equal_torsion,
    is_trivial_torsion,
    lift_filtration_certificate,
    mapping_cone,
    torsion_logabs,
    torsion_of_composition,
    torsion_vector,
    unit_triangular_certificate,
)

__all__ = ["CriterionResult", "CRITERIA", "run_all"]

LOG_TOL = 1e-9


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    cases: int
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.title}: {self.detail} ({self.cases} cases, {self.seconds:.2f}s)"


@dataclass
class _Audit:
    entries: list = field(default_factory=list)

    def record(self, complex_: BasedComplex, decision, source: str):
        self.entries.append((complex_, decision, source))


def _s3() -> GroupSpec:
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(a[b[k]] for k in range(3))] for b in perms] for a in perms]
    return GroupSpec.from_table(table)


def move_invariance(seed: int = 101, count: int = 500, moves: int = 20, audit: _Audit | None = None):
    rng = random.Random(seed)
    ns = (2, 3, 5, 7, 12)
    failures = []
    for i in range(count):
        g = GroupSpec.cyclic(ns[i % len(ns)])
        c = random_acyclic_complex(rng, g, max_gens=8)
        before = torsion_vector(c)
        if audit is not None and i % 5 == 0:
            audit.record(c, is_trivial_torsion(c), f"move-invariance #{i}")
        cur = c
        for k in range(moves):
            cur = apply(cur, random_move(rng, cur))
            if (k + 1) % 5 == 0:
                after = torsion_vector(cur)
                if not (before.logabs_close(after, LOG_TOL) and before.equal_up_to_trivial_units(after, LOG_TOL)):
                    failures.append(f"#{i} after {k + 1} moves")
                    break
    return count, failures


def composition(seed: int = 202, count: int = 200, audit: _Audit | None = None):
    rng = random.Random(seed)
    ns = (5, 7, 12, 2, 3)
    failures = []
    worst = 0.0
    for i in range(count):
        g = GroupSpec.cyclic(ns[i % len(ns)])
        B = random_complex(rng, g, 4)
        first = random_isomorphism(rng, B, suffix="'")
        second = random_isomorphism(rng, first.target, suffix="'")
        if rng.random() < 0.5:
            first = random_homotopy(rng, first).g
        if rng.random() < 0.5:
            second = random_homotopy(rng, second).g
        rep = torsion_of_composition(second, first, LOG_TOL)
        worst = max(worst, rep.max_deviation)
        if not rep.additive:
            failures.append(f"#{i} deviation {rep.max_deviation:.3g}")
        if audit is not None and i % 10 == 0:
            cone = mapping_cone(first.compose(second))
            audit.record(cone, is_trivial_torsion(cone), f"composition #{i}")
    return count, failures, f"max deviation {worst:.2e}"


def homotopy_invariance(seed: int = 303, count: int = 200, audit: _Audit | None = None):
    rng = random.Random(seed)
    ns = (5, 7, 12, 3, 2)
    failures = []
    for i in range(count):
        g = GroupSpec.cyclic(ns[i % len(ns)])
        C = random_complex(rng, g, 4)
        f = random_isomorphism(rng, C)
        h = random_homotopy(rng, f)
        tf = torsion_vector(mapping_cone(h.f))
        tg = torsion_vector(mapping_cone(h.g))
        if not tf.logabs_close(tg, LOG_TOL):
            failures.append(f"#{i} torsion vectors differ")
            continue
        ev = homotopy_equal_torsion(h)
        if not ev.check():
            failures.append(f"#{i} evidence does not verify")
        if audit is not None and i % 10 == 0:
            audit.record(ev.cone_g, is_trivial_torsion(ev.cone_g), f"homotopy #{i}")
    return count, failures


def filtration_lift(seed: int = 404, count: int = 200, audit: _Audit | None = None):
    rng = random.Random(seed)
    groups = (GroupSpec.trivial(), GroupSpec.cyclic(3), GroupSpec.cyclic(5), GroupSpec.cyclic(7), _s3())
    failures = []
    for i in range(count):
        g = groups[i % len(groups)]
        inst = random_filtered_trivial(rng, g)
        script = lift_filtration_certificate(inst.complex, inst.per_level)
        if not verify_trivial(script):
            failures.append(f"#{i}")
        if audit is not None and i % 10 == 0:
            plain = with_filtration(inst.complex, None)
            audit.record(plain, is_trivial_torsion(plain), f"filtered #{i}")
    return count, failures


def inverse_construction(seed: int = 505, count: int = 100, audit: _Audit | None = None):
    rng = random.Random(seed)
    g = GroupSpec.cyclic(7)
    failures = []
    for i in range(count):
        size = rng.randint(1, 3)
        A, Ainv = random_invertible_matrix(rng, g, size)
        rows = [f"A:{r}" for r in A.rows] + [f"B:{c}" for c in Ainv.rows]
        cols = [f"A:{c}" for c in A.cols] + [f"B:{r}" for r in Ainv.cols]
        ents = {(f"A:{r}", f"A:{c}"): v for (r, c), v in A.entries.items()}
        ents.update({(f"B:{c}", f"B:{r}"): v for (c, r), v in Ainv.entries.items()})
        cx = two_term(RingMatrix(g, rows, cols, ents))
        out = greedy_reduce(cx)
        if not isinstance(out, Emptied) or not verify_trivial(out.script):
            failures.append(f"#{i} ({type(out).__name__})")
        if audit is not None and i % 5 == 0:
            audit.record(cx, is_trivial_torsion(cx), f"inverse construction #{i}")
    return count, failures


def unit_triangular(seed: int = 606, count: int = 200, audit: _Audit | None = None):
    rng = random.Random(seed)
    groups = (GroupSpec.trivial(), GroupSpec.cyclic(2), GroupSpec.cyclic(5), GroupSpec.cyclic(7), _s3())
    failures = []
    for i in range(count):
        g = groups[i % len(groups)]
        f = random_unit_triangular(rng, g)
        script = unit_triangular_certificate(f)
        if not verify_trivial(script):
            failures.append(f"#{i}")
        if audit is not None and i % 10 == 0:
            cone = with_filtration(mapping_cone(f), None)
            audit.record(cone, is_trivial_torsion(cone), f"unit triangular #{i}")
    return count, failures


def lens_vs_oracle(max_n: int = 30):
    failures = []
    cases = 0
    for n, q1, q2, _homotopy, simple, oracle_simple in classification_table(max_n):
        cases += 1
        if simple != oracle_simple:
            failures.append(f"L({n},{q1}) vs L({n},{q2})")
    anchors = [
        ((7, 1), (7, 2), True, False),
        ((7, 1), (7, 6), True, True),
        ((5, 1), (5, 2), False, False),
    ]
    for a, b, hom, simple in anchors:
        v = classify(LensSpace(*a), LensSpace(*b))
        if (v.homotopy_equivalent, v.simple_equivalent) != (hom, simple):
            failures.append(f"anchor L{a} vs L{b}")
        cases += 1
    return cases, failures


def lens_closed_form(max_n: int = 30):
    failures = []
    cases = 0
    worst = 0.0
    for n in range(2, max_n + 1):
        for q in range(1, n):
            try:
                L = LensSpace(n, q)
            except ValueError:
                continue
            tv = torsion_vector(lens_complex(L))
            for j, z in enumerate(tv.entries, start=1):
                cases += 1
                err = abs(abs(z) - abs(closed_form_torsion(L, j)))
                worst = max(worst, err)
                if err > LOG_TOL:
                    failures.append(f"L({n},{q}) j={j}")
    return cases, failures, f"max |Δ|τ|| {worst:.2e}"


def soundness(audit: _Audit, tol: float | None = None):
    from .torsion import decision_tolerance

    tol = decision_tolerance() if tol is None else tol
    failures = []
    counts = {"trivial": 0, "nontrivial": 0, "unknown": 0}
    for c, dec, source in audit.entries:
        counts[dec.verdict] += 1
        if dec.verdict == "trivial":
            plain = with_filtration(c, None)
            if dec.script is None or dec.script.initial != plain or not run(dec.script).is_empty:
                failures.append(f"{source}: trivial verdict without a valid script")
        elif dec.verdict == "nontrivial":
            if dec.character is None:
                failures.append(f"{source}: nontrivial verdict without a character")
                continue
            v = torsion_logabs(c, dec.character)
            if abs(v - dec.logabs) > LOG_TOL or abs(v) <= tol:
                failures.append(f"{source}: character {dec.character} does not re-check")
    detail = ", ".join(f"{k}={v}" for k, v in counts.items())
    return len(audit.entries), failures, detail


def _result(number: int, title: str, fn: Callable, *args) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        out = fn(*args)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        return CriterionResult(number, title, False, 0, f"raised {type(exc).__name__}: {exc}", time.perf_counter() - t0)
    cases, failures = out[0], out[1]
    extra = out[2] if len(out) > 2 else ""
    if failures:
        detail = f"{len(failures)} failures, first: {failures[0]}"
    else:
        detail = "all cases hold"
    if extra:
        detail += f"; {extra}"
    return CriterionResult(number, title, not failures, cases, detail, time.perf_counter() - t0)


CRITERIA = {
    1: "move invariance of character torsion",
    2: "torsion of a composite is the sum",
    3: "homotopic maps have equal torsion",
    4: "filtered certificates lift",
    5: "diag(A, A^-1) reduces to nothing",
    6: "unit-triangular maps have trivial torsion",
    7: "lens classification matches the congruence oracle",
    8: "lens torsion matches the closed form",
    9: "every verdict carries a checkable witness",
}


def run_all(scale: float = 1.0) -> list[CriterionResult]:
    """Run criteria 1-9; ``scale`` shrinks the random suites for quick checks."""
    audit = _Audit()

    def k(n: int) -> int:
        return max(1, int(n * scale))

    results = [
        _result(1, CRITERIA[1], move_invariance, 101, k(500), 20, audit),
        _result(2, CRITERIA[2], composition, 202, k(200), audit),
        _result(3, CRITERIA[3], homotopy_invariance, 303, k(200), audit),
        _result(4, CRITERIA[4], filtration_lift, 404, k(200), audit),
        _result(5, CRITERIA[5], inverse_construction, 505, k(100), audit),
        _result(6, CRITERIA[6], unit_triangular, 606, k(200), audit),
        _result(7, CRITERIA[7], lens_vs_oracle, 30),
        _result(8, CRITERIA[8], lens_closed_form, 30),
    ]
    results.append(_result(9, CRITERIA[9], soundness, audit))
    return results
