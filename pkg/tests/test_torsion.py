import cmath
import math
import random

import pytest
from hypothesis import given, strategies as st

from torsionlab.chain import (
    BasedComplex,
    ChainHomotopy,
    ChainMap,
    Generator,
    direct_sum,
    is_acyclic,
    relabel,
    two_term,
    validate,
    with_filtration,
)
from torsionlab.group_algebra import (
    GroupSpec,
    RingElement,
    RingMatrix,
    TrivialUnit,
    ring_matrix_inverse,
)
from torsionlab.moves import BaseChange, Collapse, MoveScript, Slide, apply, run, verify_trivial
from torsionlab.randomgen import (
    random_acyclic_complex,
    random_complex,
    random_filtered_trivial,
    random_homotopy,
    random_invertible_matrix,
    random_isomorphism,
    random_unit_triangular,
)
from torsionlab.torsion import (
    CertificateError,
    Emptied,
    HomotopyError,
    NotAcyclicError,
    Stuck,
    TwoTerm,
    greedy_reduce,
    homotopy_equal_torsion,
    is_trivial_torsion,
    lift_filtration_certificate,
    mapping_cone,
    torsion_logabs,
    torsion_of_composition,
    torsion_scalar,
    torsion_vector,
    unit_triangular_certificate,
)

from conftest import ring, s3

Z5, Z7 = GroupSpec.cyclic(5), GroupSpec.cyclic(7)


def free(G, labels, degree=0, levels=None):
    gens = [Generator(x, degree, None if levels is None else levels[i]) for i, x in enumerate(labels)]
    return BasedComplex(G, gens)


def scalar_map(G, src, tgt, entries):
    return ChainMap(src, tgt, RingMatrix(G, src.labels, tgt.labels, entries))


# --- mapping cone -----------------------------------------------------------------


def test_cone_of_identity_is_expansion():
    R = free(Z5, ["x"])
    cone = mapping_cone(ChainMap.identity(R))
    assert cone.labels == ("C:x", "D:x")
    assert cone.degree("C:x") == -1 and cone.d[("C:x", "D:x")].is_one
    assert is_acyclic(cone)


def test_cone_of_zero_map():
    C = BasedComplex(Z5, [Generator("x", 0)])
    D = BasedComplex(Z5, [Generator("y", 0)])
    cone = mapping_cone(scalar_map(Z5, C, D, {}))
    assert cone == direct_sum(BasedComplex(Z5, [Generator("C:x", -1)]), BasedComplex(Z5, [Generator("D:y", 0)]))
    assert not is_acyclic(cone)


def test_cone_of_multiplication_by_t():
    R, S = free(Z5, ["x"]), free(Z5, ["y"])
    cone = mapping_cone(scalar_map(Z5, R, S, {("x", "y"): ring("t", 5)}))
    assert is_acyclic(cone)
    tv = torsion_vector(cone)
    for j, z in enumerate(tv.entries, start=1):
        assert abs(z - cmath.exp(2j * math.pi * j / 5)) < 1e-12
    assert tv.max_logabs() < 1e-12


def test_cone_rejects_non_chain_map():
    one = RingElement.one(Z5)
    C = BasedComplex(Z5, [Generator("a", 0), Generator("b", 1)], {("a", "b"): one})
    bad = ChainMap(C, C, RingMatrix(Z5, C.labels, C.labels, {("a", "a"): one}))
    with pytest.raises(ValueError):
        mapping_cone(bad)


def test_cone_sign_convention():
    one = RingElement.one(Z5)
    C = BasedComplex(Z5, [Generator("a", 0), Generator("b", 1)], {("a", "b"): ring("t", 5)})
    cone = mapping_cone(ChainMap.identity(C))
    assert cone.d[("C:a", "C:b")] == -ring("t", 5)
    assert cone.d[("C:a", "D:a")] == one
    assert validate(cone)


# --- torsion scalars --------------------------------------------------------------


def test_expansion_has_unit_torsion():
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): RingElement.one(Z5)}))
    for j in range(1, 5):
        assert abs(torsion_scalar(c, j) - 1) < 1e-12


def test_two_term_with_two():
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): ring("2", 5)}))
    for j in range(1, 5):
        assert abs(torsion_scalar(c, j) - 2) < 1e-12
        assert abs(torsion_logabs(c, j) - math.log(2)) < 1e-12


def test_degree_parity_flips_exponent():
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): ring("2", 5)}), degree=0)
    assert abs(torsion_scalar(c, 1) - 0.5) < 1e-12


def test_character_not_acyclic_reports_degree():
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): ring("t - 1", 5)}))
    with pytest.raises(NotAcyclicError) as info:
        torsion_scalar(c, 0)
    assert info.value.degree == -1
    assert abs(torsion_scalar(c, 1)) > 0


# --- decisions -------------------------------------------------------------------


def test_decide_identity_cone():
    cone = mapping_cone(ChainMap.identity(free(Z5, ["x"])))
    dec = is_trivial_torsion(cone)
    assert dec.verdict == "trivial" and dec.exit_code == 0
    assert dec.script.moves == (Collapse("C:x", "D:x"),)


def test_decide_inverse_construction():
    A, Ainv = random_invertible_matrix(random.Random(3), Z7, 2)
    rows = [f"A:{r}" for r in A.rows] + [f"B:{c}" for c in Ainv.rows]
    cols = [f"A:{c}" for c in A.cols] + [f"B:{r}" for r in Ainv.cols]
    ents = {(f"A:{r}", f"A:{c}"): v for (r, c), v in A.entries.items()}
    ents.update({(f"B:{c}", f"B:{r}"): v for (c, r), v in Ainv.entries.items()})
    c = two_term(RingMatrix(Z7, rows, cols, ents))
    dec = is_trivial_torsion(c)
    assert dec.verdict == "trivial"
    assert run(dec.script).is_empty and dec.script.initial == c


def test_decide_cyclotomic_unit():
    u = ring("1 - t - t^4", 5)
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): u}))
    dec = is_trivial_torsion(c)
    assert dec.verdict == "nontrivial" and dec.exit_code == 1
    assert abs(torsion_logabs(c, dec.character) - dec.logabs) < 1e-12
    assert abs(dec.logabs) > 1e-6


def test_decide_rejects_non_acyclic():
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): ring("t - 1", 5)}))
    with pytest.raises(NotAcyclicError):
        is_trivial_torsion(c)


def test_tolerance_env_override(monkeypatch):
    u = ring("1 - t - t^4", 5)
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): u}))
    monkeypatch.setenv("TORSIONLAB_TOL", "10")
    assert is_trivial_torsion(c).verdict == "unknown"


def test_decide_over_trivial_group():
    G = GroupSpec.trivial()
    m = RingMatrix.from_rows(G, ["a", "b"], ["x", "y"], [[ring_int(G, 2), ring_int(G, 1)], [ring_int(G, 3), ring_int(G, 2)]])
    dec = is_trivial_torsion(two_term(m))
    assert dec.verdict == "trivial" and verify_trivial(dec.script)


def ring_int(G, k):
    return RingElement.scalar(G, k)


# --- greedy reduction ---------------------------------------------------------------


def test_greedy_empty():
    out = greedy_reduce(BasedComplex.empty(Z5))
    assert isinstance(out, Emptied) and out.script.moves == ()


def test_greedy_identity_rank_three():
    out = greedy_reduce(mapping_cone(ChainMap.identity(free(Z5, ["x", "y", "z"]))))
    assert isinstance(out, Emptied)
    assert sum(isinstance(m, Collapse) for m in out.script.moves) == 3
    assert verify_trivial(out.script)


def test_greedy_upper_triangular():
    G = GroupSpec.cyclic(3)
    one, t = RingElement.one(G), RingElement.monomial(G, 1)
    m = RingMatrix(G, ["p", "q"], ["x", "y"], {("p", "x"): one, ("p", "y"): t, ("q", "y"): one})
    out = greedy_reduce(two_term(m))
    assert isinstance(out, Emptied) and verify_trivial(out.script)
    assert sum(isinstance(mv, Collapse) for mv in out.script.moves) == 2


def test_greedy_two_term_residual_replays():
    u = ring("1 - t - t^4", 5)
    c = apply(two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): u})), BaseChange("a", TrivialUnit.of(Z5, -1, 2)))
    out = greedy_reduce(c)
    assert isinstance(out, TwoTerm)
    assert run(out.script) == out.residual


def test_greedy_stuck_replays():
    u = ring("1 - t - t^4", 5)
    pieces = [
        two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): u}), degree=-1),
        two_term(RingMatrix(Z5, ["c"], ["e"], {("c", "e"): u}), degree=-3),
    ]
    out = greedy_reduce(direct_sum(*pieces))
    assert isinstance(out, Stuck)
    assert run(out.script) == out.residual and out.diagnostic


# --- filtered certificates -------------------------------------------------------------


def _cone_pair(G, x, y, level, degree=0):
    return BasedComplex(G, [Generator(x, degree, level), Generator(y, degree + 1, level)], {(x, y): RingElement.one(G)})


def test_lift_single_level():
    c = _cone_pair(Z5, "a", "b", 0)
    script = MoveScript(with_filtration(c, None), (Collapse("a", "b"),))
    lifted = lift_filtration_certificate(c, {0: script})
    assert lifted.moves == script.moves


def test_lift_direct_sum_concatenates():
    c = direct_sum(_cone_pair(Z5, "a", "b", 1), _cone_pair(Z5, "x", "y", 0))
    top = MoveScript(BasedComplex(Z5, [Generator("a", 0), Generator("b", 1)], {("a", "b"): RingElement.one(Z5)}), (Collapse("a", "b"),))
    bottom = MoveScript(BasedComplex(Z5, [Generator("x", 0), Generator("y", 1)], {("x", "y"): RingElement.one(Z5)}), (Collapse("x", "y"),))
    lifted = lift_filtration_certificate(c, {1: top, 0: bottom})
    assert lifted.moves == top.moves + bottom.moves


def test_lift_inserts_one_slide_for_cross_term():
    c = direct_sum(_cone_pair(Z5, "a", "b", 1), _cone_pair(Z5, "x", "y", 0))
    c = BasedComplex(Z5, c.generators, {**c.d.entries, ("a", "y"): ring("2 + t", 5)})
    assert validate(c)
    top = MoveScript(BasedComplex(Z5, [Generator("a", 0), Generator("b", 1)], {("a", "b"): RingElement.one(Z5)}), (Collapse("a", "b"),))
    bottom = MoveScript(BasedComplex(Z5, [Generator("x", 0), Generator("y", 1)], {("x", "y"): RingElement.one(Z5)}), (Collapse("x", "y"),))
    lifted = lift_filtration_certificate(c, {1: top, 0: bottom})
    assert lifted.moves[0] == Slide("b", "y", ring("2 + t", 5))
    assert lifted.moves[1] == Collapse("a", "b")
    assert sum(isinstance(m, Slide) for m in lifted.moves) == 1
    assert verify_trivial(lifted)


def test_lift_reports_bad_level_script():
    c = direct_sum(_cone_pair(Z5, "a", "b", 1), _cone_pair(Z5, "x", "y", 0))
    top = MoveScript(BasedComplex(Z5, [Generator("a", 0), Generator("b", 1)], {("a", "b"): RingElement.one(Z5)}), (Collapse("b", "a"),))
    bottom = MoveScript(BasedComplex(Z5, [Generator("x", 0), Generator("y", 1)], {("x", "y"): RingElement.one(Z5)}), (Collapse("x", "y"),))
    with pytest.raises(CertificateError) as info:
        lift_filtration_certificate(c, {1: top, 0: bottom})
    assert info.value.level == 1 and info.value.index == 0


@given(st.integers(0, 100_000), st.sampled_from([GroupSpec.trivial(), GroupSpec.cyclic(4), GroupSpec.cyclic(7), s3()]))
def test_lift_property(seed, G):
    inst = random_filtered_trivial(random.Random(seed), G)
    assert validate(inst.complex)
    assert verify_trivial(lift_filtration_certificate(inst.complex, inst.per_level))


# --- homotopy invariance ------------------------------------------------------------------


def _zero_phi(f):
    return RingMatrix(f.source.group, f.source.labels, f.target.labels)


def test_homotopy_trivial_case(rng):
    C = random_complex(rng, Z5, 3)
    f = ChainMap.identity(C)
    ev = homotopy_equal_torsion(ChainHomotopy(f, f, _zero_phi(f)))
    assert ev.check()
    assert ev.torsion_f.logabs_close(ev.torsion_g, 1e-12)


def test_homotopy_identity_plus_boundary(rng):
    C = random_complex(rng, Z7, 4)
    f = ChainMap.identity(C)
    h = random_homotopy(rng, f)
    ev = homotopy_equal_torsion(h)
    assert ev.check()
    assert all(verify_trivial(s) for s in ev.graded)
    assert torsion_vector(mapping_cone(h.f)).logabs_close(torsion_vector(mapping_cone(h.g)), 1e-9)


def test_homotopy_relation_script_runs(rng):
    C = random_complex(rng, Z5, 3)
    h = random_homotopy(rng, random_isomorphism(rng, C))
    ev = homotopy_equal_torsion(h)
    end = run(ev.relation)
    assert relabel(end, ev.g_labels) == ev.cone_g


def test_sign_flip_leaves_torsion():
    C = free(Z5, ["x"])
    D = free(Z5, ["y"])
    f = scalar_map(Z5, C, D, {("x", "y"): ring("1 - t - t^4", 5)})
    tf, tneg = torsion_vector(mapping_cone(f)), torsion_vector(mapping_cone(-f))
    assert tf.equal_up_to_trivial_units(tneg, 1e-12)


def test_homotopy_identity_failure_reported(rng):
    C = random_complex(rng, Z5, 3)
    f = ChainMap.identity(C)
    g = -f
    with pytest.raises(HomotopyError):
        homotopy_equal_torsion(ChainHomotopy(f, g, _zero_phi(f)))


@given(st.integers(0, 100_000), st.sampled_from([2, 5, 7, 12]))
def test_homotopy_property(seed, n):
    rng = random.Random(seed)
    C = random_complex(rng, GroupSpec.cyclic(n), 4)
    h = random_homotopy(rng, random_isomorphism(rng, C))
    ev = homotopy_equal_torsion(h)
    assert ev.check()


# --- unit triangular ---------------------------------------------------------------------------


def test_unit_triangular_identity():
    C = free(Z5, ["x", "y", "z"], levels=[0, 1, 2])
    script = unit_triangular_certificate(ChainMap.identity(C))
    assert len(script.moves) == 2 * 3
    assert verify_trivial(script)


def test_unit_triangular_two_by_two():
    C = free(Z5, ["x", "y"], levels=[0, 1])
    D = free(Z5, ["x'", "y'"], levels=[0, 1])
    one = RingElement.one(Z5)
    f = scalar_map(Z5, C, D, {("x", "x'"): one, ("y", "x'"): ring("3 - t^2", 5), ("y", "y'"): one})
    assert verify_trivial(unit_triangular_certificate(f))


def test_unit_triangular_diagonal_units_z7(rng):
    C = free(Z7, ["a", "b", "c"], levels=[0, 1, 2])
    D = free(Z7, ["a'", "b'", "c'"], levels=[0, 1, 2])
    ents = {("a", "a'"): ring("t", 7), ("b", "b'"): ring("-t^2", 7), ("c", "c'"): ring("1", 7)}
    for x, y in (("b", "a'"), ("c", "a'"), ("c", "b'")):
        ents[(x, y)] = ring(f"{rng.randint(-3, 3)} + t^{rng.randint(1, 6)}", 7)
    f = scalar_map(Z7, C, D, ents)
    assert verify_trivial(unit_triangular_certificate(f))


def test_unit_triangular_rejects_non_unit():
    C = free(Z5, ["x"], levels=[0])
    D = free(Z5, ["y"], levels=[0])
    f = scalar_map(Z5, C, D, {("x", "y"): ring("2", 5)})
    with pytest.raises(CertificateError, match="not a trivial unit"):
        unit_triangular_certificate(f)


@given(st.integers(0, 100_000), st.sampled_from([GroupSpec.trivial(), GroupSpec.cyclic(3), GroupSpec.cyclic(7), s3()]))
def test_unit_triangular_property(seed, G):
    f = random_unit_triangular(random.Random(seed), G)
    assert f.check()
    assert verify_trivial(unit_triangular_certificate(f))


# --- composition ----------------------------------------------------------------------------


def test_composition_with_identity(rng):
    C = random_complex(rng, Z5, 3)
    f = random_isomorphism(rng, C)
    rep = torsion_of_composition(f, ChainMap.identity(C))
    assert rep.composite.logabs_close(rep.first, 1e-12)


def test_composition_of_unit_triangular(rng):
    f = random_unit_triangular(rng, Z5)
    g = ChainMap.identity(f.source)
    rep = torsion_of_composition(f, g)
    assert rep.composite.max_logabs() < 1e-9 and rep.first.max_logabs() < 1e-9 and rep.second.max_logabs() < 1e-9


def test_composition_not_composable(rng):
    C = random_complex(rng, Z5, 3)
    f = random_isomorphism(rng, C)
    with pytest.raises(ValueError):
        torsion_of_composition(f, f)


@given(st.integers(0, 100_000))
def test_composition_additive_z5(seed):
    rng = random.Random(seed)
    B = random_complex(rng, Z5, 4)
    g = random_isomorphism(rng, B)
    f = random_isomorphism(rng, g.target)
    assert torsion_of_composition(f, g).additive


@given(st.integers(0, 100_000), st.sampled_from([5, 7, 12]))
def test_cone_duality(seed, n):
    rng = random.Random(seed)
    C = random_complex(rng, GroupSpec.cyclic(n), 4)
    f = random_isomorphism(rng, C)
    inv = ChainMap(f.target, f.source, ring_matrix_inverse(f.f))
    assert inv.check()
    a, b = torsion_vector(mapping_cone(f)), torsion_vector(mapping_cone(inv))
    assert all(abs(x + y) < 1e-9 for x, y in zip(a.logabs, b.logabs))


@given(st.integers(0, 100_000), st.sampled_from([2, 3, 5, 7, 12]))
def test_decisions_are_sound(seed, n):
    rng = random.Random(seed)
    c = random_acyclic_complex(rng, GroupSpec.cyclic(n), max_gens=6)
    dec = is_trivial_torsion(c)
    if dec.verdict == "trivial":
        assert dec.script.initial == c and run(dec.script).is_empty
    elif dec.verdict == "nontrivial":
        assert abs(torsion_logabs(c, dec.character) - dec.logabs) < 1e-9
