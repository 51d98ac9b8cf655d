import random

from hypothesis import given, strategies as st
from sympy import Matrix

from torsionlab.chain import (
    BasedComplex,
    ChainMap,
    Generator,
    graded_piece,
    integral_homology,
    is_acyclic,
    shift,
    two_term,
    underlying_integer_matrix,
    validate,
)
from torsionlab.group_algebra import GroupSpec, RingElement, RingMatrix
from torsionlab.randomgen import random_acyclic_complex, random_complex, random_homotopy, random_isomorphism

from conftest import ring, s3

Z5 = GroupSpec.cyclic(5)


def expansion(G=Z5):
    return BasedComplex(G, [Generator("a", 0), Generator("b", 1)], {("a", "b"): RingElement.one(G)})


def test_validate_examples():
    assert validate(BasedComplex.empty(Z5))
    assert validate(expansion())
    one = RingElement.one(Z5)
    bad = BasedComplex(
        Z5, [Generator("a", 0), Generator("b", 1), Generator("c", 2)], {("a", "b"): one, ("b", "c"): one}
    )
    rep = validate(bad)
    assert not rep and "d^2" in rep.message


def test_validate_degree_and_filtration():
    one = RingElement.one(Z5)
    wrong_degree = BasedComplex(Z5, [Generator("a", 0), Generator("b", 2)], {("a", "b"): one})
    assert "deg" in validate(wrong_degree).message
    partial = BasedComplex(Z5, [Generator("a", 0, 1), Generator("b", 1)], {("a", "b"): one})
    assert "filtration" in validate(partial).message
    upward = BasedComplex(Z5, [Generator("a", 0, 0), Generator("b", 1, 1)], {("a", "b"): one})
    assert "filtration" in validate(upward).message
    downward = BasedComplex(Z5, [Generator("a", 0, 1), Generator("b", 1, 0)], {("a", "b"): one})
    assert validate(downward)


def test_underlying_matrix_examples():
    G = GroupSpec.cyclic(2)
    for coeff, block in (("t", [[0, 1], [1, 0]]), ("1", [[1, 0], [0, 1]]), ("1 + t", [[1, 1], [1, 1]])):
        c = two_term(RingMatrix(G, ["a"], ["b"], {("a", "b"): ring(coeff, 2)}))
        assert underlying_integer_matrix(c, -1) == block


def test_acyclicity_examples():
    assert is_acyclic(expansion())
    assert not is_acyclic(BasedComplex(Z5, [Generator("a", 0)]))
    c = two_term(RingMatrix(Z5, ["a"], ["b"], {("a", "b"): ring("t - 1", 5)}))
    assert not is_acyclic(c)
    assert integral_homology(c) == {-1: (1, ()), 0: (1, ())}


def test_homology_torsion():
    c = two_term(RingMatrix(GroupSpec.trivial(), ["a"], ["b"], {("a", "b"): RingElement.scalar(GroupSpec.trivial(), 3)}))
    assert integral_homology(c) == {0: (0, (3,))}


def test_shift_examples():
    c = expansion()
    assert shift(shift(c, 1), -1) == c
    assert shift(BasedComplex.empty(Z5), 3).is_empty
    s = shift(c, 1)
    assert s.degree("a") == 1 and s.degree("b") == 2
    assert s.d[("a", "b")] == -RingElement.one(Z5)


def test_equality_ignores_order():
    c = expansion()
    flipped = BasedComplex(Z5, [Generator("b", 1), Generator("a", 0)], {("a", "b"): RingElement.one(Z5)})
    assert c == flipped


def test_graded_piece_drops_cross_terms():
    one = RingElement.one(Z5)
    c = BasedComplex(
        Z5,
        [Generator("a", 0, 1), Generator("b", 1, 1), Generator("x", 0, 0), Generator("y", 1, 0)],
        {("a", "b"): one, ("a", "y"): one, ("x", "y"): one},
    )
    g = graded_piece(c, 1)
    assert set(g.labels) == {"a", "b"} and not g.is_filtered
    assert g.d.entries == {("a", "b"): one}


def test_chain_map_and_homotopy(rng):
    C = random_complex(rng, Z5, 4)
    f = random_isomorphism(rng, C)
    assert f.check()
    h = random_homotopy(rng, f)
    assert h.check()
    assert h.g.check()
    assert (-f).check()


def test_chain_map_rejects_noncommuting():
    G = Z5
    src = expansion(G)
    tgt = expansion(G)
    f = RingMatrix(G, src.labels, tgt.labels, {("a", "a"): RingElement.one(G)})
    rep = ChainMap(src, tgt, f).check()
    assert not rep


def test_compose():
    c = expansion()
    i = ChainMap.identity(c)
    assert i.compose(i).f == i.f


# --- oracle comparison -----------------------------------------------------------


def _oracle_acyclic(c):
    """Brute force over Z: ranks and elementary divisors from sympy."""
    from sympy.matrices.normalforms import invariant_factors

    n = c.group.order
    ranks, tors = {}, {}
    for k in c.degrees():
        if c.in_degree(k + 1):
            M = Matrix(underlying_integer_matrix(c, k))
            ranks[k] = M.rank()
            tors[k + 1] = [x for x in invariant_factors(M) if abs(x) > 1] if M.rank() else []
    for k in c.degrees():
        dim = n * len(c.in_degree(k))
        if dim - ranks.get(k, 0) - ranks.get(k - 1, 0) or tors.get(k):
            return False
    return True


@given(st.integers(0, 10_000), st.sampled_from([GroupSpec.trivial(), GroupSpec.cyclic(2), GroupSpec.cyclic(3), GroupSpec.cyclic(5), GroupSpec.cyclic(6), s3()]))
def test_is_acyclic_matches_oracle(seed, G):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        c = random_acyclic_complex(rng, G, max_gens=6)
    else:
        c = random_complex(rng, G, 6)
    assert validate(c)
    assert is_acyclic(c) == _oracle_acyclic(c)


@given(st.integers(0, 10_000))
def test_validate_idempotent(seed):
    rng = random.Random(seed)
    c = random_acyclic_complex(rng, GroupSpec.cyclic(7))
    assert validate(c) == validate(c)
    assert validate(c).ok
