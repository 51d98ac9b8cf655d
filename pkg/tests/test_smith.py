from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from torsionlab.smith import determinant, integer_inverse, invariant_factors, matmul, smith_normal_form


def _check(m):
    snf = smith_normal_form(m)
    assert matmul(matmul(snf.U, m), snf.V) == snf.D
    assert determinant(snf.U) in (1, -1)
    assert determinant(snf.V) in (1, -1)
    d = [x for x in snf.diagonal if x]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    return snf


def test_textbook_example():
    assert _check([[2, 0], [0, 3]]).diagonal == (1, 6)


def test_identity_and_zero():
    assert _check([[1, 0], [0, 1]]).diagonal == (1, 1)
    assert _check([[0, 0], [0, 0]]).diagonal == (0, 0)


def test_inverse():
    m = [[2, 1], [1, 1]]
    assert matmul(m, integer_inverse(m)) == [[1, 0], [0, 1]]
    assert integer_inverse([[2, 0], [0, 1]]) is None


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_against_sympy(r, c, data):
    m = [[data.draw(st.integers(-9, 9)) for _ in range(c)] for _ in range(r)]
    snf = _check(m)
    ref = sympy_snf(Matrix(m), domain=ZZ)
    ours = sorted(abs(x) for x in snf.diagonal if x)
    theirs = sorted(abs(ref[i, i]) for i in range(min(r, c)) if ref[i, i] != 0)
    assert ours == theirs
    assert tuple(ours) == tuple(sorted(invariant_factors(m)))


@given(st.integers(1, 4), st.data())
def test_determinant_against_sympy(n, data):
    m = [[data.draw(st.integers(-20, 20)) for _ in range(n)] for _ in range(n)]
    assert determinant(m) == Matrix(m).det()
