import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pseudomoments.exactnum import QuadExt
from pseudomoments.linalg_exact import (
    SymMatrix,
    char_poly,
    congruence,
    det_exact,
    identity,
    is_psd,
    kernel_basis,
    matvec,
    rank_exact,
)
from pseudomoments.moments import moment_matrix
from pseudomoments.symmetry import OrbitParams, orbit_embed

from oracles import det_gauss, psd_by_minors, random_psd_mix, random_symmetric, rank_gauss

small = st.integers(-5, 5)


@st.composite
def sym_matrices(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = draw(small)
    return a


def test_symmatrix_rejects_asymmetric():
    with pytest.raises(ValueError):
        SymMatrix([[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        SymMatrix([[1, 2]])


def test_rank_examples():
    assert rank_exact([[0] * 4 for _ in range(4)]) == 0
    assert rank_exact(identity(5)) == 5
    y = orbit_embed(OrbitParams("motzkin", (3, 16, 2, 198, 2, 1)))
    assert rank_exact(moment_matrix(y).matrix) == 7


def test_kernel_examples():
    assert kernel_basis([[1, 3, 3], [3, 16, 2], [3, 2, 16]]) == [[-6, 1, 1]]
    assert kernel_basis(identity(3)) == []
    (v,) = kernel_basis([[1, 1], [1, 1]])
    assert v in ([1, -1], [-1, 1])


def test_char_poly_examples():
    assert char_poly([[8, 6, 6], [6, 6, 3], [6, 3, 6]]).coeffs == (1, -20, 51, 0)
    assert char_poly([[9, 6, 6], [6, 6, 2], [6, 2, 6]]).coeffs == (1, -21, 68, 0)
    assert char_poly(identity(2)).coeffs == (1, -2, 1)
    assert str(char_poly([[8, 6, 6], [6, 6, 3], [6, 3, 6]])) == "λ^3 - 20λ^2 + 51λ"


def test_char_poly_rational_entries():
    cp = char_poly([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 3), Fraction(1, 4)]])
    assert cp.coeffs == (1, Fraction(-3, 4), Fraction(1, 72))


def test_psd_examples():
    assert is_psd([[2, 2], [2, 3]])
    assert not is_psd([[0, 1], [1, 0]])
    assert is_psd(moment_matrix(orbit_embed(OrbitParams("robinson", (1, 1, 1)))).matrix)


def test_psd_over_quadratic_extension():
    r2 = QuadExt(0, 1)
    # eigenvalues 2 +- sqrt2 (>0) and 0
    assert is_psd([[2, r2], [r2, 2]])
    assert is_psd([[2, 2 * r2], [2 * r2, 4]])
    assert not is_psd([[1, r2], [r2, 1]])
    assert rank_exact([[2, 2 * r2], [2 * r2, 4]]) == 1


def test_congruence():
    A = SymMatrix([[2, 1], [1, 3]])
    assert congruence(A, identity(2)) == A
    with pytest.raises(ValueError):
        congruence(A, [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        congruence(A, [[1, 0, 0], [0, 1, 0]])


@given(sym_matrices())
def test_rank_plus_nullity(a):
    ker = kernel_basis(a)
    assert rank_exact(a) + len(ker) == len(a)
    for v in ker:
        assert all(x == 0 for x in matvec(a, v))
    assert rank_exact(a) == rank_gauss(a)


@given(sym_matrices())
def test_char_poly_identities(a):
    cp = char_poly(a)
    n = len(a)
    assert cp.coeffs[0] == 1 and cp.degree == n
    assert cp(0) == (-1) ** n * det_gauss(a)
    assert cp.coeffs[1] == -sum(a[i][i] for i in range(n))
    assert det_exact(a) == det_gauss(a)


@given(sym_matrices(max_n=4), st.data())
@settings(max_examples=60)
def test_congruence_invariance(a, data):
    n = len(a)
    T = [[data.draw(small) for _ in range(n)] for _ in range(n)]
    if det_gauss(T) == 0:
        T = identity(n)
    C = congruence(a, T)
    assert is_psd(C) == is_psd(a)
    assert rank_exact(C) == rank_exact(a)


def test_psd_agrees_with_minor_oracle_sample():
    rng = random.Random(7)
    for _ in range(150):
        a = random_psd_mix(rng, rng.randint(1, 6))
        assert is_psd(a) == psd_by_minors(a)


def test_rank_of_rectangular_rational():
    rows = [[Fraction(1, 2), 1, 0], [1, 2, 0], [0, 0, Fraction(1, 3)], [0, 0, 0]]
    assert rank_exact(rows) == 2
    rng = random.Random(3)
    for _ in range(50):
        m = [[Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(5)] for _ in range(rng.randint(1, 6))]
        assert rank_exact(m) == rank_gauss(m)


def test_det_rational():
    assert det_exact([[Fraction(1, 2), 0], [0, Fraction(2, 3)]]) == Fraction(1, 3)
    rng = random.Random(5)
    for _ in range(30):
        m = random_symmetric(rng, 4)
        m = [[Fraction(x, 3) for x in r] for r in m]
        assert det_exact(m) == det_gauss(m)
