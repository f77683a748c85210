from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from interchange_gap.exactla import (
    LinearAlgebraError,
    RationalMatrix,
    char_poly,
    cluster_sorted,
    det,
    in_span,
    inverse,
    nullspace,
    poly_eval,
    rank,
    solve,
    span_equal,
    sym_eig,
)
from interchange_gap.graphcore import WeightedGraph, laplacian
from interchange_gap.processes import exclusion_generator

from strategies import rational_matrices


def to_sympy(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])


# ---------------------------------------------------------------- oracles


def test_nullspace_examples():
    assert nullspace(RationalMatrix.identity(3)) == []
    z = nullspace(RationalMatrix.zeros(2, 2))
    assert span_equal(z, [(1, 0), (0, 1)], 2)


def test_nullspace_of_rank_one_product():
    c1, c2 = F(1), F(1)
    m = RationalMatrix([[c1 * (c1 - c2), -c1 * (c1 + 2 * c2)], [-(c1 + c2) * (c1 - c2), (c1 + c2) * (c1 + 2 * c2)]])
    ker = nullspace(m)
    assert len(ker) == 1
    assert span_equal(ker, [(3, 0)], 2)


def test_char_poly_examples():
    assert char_poly(RationalMatrix([[1, 0], [0, 2]])) == [1, -3, 2]
    tri = laplacian(WeightedGraph(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1}))
    assert char_poly(tri) == [1, -6, 9, 0]  # lambda (lambda - 3)^2


def test_char_poly_size_guard():
    with pytest.raises(LinearAlgebraError):
        char_poly(RationalMatrix.identity(13))


def test_sym_eig_examples():
    assert np.allclose(sym_eig(RationalMatrix([[0, 1], [1, 0]])).eigenvalues, [-1, 1])
    c4 = WeightedGraph(4, {(1, 3): 1, (2, 3): 1, (1, 4): 1, (2, 4): 1})
    assert np.allclose(sym_eig(laplacian(c4)).eigenvalues, [0, 2, 2, 4], atol=1e-12)
    a2 = exclusion_generator(c4, 2).matrix
    spec = sym_eig(a2)
    assert np.allclose(spec.eigenvalues, [0, 2, 2, 2, 4, 6], atol=1e-12)
    assert [m for _, m in spec.cluster_values()] == [1, 3, 1, 1]


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(LinearAlgebraError):
        sym_eig(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_cluster_sorted_groups_close_values():
    assert cluster_sorted([0.0, 1.0, 1.0 + 1e-12, 2.0], 1e-9) == ((0, 1), (1, 3), (3, 4))


def test_json_serialization():
    m = RationalMatrix([[F(1, 2), -3], [0, F(-7, 4)]])
    assert m.to_json() == [["1/2", "-3"], ["0", "-7/4"]]


# ----------------------------------------------------- properties vs sympy


@given(rational_matrices())
def test_rank_matches_sympy(rows):
    assert rank(RationalMatrix(rows)) == to_sympy(rows).rank()


@given(rational_matrices())
def test_nullspace_is_exact_kernel(rows):
    m = RationalMatrix(rows)
    ker = nullspace(m)
    assert len(ker) == m.cols - to_sympy(rows).rank()
    for v in ker:
        assert all(x == 0 for x in m @ v)
    if ker:
        assert rank(ker) == len(ker)


@given(st.integers(1, 5).flatmap(lambda n: rational_matrices(rows=n, cols=n)))
def test_det_and_char_poly_match_sympy(rows):
    m = RationalMatrix(rows)
    s = to_sympy(rows)
    assert det(m) == F(str(s.det()))
    lam = sympy.Symbol("x")
    expected = [F(str(c)) for c in sympy.Poly(s.charpoly(lam).as_expr(), lam).all_coeffs()]
    assert char_poly(m) == expected
    assert poly_eval(char_poly(m), 0) == (-1) ** m.rows * det(m)


@given(st.integers(1, 5).flatmap(lambda n: rational_matrices(rows=n, cols=n)))
def test_inverse_and_solve(rows):
    m = RationalMatrix(rows)
    if det(m) == 0:
        with pytest.raises(LinearAlgebraError):
            inverse(m)
        return
    assert m @ inverse(m) == RationalMatrix.identity(m.rows)
    b = tuple(F(i + 1) for i in range(m.rows))
    assert tuple(m @ solve(m, b)) == b


@given(rational_matrices(max_dim=4), rational_matrices(max_dim=4))
def test_span_equal_symmetric(a, b):
    cols = len(a[0])
    b = [r[:cols] + [F(0)] * (cols - len(r)) for r in b]
    assert span_equal(a, b, cols) == span_equal(b, a, cols)
    assert span_equal(a, a + b, cols) == all(in_span(v, a) for v in b)


@given(st.integers(1, 7).flatmap(lambda n: rational_matrices(rows=n, cols=n)))
def test_sym_eig_reconstructs(rows):
    m = RationalMatrix(rows)
    sym = (m + m.transpose()).to_numpy()
    spec = sym_eig(sym)
    q, lam = spec.eigenvectors, spec.eigenvalues
    assert np.all(np.diff(lam) >= -1e-12)
    assert np.linalg.norm(q @ np.diag(lam) @ q.T - sym) <= 1e-8 * max(1.0, np.linalg.norm(sym))
    assert np.allclose(q.T @ q, np.eye(len(lam)), atol=1e-10)


@given(st.lists(st.integers(-6, 6), min_size=5, max_size=5), st.integers(0, 10**6))
def test_sym_eig_matches_rational_spectrum(diag, seed):
    """Q D Q^t with a rational orthogonal Q (Cayley transform) has known rational eigenvalues."""
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(5, 5))
    skew = RationalMatrix((a - a.T).tolist())
    eye = RationalMatrix.identity(5)
    q = (eye - skew) @ inverse(eye + skew)
    m = q @ RationalMatrix([[diag[i] if i == j else 0 for j in range(5)] for i in range(5)]) @ q.transpose()
    roots = sorted(diag)
    assert char_poly(m)[0] == 1
    assert np.allclose(sym_eig(m).eigenvalues, roots, atol=1e-9)
