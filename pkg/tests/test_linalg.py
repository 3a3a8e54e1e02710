from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from sullivan.linalg import (Matrix, Subspace, kernel_basis, image_basis, left_null_certificate,
                             rank, rref, solve_affine, subquotient_basis)

entries = st.integers(-3, 3).map(Fraction) | st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(1, max_dim))
    return [[draw(entries) for _ in range(c)] for _ in range(r)], c


@given(matrices())
def test_rank_matches_sympy(mc):
    data, c = mc
    m = Matrix.from_dense(data, c)
    expect = sympy.Matrix(len(data), c, [sympy.Rational(x.numerator, x.denominator)
                                         for row in data for x in row]).rank() if data else 0
    assert rank(m) == expect


@given(matrices())
def test_rank_nullity(mc):
    data, c = mc
    m = Matrix.from_dense(data, c)
    k = kernel_basis(m)
    assert rank(m) + k.dim == c
    for v in k.basis:
        assert not m.mul_vec(v)


@given(matrices())
def test_rref_is_reduced(mc):
    data, c = mc
    r, pivots, rk = rref(Matrix.from_dense(data, c))
    assert rk == len(pivots)
    for i, p in enumerate(pivots):
        assert r[i, p] == 1
        for j in range(r.nrows):
            if j != i:
                assert r[j, p] == 0


@given(matrices(), st.lists(entries, min_size=5, max_size=5))
def test_solve_affine_or_certificate(mc, b):
    data, c = mc
    m = Matrix.from_dense(data, c)
    b = {i: x for i, x in enumerate(b[:m.nrows]) if x}
    sol = solve_affine(m, b)
    if sol is not None:
        x, _ = sol
        assert m.mul_vec(x) == b
    else:
        y = left_null_certificate(m, b)
        assert y is not None
        assert not m.transpose().mul_vec(y)
        assert sum(y.get(i, 0) * v for i, v in b.items()) == 1


def test_image_of_identity_is_full():
    assert image_basis(Matrix.identity(3)).dim == 3


def test_subspace_intersection_and_sum():
    a = Subspace(3, [{0: 1}, {1: 1}])
    b = Subspace(3, [{1: 1}, {2: 1}])
    assert a.intersection(b) == Subspace(3, [{1: 1}])
    assert (a + b).dim == 3
    assert Subspace(3, [{1: 2}]).issubset(a)


def test_subquotient():
    z = Subspace(3, [{0: 1}, {1: 1}])
    b = Subspace(3, [{0: 1, 1: 1}])
    dim, reps = subquotient_basis(z, b)
    assert dim == len(reps) == 1
    assert not b.contains(reps[0])


def test_matrix_shape_checks():
    with pytest.raises(Exception):
        Matrix.from_dense([[1, 2], [3]], 2)


@given(matrices())
def test_rref_idempotent(mc):
    data, c = mc
    r, _, _ = rref(Matrix.from_dense(data, c))
    assert rref(r)[0] == r


def prefix_sums(vs, c):
    """A unitriangular change of basis: v'_k = v_0 + ... + v_k."""
    out, acc = [], {}
    for v in vs:
        acc = {j: acc.get(j, 0) + v.get(j, 0) for j in range(c)}
        out.append({j: x for j, x in acc.items() if x})
    return out


@given(matrices(max_dim=4), st.data())
def test_subquotient_basis_independent(mc, data):
    # cycles = kernel of m, boundaries = span of some of its basis vectors
    data_m, c = mc
    z = kernel_basis(Matrix.from_dense(data_m, c))
    picks = [v for v in z.basis if data.draw(st.booleans())]
    b = Subspace(c, picks)
    dim1, reps1 = subquotient_basis(z, b)
    z2 = Subspace(c, prefix_sums(list(z.basis)[::-1], c))
    b2 = Subspace(c, prefix_sums(picks, c))
    dim2, reps2 = subquotient_basis(z2, b2)
    assert dim1 == dim2 == z.dim - b.dim
    assert (b + Subspace(c, reps1)) == (b + Subspace(c, reps2)) == z
