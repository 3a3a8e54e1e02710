import pytest
import sympy
from hypothesis import given, strategies as st

from sullivan.cdga import Morphism, identity, linear_part, make_cdga, make_morphism, tensor, transport
from sullivan.errors import ValidationError
from strategies import elements, minimal_cdgas, projections


def sphere(n, name="w"):
    if n % 2:
        return make_cdga([(f"{name}{n}", n)], {})
    return make_cdga([(f"{name}{n}", n), (f"{name}{2 * n - 1}", 2 * n - 1)],
                     lambda alg: {f"{name}{2 * n - 1}": alg.gen(f"{name}{n}") ** 2})


def sympy_cohomology_dim(A, k):
    def mat(j):
        rows = len(A.algebra.basis(j + 1))
        cols = len(A.algebra.basis(j))
        m = sympy.zeros(rows, cols)
        for c, mono in enumerate(A.algebra.basis(j)):
            img = A.d(A.algebra.monomial(mono))
            for r, x in A.algebra.to_vector(img, j + 1).items():
                m[r, c] = sympy.Rational(x.numerator, x.denominator)
        return m
    cols = len(A.algebra.basis(k))
    rk = mat(k).rank() if cols and len(A.algebra.basis(k + 1)) else 0
    prev = mat(k - 1).rank() if k > 0 and len(A.algebra.basis(k - 1)) and cols else 0
    return cols - rk - prev


@given(minimal_cdgas(), st.data())
def test_d_squared_zero(A, data):
    p = data.draw(elements(A))
    assert A.d(A.d(p)).is_zero()


@given(minimal_cdgas(), st.data())
def test_leibniz(A, data):
    p = data.draw(elements(A, data.draw(st.integers(0, 8))))
    q = data.draw(elements(A, data.draw(st.integers(0, 8))))
    if p.is_zero():
        return
    sign = -1 if p.degree() % 2 else 1
    assert A.d(p * q) == A.d(p) * q + (p * A.d(q)).scale(sign)


@given(minimal_cdgas(max_gens=3, max_degree=5))
def test_cohomology_matches_sympy(A):
    for k in range(0, 10):
        assert A.cohomology_dim(k) == sympy_cohomology_dim(A, k)


@given(minimal_cdgas(max_gens=2, max_degree=5, prefix="a"),
       minimal_cdgas(max_gens=2, max_degree=5, prefix="b"))
def test_kunneth(A, B):
    T = tensor(A, B)
    for k in range(0, 11):
        expect = sum(A.cohomology_dim(i) * B.cohomology_dim(k - i) for i in range(k + 1))
        assert T.cohomology_dim(k) == expect


def test_sphere_cohomology():
    S4 = sphere(4)
    assert [S4.cohomology_dim(k) for k in range(10)] == [1, 0, 0, 0, 1, 0, 0, 0, 0, 0]
    S3 = sphere(3)
    assert [S3.cohomology_dim(k) for k in range(7)] == [1, 0, 0, 1, 0, 0, 0]


def test_cp2_cohomology():
    A = make_cdga([("v2", 2), ("v5", 5)], lambda alg: {"v5": alg.gen("v2") ** 3})
    assert [A.cohomology_dim(k) for k in range(8)] == [1, 0, 1, 0, 1, 0, 0, 0]
    assert A.is_minimal()


def test_invalid_differential_degree():
    with pytest.raises(ValidationError) as e:
        make_cdga([("a", 2), ("b", 4)], lambda alg: {"b": alg.gen("a") ** 2})
    assert e.value.details["expected"] == 5


def test_d_squared_violation():
    with pytest.raises(ValidationError) as e:
        make_cdga([("a", 2), ("b", 3), ("c", 4)],
                  lambda alg: {"b": alg.gen("a") ** 2, "c": alg.gen("a") * alg.gen("b")})
    assert e.value.details["generator"] == "c"
    assert e.value.details["residual"] == "a^3"


def test_morphism_validation():
    S4 = sphere(4)
    CP3 = make_cdga([("v2", 2), ("w7", 7)], lambda alg: {"w7": alg.gen("v2") ** 4})
    f = make_morphism(S4, CP3, {"w4": CP3.gen("v2") ** 2, "w7": CP3.gen("w7")})
    assert f.is_valid()
    with pytest.raises(ValidationError):
        make_morphism(S4, CP3, {"w4": CP3.gen("v2") ** 2, "w7": CP3.algebra.zero()})


def test_identity_linear_part():
    S4 = sphere(4)
    lp = linear_part(identity(S4))
    assert lp is not None


def permuted(A, order):
    gens = [A.generators[i] for i in order]
    return make_cdga([(g.name, g.degree) for g in gens],
                     lambda alg: {g.name: transport(A.d_gen(g.name), alg) for g in gens})


@given(minimal_cdgas(max_gens=4, max_degree=5), st.data())
def test_cohomology_independent_of_order(A, data):
    order = data.draw(st.permutations(range(len(A.generators))))
    B = permuted(A, order)
    assert [A.cohomology_dim(k) for k in range(11)] == [B.cohomology_dim(k) for k in range(11)]


def brute_commutes(phi, top):
    A = phi.source
    for k in range(top + 1):
        for m in A.algebra.basis(k):
            p = A.algebra.monomial(m)
            if phi(A.d(p)) != phi.target.d(phi(p)):
                return False
    return True


@given(projections(), st.data())
def test_morphism_validation_matches_brute_force(p, data):
    Y, X = p.source, p.target
    top = max(g.degree for g in Y.generators) * 2
    assert p.is_valid() and brute_commutes(p, top)
    # perturb one generator's image by a random element of the right degree
    g = data.draw(st.sampled_from(Y.generators))
    basis = X.algebra.basis(g.degree)
    if not basis:
        return
    extra = X.algebra.from_vector({data.draw(st.integers(0, len(basis) - 1)): 1}, g.degree)
    vals = dict(p.values)
    vals[g.name] = vals[g.name] + extra
    q = Morphism(Y, X, vals)
    assert q.is_valid() == brute_commutes(q, top)
