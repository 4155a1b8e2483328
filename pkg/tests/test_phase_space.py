import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from signhbar.phase_space import (
    DimensionMismatchError,
    Monomial,
    PhasePolynomial,
    bracket_bilinearity_residual,
    jacobi_residual,
    poisson_bracket,
    random_polynomial,
)

q, p = PhasePolynomial.q(), PhasePolynomial.p()


def to_sympy(f: PhasePolynomial):
    d = f.dimension
    qs = sympy.symbols(f"q1:{d + 1}")
    ps = sympy.symbols(f"p1:{d + 1}")
    syms = list(qs) + list(ps)
    expr = sympy.Integer(0)
    for exps, coef in f.terms.items():
        term = sympy.Rational(coef.numerator, coef.denominator)
        for s, k in zip(syms, exps):
            term *= s**k
        expr += term
    return expr, qs, ps


def sympy_bracket(f, g):
    """Independent oracle: differentiate symbolically."""
    ef, qs, ps = to_sympy(f)
    eg, _, _ = to_sympy(g)
    return sympy.expand(sum(sympy.diff(ef, a) * sympy.diff(eg, b) - sympy.diff(eg, a) * sympy.diff(ef, b) for a, b in zip(qs, ps)))


polys = st.builds(
    lambda seed, d: random_polynomial(random.Random(seed), d, 3),
    st.integers(0, 10**6),
    st.integers(1, 2),
)


def test_canonical_pair():
    assert poisson_bracket(q, p) == PhasePolynomial.constant(1, 1)
    assert poisson_bracket(p, q) == PhasePolynomial.constant(1, -1)


def test_bracket_example_against_sympy():
    got = poisson_bracket(q * q * p, p * p)
    assert got == q * p * p * 4
    oracle = sympy_bracket(q * q * p, p * p)
    assert sympy.expand(to_sympy(got)[0] - oracle) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_bracket_matches_sympy_oracle(seed, d):
    rng = random.Random(seed)
    f, g = random_polynomial(rng, d), random_polynomial(rng, d)
    got = to_sympy(poisson_bracket(f, g))[0]
    assert sympy.expand(got - sympy_bracket(f, g)) == 0


@pytest.mark.parametrize("d", [1, 2, 3])
def test_canonical_relations(d):
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            delta = 1 if i == j else 0
            assert poisson_bracket(PhasePolynomial.q(i, d), PhasePolynomial.p(j, d)) == delta
            assert poisson_bracket(PhasePolynomial.q(i, d), PhasePolynomial.q(j, d)).is_zero()
            assert poisson_bracket(PhasePolynomial.p(i, d), PhasePolynomial.p(j, d)).is_zero()


@given(polys, polys)
@settings(deadline=None)
def test_antisymmetry(f, g):
    if f.dimension != g.dimension:
        return
    assert (poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero()


def test_jacobi_examples():
    assert jacobi_residual(q, p, q * p).is_zero()
    assert jacobi_residual(q * q, p * p, q * p).is_zero()


def test_jacobi_seeded_random():
    rng = random.Random(42)
    for trial in range(50):
        d = 1 + trial % 2
        f, g, h = (random_polynomial(rng, d, 3) for _ in range(3))
        assert jacobi_residual(f, g, h).is_zero()


def test_bilinearity():
    assert bracket_bilinearity_residual(1, q, 1, p, q * p).is_zero()
    rng = random.Random(7)
    for _ in range(20):
        f1, f2, g = (random_polynomial(rng, 1, 2) for _ in range(3))
        assert bracket_bilinearity_residual(Fraction(3, 2), f1, -7, f2, g).is_zero()
        assert bracket_bilinearity_residual(0, f1, 0, f2, g).is_zero()


def test_constants_have_zero_bracket():
    rng = random.Random(3)
    g = random_polynomial(rng, 2)
    assert poisson_bracket(PhasePolynomial.constant(2, Fraction(5, 3)), g).is_zero()


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        poisson_bracket(q, PhasePolynomial.p(1, 2))
    with pytest.raises(DimensionMismatchError):
        jacobi_residual(q, p, PhasePolynomial.q(1, 2))


def test_normalization_drops_zero_terms():
    f = q * p - p * q
    assert f.is_zero() and f.terms == {}
    assert PhasePolynomial(1, {(1, 0): Fraction(0)}).is_zero()


def test_monomial_invariants():
    with pytest.raises(ValueError):
        Monomial((1, 2, 3), Fraction(1))
    with pytest.raises(ValueError):
        PhasePolynomial(2, {(1, 0): 1})


def test_render_order():
    f = q * p * p * 4 + q - 3
    assert f.render() == "-3 + 1*q^1 + 4*q^1*p^2"
    assert PhasePolynomial.zero(1).render() == "0"
    g = PhasePolynomial.q(1, 2) * PhasePolynomial.p(2, 2)
    assert g.render() == "1*q1^1*p2^1"
