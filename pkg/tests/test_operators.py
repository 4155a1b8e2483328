import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from signhbar.operators import (
    DimensionError,
    GeneralOperator,
    NotAntiunitaryError,
    ParityError,
    adjoint,
    antiunitarity_residual,
    apply,
    commutator,
    complex_conjugation,
    compose,
    conjugate_by,
    distance,
    identity,
    inner_product,
    random_antiunitary,
    random_hermitian,
    random_state,
)
from signhbar.quantize import ladder

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
K2 = complex_conjugation(2)
THETA = GeneralOperator(SY, True)

seeds = st.integers(0, 2**32 - 1)


def test_apply_examples():
    np.testing.assert_array_equal(apply(K2, [1, 1j]), [1, -1j])
    # sigma_y conj(v) for v = (1, 0): first row (0, -i) . (1, 0) = 0, second row (i, 0) . (1, 0) = i
    np.testing.assert_array_equal(apply(THETA, [1, 0]), [0, 1j])
    v = np.array([0.3 + 2j, -1j])
    np.testing.assert_array_equal(apply(identity(2), v), v)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(K2, [1, 2, 3])


def test_inner_product_examples():
    assert inner_product([1, 0], [0, 1]) == 0
    assert inner_product([1j, 0], [1, 0]) == -1j


@given(seeds)
def test_inner_product_conjugate_symmetry(seed):
    rng = np.random.default_rng(seed)
    phi, psi = random_state(5, rng), random_state(5, rng)
    assert abs(inner_product(phi, psi) - np.conj(inner_product(psi, phi))) < 1e-12


def test_adjoint_examples():
    assert distance(adjoint(K2), K2) == 0 and adjoint(K2).antilinear
    a = adjoint(THETA)
    assert a.antilinear
    np.testing.assert_array_equal(a.matrix, -SY)
    H = random_hermitian(4, np.random.default_rng(1))
    assert distance(adjoint(H), H) == 0


def test_antilinear_adjoint_relation_sigma_y():
    rng = np.random.default_rng(0)
    A, Ad = THETA, adjoint(THETA)
    for _ in range(100):
        phi, psi = random_state(2, rng), random_state(2, rng)
        assert abs(inner_product(phi, apply(A, psi)) - np.conj(inner_product(apply(Ad, phi), psi))) < 1e-12


def test_antilinear_adjoint_is_not_conjugate_transpose():
    # the conjugate transpose would violate the antilinear defining relation
    rng = np.random.default_rng(5)
    A = random_antiunitary(3, rng)
    wrong = GeneralOperator(A.matrix.conj().T, True)
    phi, psi = random_state(3, rng), random_state(3, rng)
    lhs = inner_product(phi, apply(A, psi))
    assert abs(lhs - np.conj(inner_product(apply(adjoint(A), phi), psi))) < 1e-12
    assert abs(lhs - np.conj(inner_product(apply(wrong, phi), psi))) > 1e-3


@given(seeds, st.booleans())
def test_adjoint_involution(seed, anti):
    rng = np.random.default_rng(seed)
    A = GeneralOperator(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)), anti)
    back = adjoint(adjoint(A))
    assert back.antilinear == anti
    np.testing.assert_array_equal(back.matrix, A.matrix)


@given(seeds, st.booleans())
@settings(max_examples=50)
def test_adjoint_defining_relations(seed, anti):
    rng = np.random.default_rng(seed)
    A = GeneralOperator(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)), anti)
    phi, psi = random_state(4, rng), random_state(4, rng)
    lhs = inner_product(phi, apply(A, psi))
    rhs = inner_product(apply(adjoint(A), phi), psi)
    assert abs(lhs - (np.conj(rhs) if anti else rhs)) < 1e-12


def test_compose_examples():
    kk = compose(K2, K2)
    assert not kk.antilinear and distance(kk, identity(2)) == 0
    tt = compose(THETA, THETA)
    # oracle: sigma_y @ conj(sigma_y) by hand = [[0,-i],[i,0]] @ [[0,i],[-i,0]] = -I
    assert not tt.antilinear
    np.testing.assert_array_equal(tt.matrix, -np.eye(2))
    U = GeneralOperator(SX)
    v = np.array([1 + 1j, 2 - 3j])
    np.testing.assert_array_equal(apply(compose(U, K2), v), SX @ np.conj(v))


@given(seeds, st.booleans(), st.booleans())
@settings(max_examples=100)
def test_parity_algebra(seed, a_anti, b_anti):
    rng = np.random.default_rng(seed)
    A = GeneralOperator(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)), a_anti)
    B = GeneralOperator(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)), b_anti)
    v = random_state(4, rng)
    AB = compose(A, B)
    assert AB.antilinear == (a_anti != b_anti)
    np.testing.assert_allclose(apply(AB, v), apply(A, apply(B, v)), atol=1e-12, rtol=0)


def test_commutator_examples():
    c = commutator(GeneralOperator(SX), GeneralOperator(SY))
    np.testing.assert_array_equal(c.matrix, 2j * SZ)
    H = random_hermitian(3, np.random.default_rng(2))
    assert np.max(np.abs(commutator(H, H).matrix)) == 0
    with pytest.raises(ParityError):
        commutator(K2, GeneralOperator(SX))


def test_truncated_xp_commutator_brute_force():
    n, hbar = 12, 1.0
    a = ladder(n)
    # brute-force oracle: explicit element loops
    x = np.zeros((n, n), dtype=complex)
    pm = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        s = np.sqrt(j + 1)
        x[j, j + 1] = x[j + 1, j] = s * np.sqrt(hbar / 2)
        pm[j, j + 1] = -1j * s * np.sqrt(hbar / 2)
        pm[j + 1, j] = 1j * s * np.sqrt(hbar / 2)
    assert np.allclose(np.sqrt(hbar / 2) * (a + a.T), x)
    comm = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            comm[i, j] = sum(x[i, k] * pm[k, j] - pm[i, k] * x[k, j] for k in range(n))
    got = commutator(GeneralOperator(x), GeneralOperator(pm)).matrix
    np.testing.assert_allclose(got, comm, atol=1e-12)
    expected = 1j * hbar * np.eye(n)
    expected[-1, -1] = 1j * hbar * (1 - n)
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_conjugate_by_examples():
    xs = np.diag([-1.5, 0.0, 2.0]).astype(complex)
    K3 = complex_conjugation(3)
    assert distance(conjugate_by(K3, GeneralOperator(xs)), GeneralOperator(xs)) == 0
    np.testing.assert_array_equal(conjugate_by(K3, identity(3).scale(1j)).matrix, -1j * np.eye(3))
    comm = identity(3).scale(1j * 0.7)
    np.testing.assert_array_equal(conjugate_by(K3, comm).matrix, -1j * 0.7 * np.eye(3))


def test_conjugate_by_rejects_non_unitary():
    with pytest.raises(NotAntiunitaryError) as info:
        conjugate_by(GeneralOperator(2 * np.eye(2), True), GeneralOperator(SX))
    assert info.value.residual == pytest.approx(3.0)


def test_antiunitarity_residual_examples():
    assert antiunitarity_residual(K2) == 0
    assert antiunitarity_residual(THETA) == 0
    assert antiunitarity_residual(GeneralOperator(2 * np.eye(2), True)) == 3.0


def test_random_antiunitary():
    one = random_antiunitary(1, seed=9)
    assert one.antilinear and abs(abs(one.matrix[0, 0]) - 1) < 1e-14
    A = random_antiunitary(4, seed=42)
    assert antiunitarity_residual(A) < 1e-12
    np.testing.assert_array_equal(A.matrix, random_antiunitary(4, seed=42).matrix)
    with pytest.raises(ValueError):
        random_antiunitary(0)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_conjugation_homomorphism(seed):
    rng = np.random.default_rng(seed)
    A = random_antiunitary(4, rng)
    O, P = random_hermitian(4, rng), random_hermitian(4, rng)
    lhs = conjugate_by(A, compose(O, P))
    rhs = compose(conjugate_by(A, O), conjugate_by(A, P))
    assert distance(lhs, rhs) < 1e-12


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_matrix_elements_conjugate(seed):
    rng = np.random.default_rng(seed)
    A = random_antiunitary(4, rng)
    O = random_hermitian(4, rng)
    phi, psi = random_state(4, rng), random_state(4, rng)
    OA = conjugate_by(A, O)
    lhs = inner_product(phi, apply(O, psi))
    rhs = inner_product(apply(A, phi), apply(OA, apply(A, psi)))
    assert abs(lhs - np.conj(rhs)) < 1e-10


@given(seeds)
@settings(max_examples=30)
def test_commutator_identities(seed):
    rng = np.random.default_rng(seed)
    F, G, H = (random_hermitian(4, rng) for _ in range(3))
    assert distance(commutator(F, G), -commutator(G, F)) < 1e-12
    jac = commutator(F, commutator(G, H)) + commutator(H, commutator(F, G)) + commutator(G, commutator(H, F))
    assert np.max(np.abs(jac.matrix)) < 1e-12


def test_operator_invariants():
    with pytest.raises(DimensionError):
        GeneralOperator(np.ones((2, 3)))
    with pytest.raises(ValueError):
        GeneralOperator(np.array([[np.nan]]))
    with pytest.raises(ParityError):
        K2 + GeneralOperator(SX)
    with pytest.raises(DimensionError):
        compose(K2, identity(3))
