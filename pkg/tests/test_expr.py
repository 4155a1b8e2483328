import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from signhbar.expr import (
    Add,
    Call,
    Div,
    ExprError,
    ExpressionHamiltonian,
    Mul,
    Neg,
    Num,
    Param,
    Pow,
    Sub,
    Sym,
    UnsupportedConstruct,
    compile_expr,
    is_time_dependent,
    parse,
    to_text,
    tokenize,
)
from signhbar.grid1d import (
    Grid,
    HamiltonianSpec,
    Potential,
    build_hamiltonian,
    build_momentum,
    ccr_residual,
    gaussian_packet,
)
from signhbar.operators import complex_conjugation, compose, conjugate_by, distance

GRID = Grid(64, 20.0)
SPEC = HamiltonianSpec(m=1.5, e=0.7, c=2.0, phi=Potential.make("harmonic", stiffness=0.8), A=Potential.make("sinusoid", amplitude=0.4, k=0.5))

CORPUS = [
    "p^2/(2*m)",
    "x*p - p*x",
    "exp(-x^2/2)",
    "(p - e*A/c)^2/(2*m) + e*Phi",
    "x*p*x + sin(x)*p",
    "-p^3 + cos(x)*x^2 - 2.5*p",
    "sqr(x)/(1 + x^2) * p",
]


def test_tokenize_examples():
    toks = tokenize("p^2/(2*m)")
    assert [(t.kind, t.lexeme) for t in toks] == [
        ("identifier", "p"), ("operator", "^"), ("number", "2"), ("operator", "/"), ("paren", "("),
        ("number", "2"), ("operator", "*"), ("identifier", "m"), ("paren", ")"),
    ]
    assert tokenize("") == []
    with pytest.raises(ExprError) as info:
        tokenize("p @ x")
    assert info.value.column == 3


def test_token_columns_monotone():
    cols = [t.column for t in tokenize("  x *  p+1.5e-3 ")]
    assert cols == sorted(cols) and cols[0] == 3


def test_parse_examples():
    assert parse("x*p - p*x") == Sub(Mul(Sym("x"), Sym("p")), Mul(Sym("p"), Sym("x")))
    assert parse("exp(-x^2/2)") == Call("exp", Div(Neg(Pow(Sym("x"), 2)), Num(2.0)))
    assert parse("m - e - c") == Sub(Sub(Param("m"), Param("e")), Param("c"))
    assert parse("-x^2") == Neg(Pow(Sym("x"), 2))
    assert parse("x + p*x") == Add(Sym("x"), Mul(Sym("p"), Sym("x")))


@pytest.mark.parametrize(
    "text, column",
    [
        ("p +", None),
        ("", None),
        ("(x + p", None),
        ("x + p)", 6),
        ("x^1.5", 3),
        ("x^p", 3),
        ("foo*x", 1),
        ("x p", 3),
        ("sin(x, p)", 6),
        ("*x", 1),
    ],
)
def test_parse_errors(text, column):
    with pytest.raises(ExprError) as info:
        parse(text)
    assert info.value.column == column


leaves = st.one_of(
    st.sampled_from([Sym("x"), Sym("p"), Sym("Phi"), Sym("A"), Param("m"), Param("hbar"), Param("t")]),
    st.floats(0, 1e6, allow_nan=False).map(Num),
)


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(0, 3)),
        st.builds(Call, st.sampled_from(["sin", "cos", "exp", "sqr"]), children),
        *(st.builds(cls, children, children) for cls in (Add, Sub, Mul, Div)),
    )


asts = st.recursive(leaves, _extend, max_leaves=12)


@given(asts)
@settings(max_examples=300)
def test_round_trip(ast):
    assert parse(to_text(ast)) == ast


# operator-valued ASTs built only from x, p, real functions of x and scalars
diag_leaves = st.one_of(st.just(Sym("x")), st.floats(-2, 2, allow_nan=False).map(Num))
diag_asts = st.recursive(
    diag_leaves,
    lambda ch: st.one_of(st.builds(Call, st.sampled_from(["sin", "cos"]), ch), st.builds(Mul, ch, ch), st.builds(Add, ch, ch)),
    max_leaves=4,
)
op_asts = st.recursive(
    st.one_of(diag_asts, st.just(Sym("p"))),
    lambda ch: st.one_of(st.builds(Mul, ch, ch), st.builds(Add, ch, ch), st.builds(Sub, ch, ch), st.builds(Neg, ch)),
    max_leaves=5,
)

SMALL = Grid(16, 6.0)
FLAT = HamiltonianSpec()


@given(op_asts, op_asts)
@settings(max_examples=100, deadline=None)
def test_homomorphism(a, b):
    ca, cb = compile_expr(a, SMALL, FLAT).operator, compile_expr(b, SMALL, FLAT).operator
    scale = max(1.0, np.max(np.abs(ca.matrix)) * max(1.0, np.max(np.abs(cb.matrix))))
    assert distance(compile_expr(Add(a, b), SMALL, FLAT).operator, ca + cb) <= 1e-12 * scale
    assert distance(compile_expr(Mul(a, b), SMALL, FLAT).operator, compose(ca, cb)) <= 1e-12 * scale


@given(op_asts)
@settings(max_examples=100, deadline=None)
def test_sign_flip_covariance_random(ast):
    plus = compile_expr(ast, SMALL, FLAT).operator
    minus = compile_expr(ast, SMALL, FLAT.flipped()).operator
    assert distance(minus, conjugate_by(complex_conjugation(SMALL.n), plus)) <= 1e-10 * max(1.0, np.max(np.abs(plus.matrix)))


@pytest.mark.parametrize("text", CORPUS)
def test_sign_flip_covariance_corpus(text):
    plus = compile_expr(text, GRID, SPEC, 0.3).operator
    minus = compile_expr(text, GRID, SPEC.flipped(), 0.3).operator
    assert distance(minus, conjugate_by(complex_conjugation(GRID.n), plus)) < 1e-10


def test_explicit_hbar_scalar_is_outside_covariance():
    # K leaves real scalars alone, while a literal hbar flips with the sign
    plus = compile_expr("hbar*x", SMALL, FLAT).operator
    minus = compile_expr("hbar*x", SMALL, FLAT.flipped()).operator
    assert distance(minus, conjugate_by(complex_conjugation(SMALL.n), plus).scale(-1)) == 0


def test_kinetic_example():
    p = build_momentum(GRID, SPEC.hbar_signed).matrix
    got = compile_expr("p^2/(2*m)", GRID, SPEC).matrix
    np.testing.assert_allclose(got, p @ p / (2 * SPEC.m), atol=1e-12, rtol=0)


def test_em_hamiltonian_matches_builtin():
    for t in (0.0, 1.1):
        got = compile_expr("(p - e*A/c)^2/(2*m) + e*Phi", GRID, SPEC, t).matrix
        ref = build_hamiltonian(GRID, SPEC, t).matrix
        assert np.max(np.abs(got - ref)) < 1e-10


def test_gaussian_multiplier_pointwise():
    got = compile_expr("exp(-x^2/2)", GRID, SPEC).matrix
    oracle = np.diag([np.exp(-xi * xi / 2) for xi in GRID.x])
    np.testing.assert_allclose(got, oracle, atol=1e-15)


def test_commutator_expression_reproduces_ccr():
    grid = Grid(1024, 40.0)
    for hbar in (1.0, -1.0):
        spec = HamiltonianSpec(hbar_signed=hbar)
        psi = gaussian_packet(grid, 0.0, 1.0, 1.0, hbar)
        comm = compile_expr("x*p - p*x", grid, spec).matrix
        inside = np.abs(grid.x) <= 0.25 * grid.length
        target = 1j * hbar * psi.samples
        err = np.linalg.norm((comm @ psi.samples - target)[inside]) / np.linalg.norm(target[inside])
        assert err < 1e-6
        assert abs(err - ccr_residual(grid, hbar, psi)) < 1e-12


def test_noncommutativity():
    assert distance(compile_expr("x*p", SMALL, FLAT).operator, compile_expr("p*x", SMALL, FLAT).operator) > 0.1


def test_unsupported_constructs():
    with pytest.raises(UnsupportedConstruct):
        compile_expr("exp(p)", SMALL, FLAT)
    with pytest.raises(UnsupportedConstruct):
        compile_expr("x/p", SMALL, FLAT)
    # the 16-point grid of length 6 contains x = 0
    with pytest.raises(ExprError):
        compile_expr("p/x", SMALL, FLAT)
    with pytest.raises(ExprError):
        compile_expr("p/(m - 1)", SMALL, FLAT)


def test_time_dependence_detection():
    static = HamiltonianSpec(phi=Potential.make("harmonic"), A=Potential.make("sinusoid", omega=0.0))
    moving = HamiltonianSpec(A=Potential.make("sinusoid", omega=1.0))
    assert not is_time_dependent(parse("p^2 + Phi + A"), static)
    assert is_time_dependent(parse("p*A"), moving)
    assert not is_time_dependent(parse("p*Phi"), moving)
    assert is_time_dependent(parse("x*t"), static)


@pytest.mark.parametrize("text", CORPUS)
def test_matrix_free_action_matches_compiled(text):
    rng = np.random.default_rng(3)
    v = rng.standard_normal(GRID.n) + 1j * rng.standard_normal(GRID.n)
    source = ExpressionHamiltonian(text, GRID, SPEC)
    for t in (0.0, 0.8):
        dense = compile_expr(text, GRID, SPEC, t).matrix
        assert np.array_equal(source.at(t).matrix(), dense)
        ref = dense @ v
        assert np.max(np.abs(source.apply(v) - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


@given(op_asts)
@settings(max_examples=50, deadline=None)
def test_matrix_free_action_random(ast):
    v = np.random.default_rng(0).standard_normal(SMALL.n) + 0.5j
    ref = compile_expr(ast, SMALL, FLAT).matrix @ v
    got = ExpressionHamiltonian(ast, SMALL, FLAT).apply(v)
    assert np.max(np.abs(got - ref)) <= 1e-11 * max(1.0, np.max(np.abs(ref)))


def test_matrix_free_action_rejects_unsupported():
    v = np.ones(SMALL.n, dtype=complex)
    with pytest.raises(UnsupportedConstruct):
        ExpressionHamiltonian("exp(p)", SMALL, FLAT).apply(v)
    with pytest.raises(UnsupportedConstruct):
        ExpressionHamiltonian("x/p", SMALL, FLAT).apply(v)
    with pytest.raises(ExprError):
        ExpressionHamiltonian("p/x", SMALL, FLAT).apply(v)
