"""Verification suites: every identity becomes a tolerance-checked record.

Each suite is a pure function of the configuration and its own seeded
generator (derived from the run seed and the suite name), so suites can be
run in any order or concurrently and still produce identical records.
"""

from __future__ import annotations

import random
import zlib
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import __version__
from .config import SuiteConfig
from .expr import compile_expr
from .grid1d import (
    EvolutionParams,
    Grid,
    HamiltonianSpec,
    Potential,
    Wavefunction,
    apply_K,
    build_hamiltonian,
    build_momentum,
    build_position,
    ccr_residual,
    gaussian_packet,
    iter_evolve,
    matrix_element,
    position_mean,
    schrodinger_residual,
)
from .operators import (
    GeneralOperator,
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
from .phase_space import (
    PhasePolynomial,
    bracket_bilinearity_residual,
    jacobi_residual,
    poisson_bracket,
    random_polynomial,
)
from .quantize import dirac_residual, oscillator_qp, quadratic_basis, quantize
from .report import Record, VerificationReport
from .spin import (
    THETA,
    K2,
    build_spin,
    commutator_residual,
    k_transform_spin,
    spinor_theta,
    theta_transform_spin,
)

EXACT = 0.0
EM_EXPRESSION = "(p - e*A/c)^2/(2*m) + e*Phi"

Suite = Callable[["Context"], list[Record]]


class Context:
    def __init__(self, config: SuiteConfig, suite: str):
        self.config = config
        self.tol = config.tolerances
        seed_key = [config.seed, zlib.crc32(suite.encode())]
        self.rng = np.random.default_rng(seed_key)
        self.pyrng = random.Random(f"{config.seed}:{suite}")
        self.records: list[Record] = []

    def check(self, check_id: str, tag: str, residual: float, tolerance: float) -> None:
        self.records.append(Record(check_id, tag, float(residual), float(tolerance)))


def _frac(x: Fraction) -> float:
    return float(abs(x))


def _max(values: Iterable[float]) -> float:
    return max(values, default=0.0)


# -- classical ------------------------------------------------------------


def suite_classical(ctx: Context) -> list[Record]:
    rng = ctx.pyrng
    worst = Fraction(0)
    for d in (1, 2, 3):
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                qi, qj = PhasePolynomial.q(i, d), PhasePolynomial.q(j, d)
                pi, pj = PhasePolynomial.p(i, d), PhasePolynomial.p(j, d)
                delta = PhasePolynomial.constant(d, 1 if i == j else 0)
                for res in (poisson_bracket(qi, pj) - delta, poisson_bracket(qi, qj), poisson_bracket(pi, pj)):
                    worst = max(worst, res.max_abs_coefficient())
    ctx.check("classical.canonical_relations", "Eq.1", _frac(worst), EXACT)

    q, p = PhasePolynomial.q(), PhasePolynomial.p()
    example = poisson_bracket(q * q * p, p * p) - q * p * p * 4
    ctx.check("classical.bracket_example", "Eq.1", _frac(example.max_abs_coefficient()), EXACT)

    anti = Fraction(0)
    bilin = Fraction(0)
    jac = Fraction(0)
    const = Fraction(0)
    for trial in range(50):
        d = 1 + trial % 2
        f, g, h = (random_polynomial(rng, d, 3) for _ in range(3))
        anti = max(anti, (poisson_bracket(f, g) + poisson_bracket(g, f)).max_abs_coefficient())
        c1 = Fraction(3, 2) if trial == 0 else Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        c2 = Fraction(-7) if trial == 0 else Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        bilin = max(bilin, bracket_bilinearity_residual(c1, f, c2, h, g).max_abs_coefficient())
        jac = max(jac, jacobi_residual(f, g, h).max_abs_coefficient())
        c = PhasePolynomial.constant(d, Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        const = max(const, poisson_bracket(c, g).max_abs_coefficient())
    ctx.check("classical.antisymmetry", "Antisym", _frac(anti), EXACT)
    ctx.check("classical.bilinearity", "Linearity", _frac(bilin), EXACT)
    ctx.check("classical.jacobi", "Jacobi", _frac(jac), EXACT)
    ctx.check("classical.constants", "Eq.1", _frac(const), EXACT)
    return ctx.records


# -- algebra --------------------------------------------------------------


def _antilinear_witnesses(rng: np.random.Generator) -> dict[str, GeneralOperator]:
    return {"K": complex_conjugation(4), "theta": THETA, "random": random_antiunitary(4, rng)}


def _random_operator(n: int, antilinear: bool, rng: np.random.Generator) -> GeneralOperator:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return GeneralOperator(m, antilinear)


def suite_algebra(ctx: Context) -> list[Record]:
    rng, tol = ctx.rng, ctx.tol
    witnesses = _antilinear_witnesses(rng)

    worst = 0.0
    for A in witnesses.values():
        n = A.n
        for _ in range(100):
            c1, c2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            v1, v2 = random_state(n, rng), random_state(n, rng)
            lhs = apply(A, c1 * v1 + c2 * v2)
            rhs = np.conj(c1) * apply(A, v1) + np.conj(c2) * apply(A, v2)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    ctx.check("algebra.antilinearity", "Eq.9", worst, tol["algebra"])

    worst = 0.0
    for _ in range(100):
        O = _random_operator(4, False, rng)
        phi, psi = random_state(4, rng), random_state(4, rng)
        worst = max(worst, abs(inner_product(phi, apply(O, psi)) - inner_product(apply(adjoint(O), phi), psi)))
    ctx.check("algebra.adjoint_linear", "Eq.11", worst, tol["algebra"])

    for name, A in witnesses.items():
        worst = 0.0
        for _ in range(100):
            phi, psi = random_state(A.n, rng), random_state(A.n, rng)
            lhs = inner_product(phi, apply(A, psi))
            rhs = np.conj(inner_product(apply(adjoint(A), phi), psi))
            worst = max(worst, abs(lhs - rhs))
        ctx.check(f"algebra.adjoint_antilinear.{name}", "Eq.12", worst, tol["algebra"])

    expected = GeneralOperator(-THETA.matrix, True)
    ctx.check("algebra.adjoint_sigma_y", "Eq.12", distance(adjoint(THETA), expected), EXACT)

    worst = 0.0
    for antilinear in (False, True):
        A = _random_operator(4, antilinear, rng)
        back = adjoint(adjoint(A))
        worst = max(worst, distance(back, A) + float(back.antilinear != A.antilinear))
    ctx.check("algebra.adjoint_involution", "Eq.12", worst, EXACT)

    ctx.check("algebra.antiunitarity.K", "Eq.14", antiunitarity_residual(witnesses["K"]), tol["antiunitarity"])
    ctx.check("algebra.antiunitarity.theta", "Eq.14", antiunitarity_residual(THETA), tol["antiunitarity"])
    worst = _max(antiunitarity_residual(random_antiunitary(4, rng)) for _ in range(10))
    ctx.check("algebra.antiunitarity.random", "Eq.14", worst, tol["antiunitarity"])

    worst = 0.0
    for trial in range(100):
        A = _random_operator(4, bool(trial & 1), rng)
        B = _random_operator(4, bool(trial & 2), rng)
        v = random_state(4, rng)
        worst = max(worst, float(np.max(np.abs(apply(compose(A, B), v) - apply(A, apply(B, v))))))
    ctx.check("algebra.parity_composition", "Eq.9", worst, tol["algebra"])

    worst = 0.0
    for A in witnesses.values():
        n = A.n
        for _ in range(20):
            O, P = random_hermitian(n, rng), random_hermitian(n, rng)
            c = complex(rng.standard_normal() + 1j * rng.standard_normal())
            prod = distance(conjugate_by(A, compose(O, P)), compose(conjugate_by(A, O), conjugate_by(A, P)))
            scal = distance(conjugate_by(A, identity(n).scale(c)), identity(n).scale(np.conj(c)))
            worst = max(worst, prod, scal)
    ctx.check("algebra.conjugation_homomorphism", "Eq.14", worst, tol["algebra"])

    anti = lin = jac = 0.0
    for _ in range(30):
        F, G, H = (random_hermitian(4, rng) for _ in range(3))
        a, b = rng.standard_normal(2)
        anti = max(anti, distance(commutator(F, G), -commutator(G, F)))
        combo = F.scale(a) + H.scale(b)
        lin = max(lin, distance(commutator(combo, G), commutator(F, G).scale(a) + commutator(H, G).scale(b)))
        total = commutator(F, commutator(G, H)) + commutator(H, commutator(F, G)) + commutator(G, commutator(H, F))
        jac = max(jac, float(np.max(np.abs(total.matrix))))
    ctx.check("algebra.commutator_antisymmetry", "Antisym", anti, tol["algebra"])
    ctx.check("algebra.commutator_linearity", "Linearity", lin, tol["algebra"])
    ctx.check("algebra.commutator_jacobi", "Jacobi", jac, tol["algebra"])
    return ctx.records


# -- grid -----------------------------------------------------------------


def _em_spec(base: HamiltonianSpec) -> HamiltonianSpec:
    """A static electromagnetic configuration with nonzero A and Phi."""
    return HamiltonianSpec(
        base.m, base.e, base.c, base.hbar_signed,
        Potential.make("harmonic", stiffness=0.5),
        Potential.make("sinusoid", amplitude=0.5, k=0.3, omega=2.0),
    )


def _relative_l2(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def suite_grid(ctx: Context) -> list[Record]:
    cfg, tol = ctx.config, ctx.tol
    grid = cfg.grid.grid()
    spec = cfg.hamiltonian.spec()
    hbar = spec.hbar_signed
    x = grid.x
    X = build_position(grid)
    P = build_momentum(grid, hbar)
    K = complex_conjugation(grid.n)

    k = 2 * np.pi * 5 / grid.length
    wave = np.exp(1j * k * x)
    ctx.check("grid.momentum_plane_wave", "Eq.6", float(np.max(np.abs(apply(P, wave) - hbar * k * wave))), tol["plane_wave"])

    s, x0 = 1.0, 0.5
    g = np.exp(-((x - x0) ** 2) / (4 * s**2))
    exact = -1j * hbar * (-(x - x0) / (2 * s**2)) * g
    ctx.check("grid.momentum_gaussian", "Eq.6", _relative_l2(apply(P, g), exact), tol["momentum"])
    ctx.check("grid.momentum_hermitian", "Eq.6", distance(P, adjoint(P)), tol["hermitian"])

    pk = cfg.packet
    psi = gaussian_packet(grid, pk.x0, pk.p0, pk.sigma, hbar)
    psi_k = apply_K(psi)
    ctx.check("grid.K_norm", "Eq.13", abs(psi_k.norm() - psi.norm()), EXACT)
    ctx.check("grid.K_position", "Eq.15", distance(conjugate_by(K, X), X), EXACT)
    ctx.check("grid.K_momentum", "Eq.17", distance(conjugate_by(K, P), -P), tol["k_momentum"])
    ctx.check(
        "grid.K_position_mean", "Eq.15",
        abs(matrix_element(psi_k, X, psi_k) - matrix_element(psi, X, psi)), tol["matrix_element"],
    )
    ctx.check(
        "grid.K_momentum_mean", "Eq.17",
        abs(matrix_element(psi_k, P, psi_k) + matrix_element(psi, P, psi)), tol["matrix_element"],
    )

    ccr_grid = Grid(cfg.ccr.n, grid.length)
    centered = gaussian_packet(ccr_grid, 0.0, 0.0, pk.sigma)
    window = cfg.ccr.window
    ctx.check("grid.ccr_plus", "Eq.5", ccr_residual(ccr_grid, abs(hbar), centered, window), tol["ccr"])
    ctx.check("grid.ccr_minus", "Eq.19", ccr_residual(ccr_grid, -abs(hbar), centered, window), tol["ccr"])

    # [x, p] transformed by K, acting on K psi, gives -i hbar K psi
    Xc, Pc = build_position(ccr_grid), build_momentum(ccr_grid, hbar)
    comm_k = conjugate_by(complex_conjugation(ccr_grid.n), commutator(Xc, Pc))
    moving = gaussian_packet(ccr_grid, 0.0, pk.p0, pk.sigma, hbar)
    v = np.conj(moving.samples)
    inside = np.abs(ccr_grid.x) <= window * ccr_grid.length / 2
    ctx.check(
        "grid.K_ccr", "Eq.19",
        _relative_l2(apply(comm_k, v)[inside], (-1j * hbar * v)[inside]), tol["ccr"],
    )

    comm_text = compile_expr("x*p - p*x", ccr_grid, spec).operator
    ctx.check(
        "grid.expression_ccr", "Eq.5",
        _relative_l2(apply(comm_text, centered.samples)[np.abs(ccr_grid.x) <= window * ccr_grid.length / 2],
                     (1j * hbar * centered.samples)[np.abs(ccr_grid.x) <= window * ccr_grid.length / 2]),
        tol["ccr"],
    )

    em = _em_spec(spec)
    H = build_hamiltonian(grid, em, 0.3)
    ctx.check("grid.hamiltonian_hermitian", "Eq.24", distance(H, adjoint(H)), tol["hermitian"])
    ctx.check("grid.hamiltonian_K", "Eq.25", distance(build_hamiltonian(grid, em.flipped(), 0.3), conjugate_by(K, H)), tol["hamiltonian_k"])

    osc_grid = Grid(512, 20.0)
    osc = HamiltonianSpec(1.0, 1.0, 1.0, 1.0, Potential.make("harmonic", stiffness=1.0))
    e0 = float(np.linalg.eigvalsh(build_hamiltonian(osc_grid, osc).matrix)[0])
    ctx.check("grid.oscillator_ground_state", "Eq.24", abs(e0 - 0.5) / 0.5, tol["ground_state"])

    builtin = compile_expr(EM_EXPRESSION, grid, em, 0.3).operator
    ctx.check("grid.expression_hamiltonian", "Eq.24", distance(builtin, H), tol["expr"])
    text = cfg.hamiltonian.expression or EM_EXPRESSION
    compiled = compile_expr(text, grid, em, 0.3).operator
    flipped = compile_expr(text, grid, em.flipped(), 0.3).operator
    ctx.check("grid.expression_K", "Eq.25", distance(flipped, conjugate_by(K, compiled)), tol["expr"])
    return ctx.records


# -- spin -----------------------------------------------------------------


def _spin_distance(a, b) -> float:
    return _max(distance(u, v) for u, v in zip(a.components(), b.components()))


def suite_spin(ctx: Context) -> list[Record]:
    rng, tol = ctx.rng, ctx.tol
    hbar = ctx.config.hamiltonian.spec().hbar_signed
    s = build_spin(hbar)
    ctx.check(
        "spin.commutators", "Eq.27",
        max(commutator_residual(build_spin(h), h) for h in (hbar, -hbar)), tol["spin"],
    )
    eig = np.sort(np.linalg.eigvalsh(s.s_z.matrix))
    ctx.check("spin.sz_eigenvalues", "Eq.27", float(np.max(np.abs(eig - np.sort([hbar / 2, -hbar / 2])))), tol["spin"])

    sk = k_transform_spin(s)
    expected_k = type(s)(s.s_x, -s.s_y, s.s_z, hbar)
    ctx.check("spin.K_transform", "Eq.28", _spin_distance(sk, expected_k), EXACT)
    ctx.check("spin.K_commutators", "Eq.28", commutator_residual(sk, -hbar), tol["spin"])

    st = theta_transform_spin(s)
    ctx.check("spin.theta_transform", "Eq.29", _spin_distance(st, s.map(lambda o: -o)), EXACT)
    ctx.check("spin.theta_commutators", "Eq.29", commutator_residual(st, -hbar), tol["spin"])

    flipped = build_spin(-hbar)
    ctx.check("spin.theta_is_flipped_hbar", "Eq.29", _spin_distance(st, flipped), EXACT)
    k_differs = distance(sk.s_x, flipped.s_x) > 0 and distance(sk.s_z, flipped.s_z) > 0
    ctx.check("spin.K_is_not_flipped_hbar", "Eq.28", 0.0 if k_differs else 1.0, EXACT)

    ctx.check("spin.kramers", "Eq.29", distance(compose(THETA, THETA), identity(2).scale(-1)), EXACT)

    grid = Grid(64, 20.0)
    up = Wavefunction(grid, random_state(grid.n, rng))
    down = Wavefunction(grid, random_state(grid.n, rng))
    t_up, t_down = spinor_theta(up, down)
    tt_up, tt_down = spinor_theta(t_up, t_down)
    ctx.check(
        "spin.spinor_theta_squared", "Eq.29",
        max(float(np.max(np.abs(tt_up.samples + up.samples))), float(np.max(np.abs(tt_down.samples + down.samples)))),
        EXACT,
    )
    before = up.norm() ** 2 + down.norm() ** 2
    after = t_up.norm() ** 2 + t_down.norm() ** 2
    ctx.check("spin.spinor_theta_norm", "Eq.29", abs(after - before), EXACT)

    for name, A in (("K", K2), ("theta", THETA), ("random", random_antiunitary(2, rng))):
        worst = 0.0
        for _ in range(100):
            phi, psi = random_state(2, rng), random_state(2, rng)
            for O in s.components():
                worst = max(worst, _eq26_residual(A, O, phi, psi))
        ctx.check(f"spin.matrix_elements.{name}", "Eq.26", worst, tol["matrix_element"])
    return ctx.records


def _eq26_residual(A: GeneralOperator, O: GeneralOperator, phi: np.ndarray, psi: np.ndarray, OA=None) -> float:
    """Relative defect of ``(phi, O psi) = conj((A phi, A O A^dag A psi))``,
    plus the defect of the modulus, scaled by ``|phi| |O psi|``."""
    if OA is None:
        OA = conjugate_by(A, O)
    lhs = inner_product(phi, apply(O, psi))
    rhs = inner_product(apply(A, phi), apply(OA, apply(A, psi)))
    scale = np.linalg.norm(phi) * np.linalg.norm(apply(O, psi))
    return max(abs(lhs - np.conj(rhs)), abs(abs(lhs) - abs(rhs))) / scale


# -- mirror ---------------------------------------------------------------


def mirror_scenarios(base: HamiltonianSpec) -> dict[str, HamiltonianSpec]:
    m, e, c, h = base.m, base.e, base.c, base.hbar_signed
    return {
        "free": HamiltonianSpec(m, e, c, h),
        "harmonic": HamiltonianSpec(m, e, c, h, Potential.make("harmonic", stiffness=1.0)),
        "vector_potential": HamiltonianSpec(
            m, e, c, h,
            Potential.make("harmonic", stiffness=0.5),
            Potential.make("sinusoid", amplitude=0.5, k=0.3, omega=2.0),
        ),
    }


def suite_mirror(ctx: Context) -> list[Record]:
    cfg, tol, rng = ctx.config, ctx.tol, ctx.rng
    mc, pk = cfg.mirror, cfg.packet
    grid = Grid(mc.n, mc.length)
    params = EvolutionParams(mc.dt, mc.steps)
    base = cfg.hamiltonian.spec()
    psi0 = gaussian_packet(grid, pk.x0, pk.p0, pk.sigma, base.hbar_signed)
    half = mc.steps // 2

    for name, spec in mirror_scenarios(base).items():
        forward = [w for _, _, w in iter_evolve(psi0, spec, params)]
        mirror = [w for _, _, w in iter_evolve(apply_K(psi0), spec.flipped(), params)]
        ctx.check(f"mirror.{name}.state", "Eq.23", mirror[-1].distance(apply_K(forward[-1])), tol["mirror"])
        ctx.check(
            f"mirror.{name}.equation", "Eq.23",
            schrodinger_residual([apply_K(w) for w in forward], spec.flipped(), mc.dt), tol["mirror"],
        )
        n0 = psi0.norm()
        ctx.check(f"mirror.{name}.norm", "Eq.22", _max(abs(w.norm() - n0) for w in forward), tol["norm"])

        t_end = mc.steps * mc.dt
        observables = {
            "x": (build_position(grid), build_position(grid)),
            "p": (build_momentum(grid, spec.hbar_signed), build_momentum(grid, -spec.hbar_signed)),
            "H": (build_hamiltonian(grid, spec, t_end), build_hamiltonian(grid, spec.flipped(), t_end)),
        }
        worst = 0.0
        for O_plus, O_minus in observables.values():
            a = matrix_element(forward[-1], O_plus, forward[half])
            b = matrix_element(mirror[-1], O_minus, mirror[half])
            scale = max(abs(a), 1.0)
            worst = max(worst, abs(a - np.conj(b)) / scale, abs(abs(a) - abs(b)) / scale)
        ctx.check(f"mirror.{name}.observables", "Eq.26", worst, tol["mirror"])

        if name == "free":
            t = mc.steps * mc.dt
            predicted = pk.x0 + pk.p0 * t / spec.m
            ctx.check("mirror.free.ehrenfest", "Eq.22", abs(position_mean(forward[-1]) - predicted), tol["ehrenfest"])

    # matrix-element conjugation on the configured grid
    big = cfg.grid.grid()
    spec = _em_spec(base)
    ops = {
        "x": build_position(big),
        "p": build_momentum(big, base.hbar_signed),
        "H": build_hamiltonian(big, spec, 0.0),
    }
    witnesses = {"K": complex_conjugation(big.n), "random": random_antiunitary(big.n, rng)}
    smooth = _smooth_states(big, rng, 200)
    for wname, A in witnesses.items():
        transformed = {k: conjugate_by(A, O) for k, O in ops.items()}
        worst = 0.0
        diag = 0.0
        for i in range(100):
            phi, psi = smooth[2 * i], smooth[2 * i + 1]
            for key, O in ops.items():
                worst = max(worst, _eq26_residual(A, O, phi, psi, transformed[key]))
                d1 = inner_product(psi, apply(O, psi))
                d2 = inner_product(apply(A, psi), apply(transformed[key], apply(A, psi)))
                diag = max(diag, abs(d1 - d2) / max(abs(d1), 1.0), abs(d1.imag) / max(abs(d1), 1.0))
        ctx.check(f"mirror.matrix_elements.{wname}", "Eq.26", worst, tol["matrix_element"])
        ctx.check(f"mirror.expectations.{wname}", "Eq.26", diag, tol["matrix_element"])
    return ctx.records


def _smooth_states(grid: Grid, rng: np.random.Generator, count: int) -> list[np.ndarray]:
    """Random normalized Gaussian packets with random centres, widths, momenta and phases."""
    x = grid.x
    out = []
    for _ in range(count):
        x0 = rng.uniform(-0.2, 0.2) * grid.length
        s = rng.uniform(0.5, 2.0)
        p0 = rng.uniform(-3, 3)
        phase = np.exp(2j * np.pi * rng.uniform())
        v = phase * np.exp(-((x - x0) ** 2) / (4 * s**2) + 1j * p0 * x)
        out.append(v / np.linalg.norm(v))
    return out


# -- crosscheck -----------------------------------------------------------


def suite_crosscheck(ctx: Context) -> list[Record]:
    cfg, tol = ctx.config, ctx.tol
    levels, window = cfg.crosscheck.levels, cfg.crosscheck.window
    hbar = abs(cfg.hamiltonian.spec().hbar_signed)
    basis = list(quadratic_basis().values())
    rng = ctx.pyrng
    pairs = [(f, g) for f in basis for g in basis]
    for _ in range(10):
        combo = [sum((b * Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for b in basis), PhasePolynomial.zero(1)) for _ in range(2)]
        pairs.append((combo[0], combo[1]))

    for label, h in (("plus", hbar), ("minus", -hbar)):
        worst = _max(dirac_residual(f, g, levels, h, window) for f, g in pairs)
        ctx.check(f"crosscheck.dirac_{label}", "Eq.2", worst, tol["crosscheck"])

    q_plus, p_plus = oscillator_qp(levels, hbar)
    q_minus, p_minus = oscillator_qp(levels, -hbar)
    K = complex_conjugation(levels)
    worst = _max(distance(conjugate_by(K, quantize(f, q_plus, p_plus)), quantize(f, q_minus, p_minus)) for f in basis)
    ctx.check("crosscheck.K_map", "Eq.2", worst, tol["algebra"])

    comm = commutator(q_plus, p_plus).matrix
    expected = 1j * hbar * np.eye(levels)
    expected[-1, -1] = 1j * hbar * (1 - levels)
    ctx.check("crosscheck.truncated_ccr", "Eq.5", float(np.max(np.abs(comm - expected))), tol["algebra"])
    return ctx.records


SUITE_FUNCTIONS: dict[str, Suite] = {
    "classical": suite_classical,
    "algebra": suite_algebra,
    "grid": suite_grid,
    "spin": suite_spin,
    "mirror": suite_mirror,
    "crosscheck": suite_crosscheck,
}


def run_verify(config: SuiteConfig, timestamp: bool = False) -> VerificationReport:
    records: list[Record] = []
    for name in config.suites:
        records.extend(SUITE_FUNCTIONS[name](Context(config, name)))
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
    return VerificationReport(records, config.to_dict(), config.seed, __version__, stamp)
