"""Quantum mechanics of one particle on a uniform periodic 1D grid.

The derivative is spectral (Fourier) with the Nyquist mode dropped, which
makes the derivative matrix real and exactly antisymmetric. Consequently
``p = -i hbar D`` is hermitian and complex conjugation maps ``p`` to ``-p``
without discretisation error.

The vector potential enters in the 1D reduction

    H = (i hbar D + (e/c) A(x, t))^2 / (2m) + e Phi(x, t)

and ``hbar`` is signed: negating it yields the conjugated Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Optional, Protocol, Union

import numpy as np
import scipy.linalg

from .constants import HBAR_NATURAL
from .operators import GeneralOperator, conjugate_by, complex_conjugation

PotentialFn = Callable[[np.ndarray, float], np.ndarray]


class SupportError(ValueError):
    pass


class EvolutionError(RuntimeError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class Grid:
    n: int
    length: float

    def __post_init__(self) -> None:
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {self.n}")
        if not self.length > 0:
            raise ValueError("grid length must be positive")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return -self.length / 2 + np.arange(self.n) * self.dx

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.dx)


@dataclass(frozen=True, eq=False)
class Wavefunction:
    grid: Grid
    samples: np.ndarray

    def __post_init__(self) -> None:
        s = np.array(self.samples, dtype=complex)
        if s.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("wavefunction has non-finite samples")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.grid.dx))

    def normalized(self) -> Wavefunction:
        return Wavefunction(self.grid, self.samples / self.norm())

    def distance(self, other: Wavefunction) -> float:
        """L2 distance with dx weighting."""
        _same_grid(self, other)
        return float(np.sqrt(np.sum(np.abs(self.samples - other.samples) ** 2) * self.grid.dx))


def _same_grid(a: Wavefunction, b: Wavefunction) -> None:
    if a.grid != b.grid:
        raise ValueError(f"grid mismatch: {a.grid} vs {b.grid}")


def gaussian_packet(
    grid: Grid, x0: float = 0.0, p0: float = 0.0, sigma: float = 1.0, hbar: float = HBAR_NATURAL
) -> Wavefunction:
    """Normalized Gaussian with position spread ``sigma`` and mean momentum
    ``p0`` measured by ``build_momentum(grid, hbar)``."""
    x = grid.x
    amp = (2 * np.pi * sigma**2) ** -0.25
    psi = amp * np.exp(-((x - x0) ** 2) / (4 * sigma**2) + 1j * p0 * x / hbar)
    return Wavefunction(grid, psi)


@dataclass(frozen=True)
class Potential:
    """Built-in parameterized potential forms, callable as ``V(x, t)``.

    kinds: ``zero``, ``constant`` (value), ``ramp`` (slope*x + drift*t),
    ``harmonic`` (0.5*stiffness*(x - center)^2),
    ``sinusoid`` (amplitude*sin(k*x - omega*t + phase)).
    """

    kind: str = "zero"
    params: tuple[tuple[str, float], ...] = ()

    _FIELDS = {
        "zero": {},
        "constant": {"value": 0.0},
        "ramp": {"slope": 0.0, "drift": 0.0},
        "harmonic": {"stiffness": 1.0, "center": 0.0},
        "sinusoid": {"amplitude": 1.0, "k": 1.0, "omega": 0.0, "phase": 0.0},
    }

    def __post_init__(self) -> None:
        if self.kind not in self._FIELDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        allowed = self._FIELDS[self.kind]
        given = dict(self.params)
        extra = set(given) - set(allowed)
        if extra:
            raise ValueError(f"unknown parameters for {self.kind}: {sorted(extra)}")
        merged = {**allowed, **{k: float(v) for k, v in given.items()}}
        object.__setattr__(self, "params", tuple(sorted(merged.items())))

    @classmethod
    def make(cls, kind: str = "zero", **params: float) -> Potential:
        return cls(kind, tuple(params.items()))

    @classmethod
    def from_dict(cls, d: dict) -> Potential:
        d = dict(d)
        kind = d.pop("kind", "zero")
        return cls.make(kind, **d)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **dict(self.params)}

    @property
    def time_dependent(self) -> bool:
        p = dict(self.params)
        if self.kind == "ramp":
            return p["drift"] != 0.0
        if self.kind == "sinusoid":
            return p["omega"] != 0.0
        return False

    def __call__(self, x: np.ndarray, t: float) -> np.ndarray:
        p = dict(self.params)
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, p["value"])
        if self.kind == "ramp":
            return p["slope"] * x + p["drift"] * t
        if self.kind == "harmonic":
            return 0.5 * p["stiffness"] * (x - p["center"]) ** 2
        return p["amplitude"] * np.sin(p["k"] * x - p["omega"] * t + p["phase"])


@dataclass(frozen=True)
class HamiltonianSpec:
    m: float = 1.0
    e: float = 1.0
    c: float = 1.0
    hbar_signed: float = HBAR_NATURAL
    phi: PotentialFn = field(default_factory=Potential)
    A: PotentialFn = field(default_factory=Potential)

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise ValueError("mass must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.hbar_signed == 0 or not math.isfinite(self.hbar_signed):
            raise ValueError("hbar_signed must be finite and nonzero")

    def flipped(self) -> HamiltonianSpec:
        """Same physics data with the sign of hbar reversed."""
        return HamiltonianSpec(self.m, self.e, self.c, -self.hbar_signed, self.phi, self.A)

    @property
    def time_dependent(self) -> bool:
        return any(getattr(f, "time_dependent", True) for f in (self.phi, self.A))


@dataclass(frozen=True)
class EvolutionParams:
    dt: float = 1e-3
    steps: int = 2000

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")


@lru_cache(maxsize=16)
def _derivative_matrix(n: int, length: float) -> np.ndarray:
    m = np.arange(1, n // 2)
    col = np.zeros(n)
    col[m] = 0.5 * (-1.0) ** m / np.tan(np.pi * m / n)
    col[n - m] = -col[m]
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    d = col[idx] * (2 * np.pi / length)
    d.setflags(write=False)
    return d


@lru_cache(maxsize=16)
def _second_derivative_matrix(n: int, length: float) -> np.ndarray:
    d = _derivative_matrix(n, length)
    d2 = d @ d
    d2 = (d2 + d2.T) / 2
    d2.setflags(write=False)
    return d2


def derivative_matrix(grid: Grid) -> np.ndarray:
    """Real antisymmetric spectral first-derivative matrix (Nyquist mode zeroed)."""
    return _derivative_matrix(grid.n, grid.length)


def build_position(grid: Grid) -> GeneralOperator:
    return GeneralOperator(np.diag(grid.x).astype(complex))


def build_momentum(grid: Grid, hbar_signed: float = HBAR_NATURAL) -> GeneralOperator:
    return GeneralOperator(-1j * hbar_signed * derivative_matrix(grid))


def apply_K(psi: Wavefunction) -> Wavefunction:
    return Wavefunction(psi.grid, np.conj(psi.samples))


def _potential_samples(fn: PotentialFn, grid: Grid, t: float, name: str) -> np.ndarray:
    v = np.asarray(fn(grid.x, t), dtype=float)
    if v.shape == ():
        v = np.full(grid.n, float(v))
    if v.shape != (grid.n,) or not np.all(np.isfinite(v)):
        raise ValueError(f"potential {name} returned non-finite or malformed samples at t={t}")
    return v


def _hamiltonian_matrix(grid: Grid, spec: HamiltonianSpec, phi: np.ndarray, a_field: np.ndarray) -> np.ndarray:
    # (i hbar D + a)^2 = -hbar^2 D^2 + i hbar (D a + a D) + a^2, with a = diag(eA/c)
    hbar = spec.hbar_signed
    d = derivative_matrix(grid)
    a = spec.e * a_field / spec.c
    h = -(hbar**2) * _second_derivative_matrix(grid.n, grid.length).astype(complex)
    if np.any(a):
        h = h + 1j * hbar * (d * a[None, :] + a[:, None] * d)
        h[np.diag_indices(grid.n)] += a**2
    h = h / (2 * spec.m)
    h[np.diag_indices(grid.n)] += spec.e * phi
    return h


def build_hamiltonian(grid: Grid, spec: HamiltonianSpec, t: float = 0.0) -> GeneralOperator:
    phi = _potential_samples(spec.phi, grid, t, "phi")
    a_field = _potential_samples(spec.A, grid, t, "A")
    return GeneralOperator(_hamiltonian_matrix(grid, spec, phi, a_field))


HamiltonianFn = Callable[[float], GeneralOperator]


class HamiltonianSource(Protocol):
    """Time-dependent generator the solver can apply without a dense matrix.

    ``at(t)`` selects the time and returns the source; ``apply(v)`` is
    ``H(t) v``; ``matrix()`` is only requested when a new factorisation is due.
    """

    def at(self, t: float) -> HamiltonianSource: ...

    def matrix(self) -> np.ndarray: ...

    def apply(self, v: np.ndarray) -> np.ndarray: ...

_REFINE_MAX_ITER = 12
_REFINE_RTOL = 1e-15
_REFACTOR_AFTER = 4


def _real_matvec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    return m @ v.real + 1j * (m @ v.imag)


class _SpecHamiltonian:
    """H(t) from a HamiltonianSpec, applied without forming the matrix."""

    def __init__(self, grid: Grid, spec: HamiltonianSpec):
        self.grid = grid
        self.spec = spec
        self.d = derivative_matrix(grid)
        self.d2 = _second_derivative_matrix(grid.n, grid.length)
        self._t = None

    def at(self, t: float) -> _SpecHamiltonian:
        if t != self._t:
            self.phi = _potential_samples(self.spec.phi, self.grid, t, "phi")
            self.a_field = _potential_samples(self.spec.A, self.grid, t, "A")
            self._t = t
        return self

    def matrix(self) -> np.ndarray:
        return _hamiltonian_matrix(self.grid, self.spec, self.phi, self.a_field)

    def apply(self, v: np.ndarray) -> np.ndarray:
        spec = self.spec
        hbar = spec.hbar_signed
        a = spec.e * self.a_field / spec.c
        out = -(hbar**2) * _real_matvec(self.d2, v)
        if np.any(a):
            out = out + 1j * hbar * (_real_matvec(self.d, a * v) + a * _real_matvec(self.d, v)) + a**2 * v
        return out / (2 * spec.m) + spec.e * self.phi * v


class _CallableHamiltonian:
    def __init__(self, fn: HamiltonianFn):
        self.fn = fn

    def at(self, t: float) -> _CallableHamiltonian:
        self._m = self.fn(t).matrix
        return self

    def matrix(self) -> np.ndarray:
        return self._m

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self._m @ v


def _factor(lhs: np.ndarray, step: int):
    try:
        lu = scipy.linalg.lu_factor(lhs, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EvolutionError(step, f"linear solve failed: {exc}") from exc
    if np.any(np.diag(lu[0]) == 0):
        raise EvolutionError(step, "singular Crank-Nicolson step matrix")
    return lu


def _refine(lu, matvec: Callable[[np.ndarray], np.ndarray], b: np.ndarray) -> tuple[Optional[np.ndarray], int]:
    """Solve ``M y = b`` by iterative refinement preconditioned with the
    factorisation of a nearby matrix. Returns (solution or None, iterations)."""
    y = scipy.linalg.lu_solve(lu, b)
    for it in range(1, _REFINE_MAX_ITER + 1):
        dy = scipy.linalg.lu_solve(lu, b - matvec(y))
        y = y + dy
        if np.linalg.norm(dy) <= _REFINE_RTOL * np.linalg.norm(y):
            return y, it
    return None, _REFINE_MAX_ITER


def iter_evolve(
    psi0: Wavefunction,
    spec: HamiltonianSpec,
    params: EvolutionParams,
    hamiltonian: Optional[Union[HamiltonianFn, HamiltonianSource]] = None,
    time_dependent: Optional[bool] = None,
) -> Iterator[tuple[int, float, Wavefunction]]:
    """Yield ``(step, t, psi)`` for step = 0..params.steps.

    Each Crank-Nicolson step solves
    ``(I + i dt H/(2 hbar)) psi' = (I - i dt H/(2 hbar)) psi`` with H taken at
    the step midpoint. ``hamiltonian`` overrides the operator built from
    ``spec``; it is either ``t -> GeneralOperator`` or a HamiltonianSource. For time-independent H one factorisation serves every step;
    otherwise the latest factorisation preconditions an iterative solve and
    is refreshed when that stops converging.
    """
    grid = psi0.grid
    if hamiltonian is None:
        ham = _SpecHamiltonian(grid, spec)
    elif hasattr(hamiltonian, "apply"):
        ham = hamiltonian
    else:
        ham = _CallableHamiltonian(hamiltonian)
    if time_dependent is None:
        time_dependent = spec.time_dependent
    tau = params.dt / (2 * spec.hbar_signed)
    eye = np.eye(grid.n)
    psi = psi0.samples
    yield 0, 0.0, psi0
    lu = None
    rhs_matrix = None
    for k in range(params.steps):
        t_mid = (k + 0.5) * params.dt
        if lu is None:
            gen = 1j * tau * ham.at(t_mid).matrix()
            lu = _factor(eye + gen, k)
            rhs_matrix = eye - gen
            psi = scipy.linalg.lu_solve(lu, rhs_matrix @ psi)
        elif not time_dependent:
            psi = scipy.linalg.lu_solve(lu, rhs_matrix @ psi)
        else:
            h = ham.at(t_mid)
            b = psi - 1j * tau * h.apply(psi)
            new, iterations = _refine(lu, lambda y: y + 1j * tau * h.apply(y), b)
            if new is None:
                lu = _factor(eye + 1j * tau * h.matrix(), k)
                new = scipy.linalg.lu_solve(lu, b)
            elif iterations > _REFACTOR_AFTER:
                lu = _factor(eye + 1j * tau * h.matrix(), k)
            psi = new
        if not np.all(np.isfinite(psi)):
            raise EvolutionError(k, "non-finite state after solve")
        yield k + 1, (k + 1) * params.dt, Wavefunction(grid, psi)


def evolve(
    psi0: Wavefunction,
    spec: HamiltonianSpec,
    params: EvolutionParams,
    hamiltonian: Optional[Union[HamiltonianFn, HamiltonianSource]] = None,
    time_dependent: Optional[bool] = None,
) -> Wavefunction:
    last = psi0
    for _, _, last in iter_evolve(psi0, spec, params, hamiltonian, time_dependent):
        pass
    return last


def matrix_element(phi: Wavefunction, O: GeneralOperator, psi: Wavefunction) -> complex:
    """``(phi, O psi)`` with the dx-weighted grid inner product."""
    _same_grid(phi, psi)
    if O.antilinear:
        raise ValueError("matrix_element expects a linear operator")
    if O.n != psi.grid.n:
        raise ValueError(f"operator dimension {O.n} does not match grid size {psi.grid.n}")
    return complex(np.vdot(phi.samples, O.matrix @ psi.samples) * psi.grid.dx)


def expectation(psi: Wavefunction, O: GeneralOperator) -> complex:
    return matrix_element(psi, O, psi) / psi.norm() ** 2


def position_mean(psi: Wavefunction) -> float:
    w = np.abs(psi.samples) ** 2
    return float(np.sum(psi.grid.x * w) / np.sum(w))


def ccr_residual(grid: Grid, hbar_signed: float, psi: Wavefunction, window: float = 0.5) -> float:
    """Relative L2 error of ``[x, p] psi - i hbar psi`` on the central window.

    The canonical commutator cannot hold as a finite matrix identity (its
    trace vanishes), so it is checked only on states localized well inside
    the grid.
    """
    if psi.grid != grid:
        raise ValueError("wavefunction lives on a different grid")
    if not 0 < window <= 1:
        raise ValueError("window must be in (0, 1]")
    inside = np.abs(grid.x) <= window * grid.length / 2
    outside_max = float(np.max(np.abs(psi.samples[~inside]), initial=0.0))
    if outside_max >= 1e-8:
        raise SupportError(
            f"|psi| reaches {outside_max:.2e} outside the central {window:g} window"
        )
    x = build_position(grid).matrix
    p = build_momentum(grid, hbar_signed).matrix
    v = psi.samples
    comm_v = x @ (p @ v) - p @ (x @ v)
    target = 1j * hbar_signed * v
    err = np.linalg.norm((comm_v - target)[inside])
    return float(err / np.linalg.norm(target[inside]))


def k_transform_operator(O: GeneralOperator) -> GeneralOperator:
    return conjugate_by(complex_conjugation(O.n), O)


def hamiltonian_action(grid: Grid, spec: HamiltonianSpec, t: float, v: np.ndarray) -> np.ndarray:
    """``H(t) @ v`` without assembling the matrix."""
    return _SpecHamiltonian(grid, spec).at(t).apply(np.asarray(v, dtype=complex))


def schrodinger_residual(states: list[Wavefunction], spec: HamiltonianSpec, dt: float) -> float:
    """Worst relative defect of consecutive states in the discrete equation
    ``i hbar (psi' - psi)/dt = H(t_mid) (psi' + psi)/2``, using the sign of
    hbar carried by ``spec``."""
    if len(states) < 2:
        return 0.0
    grid = states[0].grid
    ham = _SpecHamiltonian(grid, spec)
    worst = 0.0
    for k in range(len(states) - 1):
        a, b = states[k].samples, states[k + 1].samples
        rhs = ham.at((k + 0.5) * dt).apply((a + b) / 2)
        lhs = 1j * spec.hbar_signed * (b - a) / dt
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs)))
    return worst
