"""Dense linear and antilinear operators on C^n.

An operator is a matrix paired with a parity flag. A linear operator acts
as ``M @ v``; an antilinear one as ``M @ conj(v)``, so complex conjugation
itself is ``GeneralOperator(I, antilinear=True)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIMENSION = 4096
UNITARITY_TOL = 1e-10


class DimensionError(ValueError):
    pass


class ParityError(ValueError):
    pass


class NotAntiunitaryError(ValueError):
    def __init__(self, residual: float):
        super().__init__(f"operator is not (anti)unitary: residual {residual:.3e}")
        self.residual = residual


def _as_matrix(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"operator matrix must be square, got shape {m.shape}")
    if m.shape[0] > MAX_DIMENSION:
        raise DimensionError(f"dimension {m.shape[0]} exceeds cap {MAX_DIMENSION}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator matrix has non-finite entries")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class GeneralOperator:
    matrix: np.ndarray
    antilinear: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _as_matrix(self.matrix))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def parity(self) -> str:
        return "antilinear" if self.antilinear else "linear"

    def __call__(self, v) -> np.ndarray:
        return apply(self, v)

    def __matmul__(self, other: GeneralOperator) -> GeneralOperator:
        return compose(self, other)

    def __add__(self, other: GeneralOperator) -> GeneralOperator:
        _same_parity(self, other)
        return GeneralOperator(self.matrix + other.matrix, self.antilinear)

    def __sub__(self, other: GeneralOperator) -> GeneralOperator:
        _same_parity(self, other)
        return GeneralOperator(self.matrix - other.matrix, self.antilinear)

    def __neg__(self) -> GeneralOperator:
        return GeneralOperator(-self.matrix, self.antilinear)

    def scale(self, c: complex) -> GeneralOperator:
        """Left multiplication by the scalar ``c`` (``c * A``)."""
        return GeneralOperator(c * self.matrix, self.antilinear)

    def equals(self, other: GeneralOperator, tol: float = 1e-12) -> bool:
        return self.antilinear == other.antilinear and distance(self, other) <= tol

    def __repr__(self) -> str:
        return f"GeneralOperator(n={self.n}, {self.parity})"


def _same_parity(a: GeneralOperator, b: GeneralOperator) -> None:
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    if a.antilinear != b.antilinear:
        raise ParityError("cannot add operators of different parity")


def identity(n: int) -> GeneralOperator:
    return GeneralOperator(np.eye(n), False)


def complex_conjugation(n: int) -> GeneralOperator:
    """The antiunitary K acting as entrywise conjugation."""
    return GeneralOperator(np.eye(n), True)


def distance(a: GeneralOperator, b: GeneralOperator) -> float:
    """Max absolute entry of the matrix difference."""
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    return float(np.max(np.abs(a.matrix - b.matrix), initial=0.0))


def apply(A: GeneralOperator, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (A.n,):
        raise DimensionError(f"state of shape {v.shape} does not match operator dimension {A.n}")
    return A.matrix @ (np.conj(v) if A.antilinear else v)


def inner_product(phi, psi) -> complex:
    """``sum(conj(phi) * psi)``: antilinear in the first slot."""
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if phi.shape != psi.shape or phi.ndim != 1:
        raise DimensionError(f"state shapes differ: {phi.shape} vs {psi.shape}")
    return complex(np.vdot(phi, psi))


def adjoint(A: GeneralOperator) -> GeneralOperator:
    # antilinear case: (phi, A psi) = (A^dag phi, psi)^* forces the plain transpose
    if A.antilinear:
        return GeneralOperator(A.matrix.T, True)
    return GeneralOperator(A.matrix.conj().T, False)


def compose(A: GeneralOperator, B: GeneralOperator) -> GeneralOperator:
    """The operator ``v -> A(B(v))``."""
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {B.n}")
    right = np.conj(B.matrix) if A.antilinear else B.matrix
    return GeneralOperator(A.matrix @ right, A.antilinear != B.antilinear)


def commutator(F: GeneralOperator, G: GeneralOperator) -> GeneralOperator:
    if F.antilinear or G.antilinear:
        raise ParityError("commutator is defined only for linear operators")
    if F.n != G.n:
        raise DimensionError(f"dimension mismatch: {F.n} vs {G.n}")
    return GeneralOperator(F.matrix @ G.matrix - G.matrix @ F.matrix, False)


def antiunitarity_residual(A: GeneralOperator) -> float:
    """Max entry of ``A^dag A - I``; zero for unitary and antiunitary A."""
    prod = compose(adjoint(A), A).matrix
    return float(np.max(np.abs(prod - np.eye(A.n)), initial=0.0))


def conjugate_by(A: GeneralOperator, O: GeneralOperator, tol: float = UNITARITY_TOL) -> GeneralOperator:
    """``A O A^dag`` for (anti)unitary A and linear O."""
    if O.antilinear:
        raise ParityError("conjugate_by expects a linear observable")
    residual = antiunitarity_residual(A)
    if residual > tol:
        raise NotAntiunitaryError(residual)
    return compose(compose(A, O), adjoint(A))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_antiunitary(n: int, seed=None) -> GeneralOperator:
    """``U K`` with U a Haar-distributed unitary from a seeded generator."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return GeneralOperator(random_unitary(n, rng), True)


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_hermitian(n: int, rng: np.random.Generator) -> GeneralOperator:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return GeneralOperator((z + z.conj().T) / 2, False)
