"""Truncated harmonic-oscillator representation of q and p, and the
symmetric (Weyl) quantization of phase-space polynomials of degree <= 2."""

from __future__ import annotations

import numpy as np

from .operators import GeneralOperator, commutator
from .phase_space import PhasePolynomial, poisson_bracket


def ladder(n: int) -> np.ndarray:
    """Annihilation operator truncated to the lowest ``n`` number states."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1)


def oscillator_qp(n: int, hbar_signed: float = 1.0) -> tuple[GeneralOperator, GeneralOperator]:
    """``(Q, P)`` with ``[Q, P] = i hbar_signed`` away from the truncation edge.

    Q is real; P is purely imaginary, so negative hbar is realized by complex
    conjugation of the positive-hbar P.
    """
    if n < 2:
        raise ValueError("need at least two levels")
    if hbar_signed == 0:
        raise ValueError("hbar_signed must be nonzero")
    a = ladder(n)
    scale = np.sqrt(abs(hbar_signed) / 2)
    q = scale * (a + a.T)
    p = np.sign(hbar_signed) * 1j * scale * (a.T - a)
    return GeneralOperator(q), GeneralOperator(p)


def quantize(f: PhasePolynomial, q: GeneralOperator, p: GeneralOperator) -> GeneralOperator:
    """Symmetric ordering: ``qp -> (QP + PQ)/2``; other monomials are
    unambiguous up to degree two."""
    if f.dimension != 1:
        raise ValueError("only one degree of freedom is supported")
    if f.degree > 2:
        raise ValueError("quantization is only defined here for degree <= 2")
    n = q.n
    Q, P = q.matrix, p.matrix
    images = {
        (0, 0): np.eye(n, dtype=complex),
        (1, 0): Q,
        (0, 1): P,
        (2, 0): Q @ Q,
        (0, 2): P @ P,
        (1, 1): (Q @ P + P @ Q) / 2,
    }
    out = np.zeros((n, n), dtype=complex)
    for exps, coef in f.terms.items():
        out = out + float(coef) * images[exps]
    return GeneralOperator(out)


def interior(n: int, window: float) -> slice:
    return slice(0, max(1, int(window * n)))


def dirac_residual(
    f: PhasePolynomial, g: PhasePolynomial, n: int = 200, hbar_signed: float = 1.0, window: float = 0.9
) -> float:
    """Max entry, on the leading ``window`` block, of
    ``[Q(f), Q(g)] - i hbar Q({f, g})``."""
    q, p = oscillator_qp(n, hbar_signed)
    lhs = commutator(quantize(f, q, p), quantize(g, q, p)).matrix
    rhs = 1j * hbar_signed * quantize(poisson_bracket(f, g), q, p).matrix
    s = interior(n, window)
    return float(np.max(np.abs((lhs - rhs)[s, s])))


def quadratic_basis() -> dict[str, PhasePolynomial]:
    q, p = PhasePolynomial.q(), PhasePolynomial.p()
    return {
        "1": PhasePolynomial.constant(1, 1),
        "q": q,
        "p": p,
        "q2": q * q,
        "p2": p * p,
        "qp": q * p,
    }
