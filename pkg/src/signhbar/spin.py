"""Spin-1/2: Pauli matrices, s = (hbar/2) sigma, and the K and Theta transforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid1d import Wavefunction
from .operators import GeneralOperator, commutator, complex_conjugation, conjugate_by

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

K2 = complex_conjugation(2)
THETA = GeneralOperator(SIGMA_Y, antilinear=True)


@dataclass(frozen=True)
class SpinTriple:
    s_x: GeneralOperator
    s_y: GeneralOperator
    s_z: GeneralOperator
    hbar_signed: float

    def components(self) -> tuple[GeneralOperator, GeneralOperator, GeneralOperator]:
        return (self.s_x, self.s_y, self.s_z)

    def map(self, fn) -> SpinTriple:
        return SpinTriple(*(fn(s) for s in self.components()), self.hbar_signed)


def build_spin(hbar_signed: float = 1.0) -> SpinTriple:
    if hbar_signed == 0:
        raise ValueError("hbar_signed must be nonzero")
    return SpinTriple(*(GeneralOperator(hbar_signed / 2 * s) for s in PAULI), hbar_signed)


def k_transform_spin(triple: SpinTriple) -> SpinTriple:
    return triple.map(lambda s: conjugate_by(K2, s))


def theta_transform_spin(triple: SpinTriple) -> SpinTriple:
    return triple.map(lambda s: conjugate_by(THETA, s))


def commutator_residual(triple: SpinTriple, hbar_effective: float) -> float:
    """Max entry of ``[s_a, s_b] - i hbar_effective s_c`` over cyclic (a, b, c)."""
    s = triple.components()
    worst = 0.0
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        diff = commutator(s[a], s[b]).matrix - 1j * hbar_effective * s[c].matrix
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def spinor_theta(up: Wavefunction, down: Wavefunction) -> tuple[Wavefunction, Wavefunction]:
    """Apply ``sigma_y K`` pointwise to a two-component spinor field."""
    if up.grid != down.grid:
        raise ValueError("spinor components live on different grids")
    stacked = np.vstack([up.samples, down.samples])
    out = SIGMA_Y @ np.conj(stacked)
    return Wavefunction(up.grid, out[0]), Wavefunction(up.grid, out[1])
