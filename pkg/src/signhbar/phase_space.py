"""Exact polynomial algebra on a 2d-dimensional phase space.

Polynomials are stored as a mapping from exponent tuples
``(q_1..q_d, p_1..p_d)`` to nonzero :class:`fractions.Fraction`
coefficients, so bracket identities are checked by exact equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]
    coefficient: Fraction

    def __post_init__(self) -> None:
        if len(self.exponents) % 2 or not self.exponents:
            raise ValueError("exponent vector must have even length 2d >= 2")
        if any(k < 0 for k in self.exponents):
            raise ValueError("exponents must be non-negative")

    @property
    def dimension(self) -> int:
        return len(self.exponents) // 2

    @property
    def degree(self) -> int:
        return sum(self.exponents)


@dataclass(frozen=True)
class PhasePolynomial:
    dimension: int
    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in self.terms.items():
            exps = tuple(int(k) for k in exps)
            if len(exps) != 2 * self.dimension:
                raise ValueError(f"exponent vector {exps} does not match dimension {self.dimension}")
            if any(k < 0 for k in exps):
                raise ValueError("exponents must be non-negative")
            coef = Fraction(coef)
            if coef:
                clean[exps] = clean.get(exps, Fraction(0)) + coef
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "terms", clean)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, dimension: int) -> PhasePolynomial:
        return cls(dimension, {})

    @classmethod
    def constant(cls, dimension: int, value: Scalar) -> PhasePolynomial:
        return cls(dimension, {(0,) * (2 * dimension): Fraction(value)})

    @classmethod
    def q(cls, i: int = 1, dimension: int = 1) -> PhasePolynomial:
        """Coordinate ``q_i`` (1-based)."""
        exps = [0] * (2 * dimension)
        exps[i - 1] = 1
        return cls(dimension, {tuple(exps): Fraction(1)})

    @classmethod
    def p(cls, i: int = 1, dimension: int = 1) -> PhasePolynomial:
        """Momentum ``p_i`` (1-based)."""
        exps = [0] * (2 * dimension)
        exps[dimension + i - 1] = 1
        return cls(dimension, {tuple(exps): Fraction(1)})

    @classmethod
    def from_monomials(cls, dimension: int, monomials: Iterable[Monomial]) -> PhasePolynomial:
        terms: dict[tuple[int, ...], Fraction] = {}
        for mono in monomials:
            if mono.dimension != dimension:
                raise DimensionMismatchError("monomial dimension differs from polynomial dimension")
            terms[mono.exponents] = terms.get(mono.exponents, Fraction(0)) + mono.coefficient
        return cls(dimension, terms)

    # -- queries --------------------------------------------------------

    def monomials(self) -> list[Monomial]:
        return [Monomial(e, self.terms[e]) for e in _sorted_exponents(self.terms)]

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_abs_coefficient(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def evaluate(self, point: Iterable[Scalar]) -> Fraction:
        values = [Fraction(v) for v in point]
        if len(values) != 2 * self.dimension:
            raise DimensionMismatchError("point has wrong length")
        total = Fraction(0)
        for exps, coef in self.terms.items():
            term = coef
            for v, k in zip(values, exps):
                term *= v**k
            total += term
        return total

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: PhasePolynomial) -> None:
        if self.dimension != other.dimension:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.dimension} vs {other.dimension}"
            )

    def _coerce(self, other) -> PhasePolynomial:
        if isinstance(other, PhasePolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return PhasePolynomial.constant(self.dimension, other)
        return NotImplemented

    def __add__(self, other) -> PhasePolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for exps, coef in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coef
        return PhasePolynomial(self.dimension, terms)

    __radd__ = __add__

    def __neg__(self) -> PhasePolynomial:
        return PhasePolynomial(self.dimension, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> PhasePolynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> PhasePolynomial:
        return (-self) + other

    def __mul__(self, other) -> PhasePolynomial:
        if isinstance(other, (int, Fraction)):
            return PhasePolynomial(self.dimension, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return PhasePolynomial(self.dimension, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> PhasePolynomial:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = PhasePolynomial.constant(self.dimension, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PhasePolynomial.constant(self.dimension, other)
        if not isinstance(other, PhasePolynomial):
            return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dimension, frozenset(self.terms.items())))

    def derivative(self, var: int) -> PhasePolynomial:
        """Partial derivative with respect to the variable at index ``var``
        of the exponent vector (0..d-1 are q's, d..2d-1 are p's)."""
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in self.terms.items():
            k = exps[var]
            if k == 0:
                continue
            new = list(exps)
            new[var] = k - 1
            terms[tuple(new)] = coef * k
        return PhasePolynomial(self.dimension, terms)

    def dq(self, i: int) -> PhasePolynomial:
        return self.derivative(i - 1)

    def dp(self, i: int) -> PhasePolynomial:
        return self.derivative(self.dimension + i - 1)

    def render(self) -> str:
        """Text form like ``4*q^1*p^2``; terms ordered by total degree, then
        lexicographically by exponent vector."""
        if not self.terms:
            return "0"
        names = _variable_names(self.dimension)
        parts = []
        for exps in _sorted_exponents(self.terms):
            coef = self.terms[exps]
            factors = [f"{names[i]}^{k}" for i, k in enumerate(exps) if k]
            head = str(coef)
            if factors:
                parts.append("*".join([head] + factors))
            else:
                parts.append(head)
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = render


def _sorted_exponents(terms: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return sorted(terms, key=lambda e: (sum(e), e))


def _variable_names(d: int) -> list[str]:
    if d == 1:
        return ["q", "p"]
    return [f"q{i}" for i in range(1, d + 1)] + [f"p{i}" for i in range(1, d + 1)]


def poisson_bracket(f: PhasePolynomial, g: PhasePolynomial) -> PhasePolynomial:
    if f.dimension != g.dimension:
        raise DimensionMismatchError(f"dimension mismatch: {f.dimension} vs {g.dimension}")
    out = PhasePolynomial.zero(f.dimension)
    for i in range(1, f.dimension + 1):
        out = out + f.dq(i) * g.dp(i) - g.dq(i) * f.dp(i)
    return out


def jacobi_residual(f: PhasePolynomial, g: PhasePolynomial, h: PhasePolynomial) -> PhasePolynomial:
    pb = poisson_bracket
    return pb(f, pb(g, h)) + pb(h, pb(f, g)) + pb(g, pb(h, f))


def bracket_bilinearity_residual(
    c1: Scalar, f1: PhasePolynomial, c2: Scalar, f2: PhasePolynomial, g: PhasePolynomial
) -> PhasePolynomial:
    c1, c2 = Fraction(c1), Fraction(c2)
    pb = poisson_bracket
    if not (f1.dimension == f2.dimension == g.dimension):
        raise DimensionMismatchError("dimension mismatch")
    return pb(f1 * c1 + f2 * c2, g) - pb(f1, g) * c1 - pb(f2, g) * c2


def random_polynomial(
    rng: random.Random, dimension: int, max_degree: int = 3, max_terms: int = 6
) -> PhasePolynomial:
    """Random polynomial with small rational coefficients."""
    nvars = 2 * dimension
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        exps = [0] * nvars
        for _ in range(deg):
            exps[rng.randrange(nvars)] += 1
        coef = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + coef
    return PhasePolynomial(dimension, terms)
