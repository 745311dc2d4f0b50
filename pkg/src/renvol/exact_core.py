"""Exact evaluation of the closed formulas for tubes over polarized KE manifolds.

Everything here is rational arithmetic on :class:`fractions.Fraction`; powers
of pi are carried symbolically by :class:`PiValue` so that identities between
formulas can be checked with zero tolerance.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath

Rational = Fraction

__all__ = [
    "Rational",
    "PiValue",
    "ModelParams",
    "NoKEMetricWarning",
    "as_rational",
    "eval_renvol_formula",
    "eval_total_qprime",
    "eval_chern_integral_general",
    "eval_chern_integral_tube",
    "check_decomposition",
]


class NoKEMetricWarning(UserWarning):
    """The formula was evaluated at beta >= 1, outside the geometric range."""


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: an exact path must never start from a rounded value.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


@dataclass(frozen=True)
class PiValue:
    """The exact quantity ``coeff * pi**pi_power``."""

    coeff: Fraction
    pi_power: int

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_rational(self.coeff))
        if not isinstance(self.pi_power, int) or self.pi_power < 0:
            raise ValueError(f"pi_power must be a non-negative int, got {self.pi_power!r}")

    def _check_grade(self, other: PiValue) -> None:
        if self.pi_power != other.pi_power:
            raise ValueError(
                f"cannot add pi^{self.pi_power} and pi^{other.pi_power} values")

    def __add__(self, other):
        if not isinstance(other, PiValue):
            return NotImplemented
        self._check_grade(other)
        return PiValue(self.coeff + other.coeff, self.pi_power)

    def __sub__(self, other):
        if not isinstance(other, PiValue):
            return NotImplemented
        self._check_grade(other)
        return PiValue(self.coeff - other.coeff, self.pi_power)

    def __neg__(self):
        return PiValue(-self.coeff, self.pi_power)

    def __mul__(self, other):
        if isinstance(other, PiValue):
            return PiValue(self.coeff * other.coeff, self.pi_power + other.pi_power)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PiValue(self.coeff * other, self.pi_power)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PiValue(self.coeff / other, self.pi_power)
        return NotImplemented

    def ratio(self, other: PiValue) -> Fraction:
        """Exact quotient of two values of the same pi grade."""
        self._check_grade(other)
        return self.coeff / other.coeff

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __bool__(self):
        return not self.is_zero()

    def to_mpf(self, precision: int = 256) -> mpmath.mpf:
        with mpmath.workprec(precision):
            return mpmath.mpf(self.coeff.numerator) / self.coeff.denominator * mpmath.pi ** self.pi_power

    def decimal(self, digits: int = 30) -> str:
        bits = int(digits * 3.33) + 16
        with mpmath.workprec(bits):
            return mpmath.nstr(self.to_mpf(bits), digits)

    def __str__(self):
        c = self.coeff
        head = str(c) if c.denominator == 1 else f"({c})"
        if self.pi_power == 0:
            return head
        return f"{head}·π^{self.pi_power}"


@dataclass(frozen=True)
class ModelParams:
    """Data of a polarized KE base: dimension ``n``, Einstein constant, Vol(L)."""

    n: int
    beta: Fraction
    volL: Fraction

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise ValueError(f"n must be a non-negative int, got {self.n!r}")
        object.__setattr__(self, "beta", as_rational(self.beta))
        object.__setattr__(self, "volL", as_rational(self.volL))
        if self.volL <= 0:
            raise ValueError(f"volL must be positive, got {self.volL}")

    @property
    def ke_exists(self) -> bool:
        return self.beta < 1


def _warn_if_no_metric(p: ModelParams) -> None:
    if not p.ke_exists:
        warnings.warn(
            f"beta = {p.beta} >= 1: no complete Kahler-Einstein metric on the tube; "
            "value is algebraic only", NoKEMetricWarning, stacklevel=3)


def eval_renvol_formula(p: ModelParams) -> PiValue:
    """Closed-form renormalized volume of the tube.

    ``(2 pi)^(n+1) [ (-beta/(n+1))^(n+1) / (n+1)! - ((1-beta)/(n+2))^(n+1) ] Vol(L)``
    """
    _warn_if_no_metric(p)
    m = p.n + 1
    bracket = (-p.beta / m) ** m / factorial(m) - ((1 - p.beta) / (p.n + 2)) ** m
    return PiValue(2 ** m * bracket * p.volL, m)


def eval_total_qprime(p: ModelParams) -> PiValue:
    """Total Q-prime curvature of the boundary, ``2 (n!)^2 (2 pi beta/(n+1))^(n+1) Vol(L)``."""
    m = p.n + 1
    coeff = 2 * factorial(p.n) ** 2 * (2 * p.beta / m) ** m * p.volL
    return PiValue(coeff, m)


def eval_chern_integral_general(n: int, beta, chern_number_N) -> Fraction:
    """``(beta - 1)^(n+1) * chern_number_N``, where ``chern_number_N`` is the
    self-intersection number of the normal bundle of the divisor."""
    beta = as_rational(beta)
    return (beta - 1) ** (n + 1) * as_rational(chern_number_N)


def eval_chern_integral_tube(p: ModelParams) -> Fraction:
    # The divisor is the zero section with normal bundle L^{-1}.
    return eval_chern_integral_general(p.n, p.beta, (-1) ** p.n * p.volL)


def check_decomposition(p: ModelParams) -> PiValue:
    """Residual of the Q-prime/Chern decomposition against the closed formula.

    Zero for every parameter set; anything else is a bug.
    """
    n, m = p.n, p.n + 1
    qprime_weight = Fraction((-1) ** m, 2 * factorial(n) ** 2 * factorial(m))
    chern_weight = PiValue(Fraction(2, n + 2) ** m, m)
    rhs = eval_total_qprime(p) * qprime_weight + chern_weight * eval_chern_integral_tube(p)
    return eval_renvol_formula(p) - rhs
