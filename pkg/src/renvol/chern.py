"""Localized top Chern number of the canonical bundle of the tube.

The curvature of the canonical bundle of the total space of ``L^-1`` is
``(1 - beta)`` times the pullback of the curvature of ``L``.  Replacing the
global potential ``t = log h(v, v)`` by ``psi(t)`` with ``psi'`` switching from
1 to 0 on ``[t1, t2]`` gives a compactly supported representative

    Pi = (1 - beta)/(2 pi) (psi' p^*omega + psi'' dt ^ d^c t).

After integrating over the circle fibres and the base, only the 1-D integral
``int (n+1) psi'^n psi'' dt = -1`` is left; it is computed numerically here.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

import mpmath

from .exact_core import ModelParams, as_rational
from .profile import _check_precision, _mp, _mpq

SHAPES = ("smoothstep", "exp")

__all__ = [
    "SHAPES",
    "Cutoff",
    "AlphaRecord",
    "CutoffReport",
    "build_cutoff",
    "alpha_record",
    "cutoff_integrand",
    "localized_integral",
    "cutoff_independence",
    "gauss_legendre",
    "composite_gauss_legendre",
]


@functools.lru_cache(maxsize=None)
def _smoothstep_coeffs(order: int) -> tuple[Fraction, ...]:
    # S_N(x) = x^(N+1) sum_k C(N+k, k) C(2N+1, N-k) (-x)^k, C^N at both ends.
    N = order
    cs = [Fraction(0)] * (2 * N + 2)
    for k in range(N + 1):
        cs[N + 1 + k] = Fraction((-1) ** k * comb(N + k, k) * comb(2 * N + 1, N - k))
    return tuple(cs)


@dataclass(frozen=True)
class Cutoff:
    """``psi'`` equal to 1 for ``t <= t1``, 0 for ``t >= t2``, monotone between.

    ``smoothstep`` of degree ``d`` is the polynomial step of class ``C^(d-1)``
    (degree 2 is the cubic ``3x^2 - 2x^3``); ``exp`` is the ``C^infinity`` step
    built from ``exp(-1/x)`` and ignores ``degree``.
    """

    t1: Fraction
    t2: Fraction
    degree: int = 3
    shape: str = "smoothstep"

    @property
    def width(self) -> Fraction:
        return self.t2 - self.t1

    def _x(self, t):
        return (t - _mpq(self.t1)) / _mpq(self.width)

    def _step(self, x):
        """S(x) and S'(x) on [0, 1]."""
        if self.shape == "smoothstep":
            cs = _smoothstep_coeffs(self.degree - 1)
            N = self.degree - 1
            s = mpmath.mpf(0)
            for c in reversed(cs):
                s = s * x + _mpq(c)
            ds = (2 * N + 1) * comb(2 * N, N) * (x * (1 - x)) ** N
            return s, ds
        a, b = mpmath.exp(-1 / x), mpmath.exp(-1 / (1 - x))
        den = a + b
        da, db = a / x ** 2, b / (1 - x) ** 2
        return a / den, (da * b + a * db) / den ** 2

    def dpsi(self, t):
        t = _mp(t)
        if t <= _mpq(self.t1):
            return mpmath.mpf(1)
        if t >= _mpq(self.t2):
            return mpmath.mpf(0)
        return 1 - self._step(self._x(t))[0]

    def d2psi(self, t):
        t = _mp(t)
        if t <= _mpq(self.t1) or t >= _mpq(self.t2):
            return mpmath.mpf(0)
        return -self._step(self._x(t))[1] / _mpq(self.width)


def build_cutoff(t1, t2, degree: int = 3, shape: str = "smoothstep") -> Cutoff:
    t1, t2 = as_rational(t1), as_rational(t2)
    if not t1 < t2 < 0:
        raise ValueError(f"need t1 < t2 < 0, got t1 = {t1}, t2 = {t2}")
    if not isinstance(degree, int) or degree < 2:
        raise ValueError(f"degree must be an int >= 2, got {degree!r}")
    if shape not in SHAPES:
        raise ValueError(f"unknown cutoff shape {shape!r}; expected one of {SHAPES}")
    return Cutoff(t1, t2, degree, shape)


@dataclass(frozen=True)
class AlphaRecord:
    """The constant ``mu(xi)`` near the boundary, stored as ``2 pi alpha``."""

    two_pi_alpha: Fraction

    @property
    def canonical_over_normal(self) -> Fraction:
        """``c1(K_D) = (1 - 2 pi alpha) c1(N)``."""
        return 1 - self.two_pi_alpha

    def consistent_with(self, beta) -> bool:
        beta = as_rational(beta)
        return self.two_pi_alpha == 1 - beta and self.canonical_over_normal == beta


def alpha_record(p: ModelParams) -> AlphaRecord:
    # For the tube c1(K_D) = beta c1(N), which forces 2 pi alpha = 1 - beta.
    return AlphaRecord(1 - p.beta)


def cutoff_integrand(n: int, c: Cutoff) -> Callable:
    """``t -> (n+1) psi'(t)^n psi''(t)``, the fibre-integrated top power."""
    def f(t):
        return (n + 1) * c.dpsi(t) ** n * c.d2psi(t)
    return f


def _window(c: Cutoff):
    # A quarter-width margin both sides; see composite_gauss_legendre for why.
    pad = _mpq(c.width) / 4
    return _mpq(c.t1) - pad, _mpq(c.t2) + pad


def localized_integral(p: ModelParams, c: Cutoff, precision: int = 256,
                       integrator: Callable | None = None) -> mpmath.mpf:
    """``int Pi^(n+1)`` over the tube for the cutoff representative.

    The amplitude ``(1 - beta)^(n+1) Vol(L)`` is exact; the ``t``-integral is
    adaptive quadrature split at the window ends, where the integrand loses
    smoothness.  ``integrator(f, a, b)`` may replace the quadrature.
    """
    _check_precision(precision)
    amplitude = (1 - p.beta) ** (p.n + 1) * p.volL
    with mpmath.workprec(precision + 16):
        f = cutoff_integrand(p.n, c)
        a, b = _window(c)
        if integrator is None:
            # Polynomial pieces are integrated exactly by Gauss-Legendre; the flat
            # exp(-1/x) ends need tanh-sinh to converge in reasonable time.
            method = "gauss-legendre" if c.shape == "smoothstep" else "tanh-sinh"
            integral = mpmath.quad(f, [a, _mpq(c.t1), _mpq(c.t2), b], method=method)
        else:
            integral = integrator(f, a, b)
        out = _mpq(amplitude) * integral if amplitude else mpmath.mpf(0)
    with mpmath.workprec(precision):
        return +out


@dataclass
class CutoffReport:
    values: list
    max_deviation: mpmath.mpf
    relative_deviation: mpmath.mpf
    tolerance: mpmath.mpf

    @property
    def ok(self) -> bool:
        return self.relative_deviation < self.tolerance


def cutoff_independence(p: ModelParams, cutoffs: Sequence[Cutoff], precision: int = 256) -> CutoffReport:
    """Spread of :func:`localized_integral` over several cutoffs.

    Passes when the largest pairwise deviation, relative to the largest value,
    is below ``10^-(precision/16)``.
    """
    if len(cutoffs) < 2:
        raise ValueError("need at least two cutoffs to compare")
    values = [localized_integral(p, c, precision) for c in cutoffs]
    with mpmath.workprec(precision):
        dev = max(abs(x - y) for x, y in itertools.combinations(values, 2))
        size = max(abs(v) for v in values)
        rel = dev / size if size else dev
        tol = mpmath.mpf(10) ** (-mpmath.mpf(precision) / 16)
    return CutoffReport(values, dev, rel, tol)


@functools.lru_cache(maxsize=64)
def gauss_legendre(k: int, precision: int = 256) -> tuple:
    """Nodes and weights of the ``k``-point rule on [-1, 1], by Newton on P_k."""
    with mpmath.workprec(precision + 32):
        nodes, weights = [], []
        for i in range(1, k + 1):
            x = mpmath.cos(mpmath.pi * (4 * i - 1) / (4 * k + 2))
            for _ in range(100):
                p0, p1 = mpmath.mpf(1), x
                for j in range(2, k + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = k * (x * p1 - p0) / (x * x - 1) if k > 1 else mpmath.mpf(1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpmath.mpf(2) ** -(precision + 16):
                    break
            p0, p1 = mpmath.mpf(1), x
            for j in range(2, k + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = k * (x * p1 - p0) / (x * x - 1) if k > 1 else mpmath.mpf(1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    return tuple(nodes), tuple(weights)


def composite_gauss_legendre(panels: int, k: int = 6, precision: int = 256) -> Callable:
    """Fixed composite ``k``-point rule with ``panels`` equal panels.

    Panels ignore the window ends, so the kinks of the integrand fall inside
    panels; with the quarter-width margin and an odd panel count divisible by
    3 the kinks sit at panel midpoints, which keeps the observed convergence
    order clean under refinement by 3.
    """
    xs, ws = gauss_legendre(k, precision)

    def integrate(f, a, b):
        h = (b - a) / panels
        total = mpmath.mpf(0)
        for i in range(panels):
            mid = a + (i + mpmath.mpf(1) / 2) * h
            total += sum(w * f(mid + h / 2 * x) for x, w in zip(xs, ws))
        return total * h / 2

    return integrate
