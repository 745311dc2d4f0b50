"""Momentum profile of the complete KE metric on the disc bundle.

For an S^1-invariant potential ``F(t)`` with ``t = log h(v, v)`` on the dual
line bundle, write ``tau = F'(t)`` and ``V(tau) = F''(t)``.  The Einstein
condition with constant ``-(n+2)`` becomes the linear ODE

    V'(tau) + n V(tau) / tau = beta + (n + 2) tau,

whose solutions are ``V = tau^2 + beta tau/(n+1) + C tau^-n``.  Smooth
closing over the zero section (``V(tau0) = 0``, ``V'(tau0) = 1``) fixes
``tau0 = (1 - beta)/(n + 2)`` and ``C``.  The potential as a function of the
momentum is ``F(tau) = int s / V(s) ds``; ``rho = -exp(-F)`` is the defining
function whose sublevel sets cut out the domains being renormalized.

Numerics use :mod:`mpmath` at an explicit binary precision.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath

from .errors import ConvergenceError, NoKEMetricError
from .exact_core import as_rational
from .series import TruncatedSeries

MIN_PRECISION = 64

__all__ = [
    "Profile",
    "ScanResult",
    "build_profile",
    "profile_ode_residual",
    "positivity_scan",
    "tail_coefficients",
    "potential_F",
    "potential_F_asymptotic",
    "tau_of_eps",
    "eps_max",
    "MIN_PRECISION",
]


@dataclass(frozen=True)
class Profile:
    n: int
    beta: Fraction
    tau0: Fraction
    capC: Fraction

    def V(self, tau):
        """Exact for Fraction input, numeric for mpf input."""
        return tau * tau + self.beta * tau / (self.n + 1) + self.capC / tau ** self.n

    def dV(self, tau):
        return 2 * tau + self.beta / (self.n + 1) - self.n * self.capC / tau ** (self.n + 1)

    def V_mp(self, tau):
        b = _mpq(self.beta) / (self.n + 1)
        return tau * tau + b * tau + _mpq(self.capC) / tau ** self.n


class ScanResult(NamedTuple):
    ok: bool
    witness: Fraction | None


def _mpq(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def _mp(x) -> mpmath.mpf:
    """mpf from int, float, str, mpf or Fraction, at the ambient precision."""
    return _mpq(x) if isinstance(x, Fraction) else mpmath.mpf(x)


def _round(x, precision: int) -> mpmath.mpf:
    with mpmath.workprec(precision):
        return +x


def _check_precision(precision: int) -> None:
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits, got {precision}")


def build_profile(n: int, beta) -> Profile:
    """Solve the capped momentum ODE exactly.

    Raises :class:`NoKEMetricError` for ``beta >= 1``.
    """
    beta = as_rational(beta)
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a non-negative int, got {n!r}")
    if beta >= 1:
        raise NoKEMetricError(f"beta = {beta} >= 1: the tube carries no complete KE metric")
    tau0 = (1 - beta) / (n + 2)
    capC = -tau0 ** n * (beta / (n + 1) * tau0 + tau0 ** 2)
    return Profile(n, beta, tau0, capC)


def profile_ode_residual(p: Profile, tau) -> Fraction:
    """``V' + n V / tau - beta - (n+2) tau``; exactly zero for a valid profile."""
    tau = as_rational(tau)
    if tau == 0:
        raise ZeroDivisionError("the momentum ODE is singular at tau = 0")
    return p.dV(tau) + p.n * p.V(tau) / tau - p.beta - (p.n + 2) * tau


def positivity_scan(p: Profile, samples: int = 1000) -> ScanResult:
    """Check ``V > 0`` on a log-spaced rational grid of ``(tau0, tau0 + 1e6]``.

    Offsets from ``tau0`` run from ``1e-9`` to ``1e6``.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    for i in range(samples):
        expo = -9 + 15 * i / (samples - 1)
        tau = p.tau0 + Fraction(10.0 ** expo) if i < samples - 1 else p.tau0 + 10 ** 6
        if p.V(tau) <= 0:
            return ScanResult(False, tau)
    return ScanResult(True, None)


@functools.lru_cache(maxsize=256)
def tail_coefficients(p: Profile, K: int) -> tuple[Fraction, ...]:
    """Exact ``a_1..a_K`` with ``F(tau) = log tau + sum_k a_k tau^-k``.

    In ``u = 1/tau``: ``tau / V(tau) = u / (1 + b u + C u^(n+2))`` with
    ``b = beta/(n+1)``; if that equals ``sum c_k u^(k+1)`` then ``a_k = -c_k/k``.
    """
    b = p.beta / (p.n + 1)
    denom = [Fraction(0)] * (K + 1)
    denom[0] = Fraction(1)
    if K >= 1:
        denom[1] += b
    if p.n + 2 <= K:
        denom[p.n + 2] += p.capC
    c = TruncatedSeries(denom, 0, K + 1).inverse()
    return tuple(-c.coeff(k) / k for k in range(1, K + 1))


def _root_radius(p: Profile) -> mpmath.mpf:
    """Fujiwara bound on the roots of ``s^(n+2) + b s^(n+1) + C``.

    The Laurent tail of ``s / V(s)`` converges outside this radius.
    """
    b = abs(_mpq(p.beta / (p.n + 1)))
    c = abs(_mpq(p.capC)) / 2
    r = 2 * max(b, c ** (mpmath.mpf(1) / (p.n + 2)))
    return max(r, _mpq(p.tau0))


def _series_plan(p: Profile, precision: int) -> tuple[mpmath.mpf, int]:
    # At |tau| >= 8R the k-th tail term is below 8^-k; 256 bits needs ~90 terms.
    K = math.ceil(precision / 3) + 16
    return 8 * _root_radius(p), K


def potential_F_asymptotic(p: Profile, tau, precision: int = 256, K: int | None = None) -> mpmath.mpf:
    """``log tau + sum_{k<=K} a_k tau^-k``, valid for ``tau`` far from the roots of V."""
    _check_precision(precision)
    if K is None:
        K = _series_plan(p, precision)[1]
    a = tail_coefficients(p, K)
    with mpmath.workprec(precision + 16):
        tau = _mp(tau)
        u = 1 / tau
        acc = mpmath.mpf(0)
        for ak in reversed(a):
            acc = (acc + _mpq(ak)) * u
        out = mpmath.log(tau) + acc
    return _round(out, precision)


def _quad_integrand_points(p: Profile, lo, hi) -> list:
    # Geometric spacing in the distance to tau0 resolves the pole of s/V(s) there.
    t0 = _mpq(p.tau0)
    d_lo, d_hi = lo - t0, hi - t0
    pieces = max(1, int(mpmath.ceil(mpmath.log(d_hi / d_lo, 4))))
    ratio = (d_hi / d_lo) ** (mpmath.mpf(1) / pieces)
    pts = [t0 + d_lo * ratio ** j for j in range(pieces)] + [hi]
    pts[0] = lo
    return pts


def potential_F(p: Profile, tau, precision: int = 256, anchor=None) -> mpmath.mpf:
    """Potential in the asymptotically anchored gauge.

    ``F(tau) = F_asym(T) - int_tau^T s / V(s) ds`` with ``T`` beyond the
    convergence radius of the Laurent tail; for ``tau >= T`` the tail is summed
    directly.  ``anchor`` overrides ``T`` (a larger anchor forces quadrature).
    """
    _check_precision(precision)
    T, K = _series_plan(p, precision)
    with mpmath.workprec(precision + 16):
        tau = _mp(tau)
        if tau <= _mpq(p.tau0):
            raise ValueError(f"tau must exceed tau0 = {p.tau0}")
        if anchor is not None:
            T = max(_mp(anchor), T)
        if tau >= T:
            return potential_F_asymptotic(p, tau, precision, K)
        f_T = potential_F_asymptotic(p, T, precision, K)
        pts = _quad_integrand_points(p, tau, T)
        integral, err = mpmath.quad(lambda s: s / p.V_mp(s), pts,
                                    method="gauss-legendre", error=True)
        tol = mpmath.mpf(2) ** -(precision - 8) * max(1, abs(f_T - integral))
        if err > tol:
            raise ConvergenceError(f"quadrature error {mpmath.nstr(err, 5)} exceeds {mpmath.nstr(tol, 5)}")
        out = f_T - integral
    return _round(out, precision)


def _tau_edge(p: Profile) -> mpmath.mpf:
    return _mpq(p.tau0) * (1 + mpmath.mpf(2) ** -10)


def eps_max(p: Profile, precision: int = 256) -> mpmath.mpf:
    """Largest admissible eps: ``exp(-F)`` at ``tau0 (1 + 2^-10)``, the near-cap
    edge of the numeric domain."""
    with mpmath.workprec(precision + 16):
        out = mpmath.exp(-potential_F(p, _tau_edge(p), precision))
    return _round(out, precision)


def tau_of_eps(p: Profile, eps, precision: int = 256, anchor=None) -> mpmath.mpf:
    """Solve ``F(tau) = -log eps`` by bracketing, bisection, then Newton with
    ``dF/dtau = tau / V``."""
    _check_precision(precision)
    with mpmath.workprec(precision + 16):
        eps = _mp(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        target = -mpmath.log(eps)

        def g(t):
            return potential_F(p, t, precision, anchor) - target

        lo = _tau_edge(p)
        if g(lo) >= 0:
            raise ValueError(f"eps = {mpmath.nstr(eps, 8)} exceeds eps_max")
        hi = max(2 / eps, 2 * lo)
        for _ in range(200):
            if g(hi) > 0:
                break
            lo, hi = hi, 2 * hi
        else:
            raise ConvergenceError("could not bracket the level set (gauge inconsistency?)")

        # Geometric bisection until Newton is safe.
        for _ in range(8):
            mid = mpmath.sqrt(lo * hi)
            if g(mid) > 0:
                hi = mid
            else:
                lo = mid

        tol = mpmath.mpf(2) ** -(precision - 8)
        t = mpmath.sqrt(lo * hi)
        for _ in range(200):
            gt = g(t)
            if gt > 0:
                hi = t
            else:
                lo = t
            step = gt * p.V_mp(t) / t
            t_new = t - step
            if not lo < t_new < hi:
                t_new = (lo + hi) / 2
            if abs(t_new - t) <= tol * abs(t_new):
                return _round(t_new, precision)
            t = t_new
        raise ConvergenceError("Newton iteration for tau_of_eps did not converge")
