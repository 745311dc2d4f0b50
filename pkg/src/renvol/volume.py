"""Renormalized volume of the tube from the eps-expansion of Vol({rho < -eps}).

Volumes are ``int omega_+^(n+1)`` without the ``1/(n+1)!`` of the Riemannian
volume form.  With this normalization fiber integration gives

    Vol(eps) = (2 pi)^(n+1) Vol(L) (tau_eps^(n+1) - tau0^(n+1)),

where ``tau_eps`` is the momentum on the boundary of the sublevel set.  The
exact route expands ``tau_eps^(n+1)`` by series reversion; the numeric route
solves for ``tau_eps`` on an eps grid and fits a Laurent polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import mpmath

from .errors import IllConditionedError, NoKEMetricError
from .exact_core import ModelParams, PiValue
from .profile import Profile, _check_precision, _mpq, build_profile, tail_coefficients, tau_of_eps
from .series import constant_term_residue, eps_of_u, series_revert

VOLUME_CONVENTION = "Vol = int omega_+^(n+1), no 1/(n+1)! factor"

DEFAULT_EPS_GRID = tuple(10.0 ** (-2 - 5 * i / 11) for i in range(12))

__all__ = [
    "VOLUME_CONVENTION",
    "DEFAULT_EPS_GRID",
    "Expansion",
    "FitResult",
    "TermReport",
    "volume_scale",
    "expansion_exact",
    "exact_constant_residue",
    "vol_of_eps_numeric",
    "sample_volumes",
    "fit_expansion",
    "formula_comparison",
]


@dataclass(frozen=True)
class Expansion:
    """``Vol(eps) / scale = sum_j laurent[j] eps^j + constant + sum_k positive_tail[k-1] eps^k``."""

    n: int
    scale: PiValue
    laurent: dict
    constant: Fraction
    positive_tail: tuple
    order: int

    def __post_init__(self):
        # Pure powers only: the exponent set is exactly -(n+1)..-1 and 1..order.
        if sorted(self.laurent) != list(range(-(self.n + 1), 0)):
            raise ValueError("Laurent part must cover exponents -(n+1)..-1 exactly")
        if len(self.positive_tail) != self.order:
            raise ValueError("positive tail length must equal the truncation order")

    @property
    def renormalized_volume(self) -> PiValue:
        return self.scale * self.constant

    def coefficient(self, k: int) -> Fraction:
        if k < -(self.n + 1):
            return Fraction(0)
        if k < 0:
            return self.laurent[k]
        if k == 0:
            return self.constant
        if k <= self.order:
            return self.positive_tail[k - 1]
        raise IndexError(f"coefficient of eps^{k} beyond truncation order {self.order}")

    def partial_sum(self, eps, precision: int = 256) -> mpmath.mpf:
        """Numeric value of the truncated expansion (including the scale)."""
        with mpmath.workprec(precision + 16):
            eps = mpmath.mpf(eps)
            acc = mpmath.mpf(0)
            for k in range(-(self.n + 1), self.order + 1):
                acc += _mpq(self.coefficient(k)) * eps ** k
            out = acc * self.scale.to_mpf(precision + 16)
        with mpmath.workprec(precision):
            return +out

    def remainder_bound(self, eps) -> mpmath.mpf:
        """Heuristic: size of the last retained term, ``|c_order| eps^order`` times scale."""
        eps = mpmath.mpf(eps)
        return abs(_mpq(self.positive_tail[-1])) * eps ** self.order * self.scale.to_mpf()


@dataclass
class FitResult:
    exponents: tuple
    coefficients: dict
    residual_norm: mpmath.mpf
    condition: mpmath.mpf
    precision: int

    @property
    def constant(self) -> mpmath.mpf:
        return self.coefficients[0]


@dataclass(frozen=True)
class TermReport:
    n: int
    beta: Fraction
    volL: Fraction
    convention: str
    cap_computed: PiValue
    cap_printed: PiValue
    cap_ratio: Fraction | None
    boundary_computed: PiValue
    boundary_printed: PiValue
    boundary_ratio: Fraction | None
    notes: tuple = field(default=())


def volume_scale(p: ModelParams) -> PiValue:
    return PiValue(2 ** (p.n + 1) * p.volL, p.n + 1)


def _require_metric(p: ModelParams) -> Profile:
    if not p.ke_exists:
        raise NoKEMetricError(f"beta = {p.beta} >= 1: no complete KE metric, volume undefined")
    return build_profile(p.n, p.beta)


def expansion_exact(p: ModelParams, order: int | None = None) -> Expansion:
    """Exact eps-expansion of the volume up to ``eps^order``.

    ``eps = u exp(-sum a_k u^k)`` with ``u = 1/tau`` is reverted to ``u(eps)`` and
    ``u^-(n+1)`` is read off.  Only the tail coefficients that the requested
    order actually depends on are generated.
    """
    prof = _require_metric(p)
    m = p.n + 1
    if order is None:
        order = p.n + 4
    if order < 1:
        raise ValueError("order must be at least 1")
    # u(eps)^-m is known to O(eps^(K+1-m)); need eps^order.
    K = m + order
    tau_pow = series_revert(eps_of_u(tail_coefficients(prof, K))) ** (-m)
    laurent = {k: tau_pow.coeff(k) for k in range(-m, 0)}
    constant = tau_pow.coeff(0) - prof.tau0 ** m
    positive = tuple(tau_pow.coeff(k) for k in range(1, order + 1))
    return Expansion(p.n, volume_scale(p), laurent, constant, positive, order)


def exact_constant_residue(p: ModelParams) -> Fraction:
    """The same constant via the residue shortcut, with no series reversion."""
    prof = _require_metric(p)
    m = p.n + 1
    a_m = tail_coefficients(prof, m)[m - 1]
    return constant_term_residue(a_m, m) - prof.tau0 ** m


def vol_of_eps_numeric(p: ModelParams, profile: Profile, eps, precision: int = 256,
                       anchor=None) -> mpmath.mpf:
    _check_precision(precision)
    tau = tau_of_eps(profile, eps, precision, anchor)
    m = p.n + 1
    with mpmath.workprec(precision + 16):
        out = volume_scale(p).to_mpf(precision + 16) * (tau ** m - _mpq(profile.tau0) ** m)
    with mpmath.workprec(precision):
        return +out


def sample_volumes(p: ModelParams, eps_grid: Sequence = DEFAULT_EPS_GRID, precision: int = 256,
                   anchor=None) -> list:
    prof = _require_metric(p)
    with mpmath.workprec(precision):
        grid = [mpmath.mpf(e) for e in eps_grid]
    return [(e, vol_of_eps_numeric(p, prof, e, precision, anchor)) for e in grid]


def fit_expansion(samples: Sequence, n: int, precision: int = 256,
                  extra_exponents: Sequence[int] = (), with_log: bool = False,
                  weight_exponent: int | None = None) -> FitResult:
    """Least-squares fit in the basis ``eps^-(n+1) .. eps^-1, 1, eps``.

    Rows are weighted by ``eps^-(k+1)`` where ``k`` is the highest power in the
    basis, i.e. by the expected size of the first omitted term, so the
    truncation error is spread evenly over the grid instead of being
    dominated by the largest eps.  Columns are equilibrated before a QR
    solve.  ``weight_exponent`` overrides the row weight ``eps^-weight_exponent``
    (needed to compare residuals of different bases).  ``with_log`` appends a ``log eps`` column (coefficient key
    ``"log"``).  Raises :class:`IllConditionedError` when the condition number
    leaves fewer than 32 bits of the working precision.
    """
    _check_precision(precision)
    exponents = tuple(range(-(n + 1), 2)) + tuple(extra_exponents)
    keys = exponents + (("log",) if with_log else ())
    if len(samples) < n + 4:
        raise ValueError(f"need at least {n + 4} samples, got {len(samples)}")
    if len(samples) < len(keys):
        raise ValueError("fewer samples than basis functions")
    top = max(exponents) + 1 if weight_exponent is None else weight_exponent
    with mpmath.workprec(precision):
        rows, rhs = [], []
        for eps, vol in samples:
            eps, vol = mpmath.mpf(eps), mpmath.mpf(vol)
            w = eps ** -top
            row = [w * eps ** k for k in exponents]
            if with_log:
                row.append(w * mpmath.log(eps))
            rows.append(row)
            rhs.append(w * vol)
        A = mpmath.matrix(rows)
        b = mpmath.matrix(rhs)
        scales = [max(abs(A[i, j]) for i in range(A.rows)) for j in range(A.cols)]
        for j, s in enumerate(scales):
            for i in range(A.rows):
                A[i, j] /= s
        sv = mpmath.svd_r(A, compute_uv=False)
        smin = min(sv)
        condition = max(sv) / smin if smin > 0 else mpmath.inf
        if condition == mpmath.inf or mpmath.log(condition, 2) > precision - 32:
            raise IllConditionedError(
                f"fit condition number {mpmath.nstr(condition, 5)} exceeds the "
                f"{precision}-bit budget", condition)
        x, res = mpmath.qr_solve(A, b)
        coeffs = {k: x[j] / scales[j] for j, k in enumerate(keys)}
    return FitResult(keys, coeffs, res, condition, precision)


def formula_comparison(p: ModelParams) -> TermReport:
    """Per-term comparison of the computed expansion against the closed formula.

    Cap term: ``-scale tau0^(n+1)``; boundary term: what remains of the
    constant.  Ratios are exact (None when both sides vanish).
    """
    prof = _require_metric(p)
    exp = expansion_exact(p, order=1)
    m = p.n + 1
    scale = volume_scale(p)
    cap_computed = -(scale * prof.tau0 ** m)
    boundary_computed = scale * (exp.constant + prof.tau0 ** m)
    cap_printed = PiValue(-(2 ** m) * ((1 - p.beta) / (p.n + 2)) ** m * p.volL, m)
    boundary_printed = PiValue(2 ** m * Fraction(1, factorial(m)) * (-p.beta / m) ** m * p.volL, m)

    def ratio(a: PiValue, b: PiValue):
        if b.is_zero():
            return None
        return a.ratio(b)

    notes = []
    cr, br = ratio(cap_computed, cap_printed), ratio(boundary_computed, boundary_printed)
    if boundary_printed.is_zero():
        notes.append("boundary term vanishes on both sides (beta = 0)")
    return TermReport(p.n, p.beta, p.volL, VOLUME_CONVENTION, cap_computed, cap_printed, cr,
                      boundary_computed, boundary_printed, br, tuple(notes))
