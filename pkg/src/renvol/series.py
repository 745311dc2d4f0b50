"""Truncated Laurent series over the rationals.

A :class:`TruncatedSeries` knows the coefficients of ``x**k`` for
``lead_exponent <= k < trunc_order`` and nothing beyond.  Every operation
propagates the truncation order pessimistically; asking for a coefficient
outside the known window raises :class:`~renvol.errors.TruncationError`
instead of quietly returning zero.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import TruncationError
from .exact_core import as_rational

__all__ = [
    "TruncatedSeries",
    "series_arith",
    "series_exp_log",
    "series_exp",
    "series_log",
    "series_compose",
    "series_revert",
    "eps_of_u",
    "constant_term_reversion",
    "eps_constant_term",
    "constant_term_residue",
]


class TruncatedSeries:
    """``sum_{k} coeffs[k - lead_exponent] x**k + O(x**trunc_order)``.

    Leading zeros are stripped on construction, so a nonzero series always has
    a nonzero first coefficient.  A series with no known nonzero coefficient
    keeps a single zero coefficient at ``trunc_order - 1``.
    """

    __slots__ = ("lead_exponent", "coeffs", "trunc_order")

    def __init__(self, coeffs: Iterable, lead_exponent: int = 0, trunc_order: int | None = None):
        cs = [as_rational(c) for c in coeffs]
        if trunc_order is None:
            trunc_order = lead_exponent + len(cs)
        if trunc_order <= lead_exponent:
            raise ValueError("trunc_order must exceed lead_exponent")
        # Coefficients past trunc_order are unknown by definition; pad short input with zeros.
        width = trunc_order - lead_exponent
        cs = cs[:width] + [Fraction(0)] * (width - len(cs))
        skip = 0
        while skip < width - 1 and cs[skip] == 0:
            skip += 1
        self.lead_exponent = lead_exponent + skip
        self.coeffs = tuple(cs[skip:])
        self.trunc_order = trunc_order

    @classmethod
    def monomial(cls, exponent: int, coeff=1, trunc_order: int | None = None) -> TruncatedSeries:
        if trunc_order is None:
            trunc_order = exponent + 1
        return cls([coeff], exponent, trunc_order)

    @classmethod
    def constant(cls, c, trunc_order: int) -> TruncatedSeries:
        return cls([c], 0, trunc_order)

    @classmethod
    def identity(cls, trunc_order: int) -> TruncatedSeries:
        """The series ``x + O(x**trunc_order)``."""
        return cls([1], 1, trunc_order)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def valuation(self) -> int | None:
        """Exponent of the first nonzero coefficient, or None if none is known."""
        return None if self.is_zero() else self.lead_exponent

    @property
    def precision(self) -> int:
        """Relative precision: number of known terms after the leading one."""
        return self.trunc_order - self.lead_exponent

    def coeff(self, k: int) -> Fraction:
        if k >= self.trunc_order:
            raise TruncationError(f"coefficient of x^{k} unknown (series is O(x^{self.trunc_order}))")
        if k < self.lead_exponent:
            return Fraction(0)
        return self.coeffs[k - self.lead_exponent]

    def __getitem__(self, k: int) -> Fraction:
        return self.coeff(k)

    def coefficients(self, start: int, stop: int) -> list[Fraction]:
        return [self.coeff(k) for k in range(start, stop)]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.trunc_order:
            raise TruncationError(f"cannot extend a series known to O(x^{self.trunc_order}) to O(x^{order})")
        lo = min(self.lead_exponent, order - 1)
        return TruncatedSeries(self.coefficients(lo, order), lo, order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.trunc_order != other.trunc_order:
            return False
        lo = min(self.lead_exponent, other.lead_exponent)
        return self.coefficients(lo, self.trunc_order) == other.coefficients(lo, other.trunc_order)

    def __hash__(self):
        return hash((self.lead_exponent, self.coeffs, self.trunc_order))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{self.lead_exponent + i}")
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries({body} + O(x^{self.trunc_order}))"

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return other
        c = as_rational(other)
        # Exact constants only constrain the result through the other operand.
        return TruncatedSeries([c], 0, max(self.trunc_order, 1))

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.lead_exponent, self.trunc_order)

    def __add__(self, other):
        other = self._lift(other)
        order = min(self.trunc_order, other.trunc_order)
        lo = min(self.lead_exponent, other.lead_exponent, order - 1)
        cs = [self.coeff(k) + other.coeff(k) for k in range(lo, order)]
        return TruncatedSeries(cs, lo, order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = as_rational(other)
            return TruncatedSeries([c * a for a in self.coeffs], self.lead_exponent, self.trunc_order)
        a, b = self, other
        if a.is_zero() or b.is_zero():
            order = _zero_product_order(a, b)
            return TruncatedSeries([0], order - 1, order)
        lead = a.lead_exponent + b.lead_exponent
        order = min(a.trunc_order + b.lead_exponent, b.trunc_order + a.lead_exponent)
        width = order - lead
        out = [Fraction(0)] * width
        for i, ai in enumerate(a.coeffs[:width]):
            if ai == 0:
                continue
            for j, bj in enumerate(b.coeffs[: width - i]):
                out[i + j] += ai * bj
        return TruncatedSeries(out, lead, order)

    __rmul__ = __mul__

    def inverse(self) -> TruncatedSeries:
        if self.is_zero():
            raise ZeroDivisionError("series has no nonzero coefficient in its known window")
        a0 = self.coeffs[0]
        width = self.precision
        inv = [Fraction(0)] * width
        inv[0] = 1 / a0
        for k in range(1, width):
            s = sum(self.coeffs[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s / a0
        v = self.lead_exponent
        return TruncatedSeries(inv, -v, width - v)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = as_rational(other)
            if c == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self * (1 / c)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = TruncatedSeries([1], 0, base.precision)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self) -> TruncatedSeries:
        lo = self.lead_exponent
        cs = [(lo + i) * c for i, c in enumerate(self.coeffs)]
        if lo == 0:
            cs, lo = cs[1:], 1
        if not cs:
            return TruncatedSeries([0], self.trunc_order - 2, self.trunc_order - 1)
        return TruncatedSeries(cs, lo - 1, self.trunc_order - 1)

    def __call__(self, g: TruncatedSeries) -> TruncatedSeries:
        return series_compose(self, g)


def _zero_product_order(a: TruncatedSeries, b: TruncatedSeries) -> int:
    va = a.lead_exponent if not a.is_zero() else None
    vb = b.lead_exponent if not b.is_zero() else None
    if va is None and vb is None:
        return a.trunc_order + b.trunc_order
    if va is None:
        return a.trunc_order + vb
    return b.trunc_order + va


def series_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    """Dispatch ``op`` in ``{"add", "sub", "mul", "div"}``."""
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    try:
        return ops[op]()
    except KeyError:
        raise ValueError(f"unknown series operation {op!r}") from None


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """Formal exponential of a series with zero constant term."""
    if a.lead_exponent < 1 and not a.is_zero():
        raise ValueError("exp requires a series with zero constant term")
    order = a.trunc_order
    if order <= 0:
        raise TruncationError("exp needs the constant term to be known")
    # e' = a' e  =>  k e_k = sum_j j a_j e_{k-j}
    e = [Fraction(0)] * order
    e[0] = Fraction(1)
    for k in range(1, order):
        s = Fraction(0)
        for j in range(max(a.lead_exponent, 1), k + 1):
            aj = a.coeff(j)
            if aj:
                s += j * aj * e[k - j]
        e[k] = s / k
    return TruncatedSeries(e, 0, order)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """Formal logarithm of a series with constant term 1."""
    if a.lead_exponent != 0 or a.coeffs[0] != 1:
        raise ValueError("log requires a series with constant term 1")
    order = a.trunc_order
    # a l' = a'  =>  k l_k = k a_k - sum_{j<k} j l_j a_{k-j}
    lg = [Fraction(0)] * order
    for k in range(1, order):
        s = k * a.coeff(k)
        for j in range(1, k):
            s -= j * lg[j] * a.coeff(k - j)
        lg[k] = s / k
    return TruncatedSeries(lg, 0, order)


def series_exp_log(a: TruncatedSeries, which: str) -> TruncatedSeries:
    if which == "exp":
        return series_exp(a)
    if which == "log":
        return series_log(a)
    raise ValueError(f"which must be 'exp' or 'log', got {which!r}")


def series_compose(a: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """``a(g(x))`` for ``g`` of valuation >= 1.

    Negative powers of ``a`` are allowed when ``g`` has valuation exactly 1.
    """
    w = g.valuation
    if w is None or w < 1:
        raise ValueError("compose needs an inner series with positive valuation")
    if a.lead_exponent < 0 and w != 1:
        raise ValueError("Laurent outer series require an inner series of valuation 1")
    # a is O(y^Na) and g is O(x^w), so the discarded tail is O(x^(w*Na)).
    bound = w * a.trunc_order
    acc = TruncatedSeries([0], bound - 1, bound)
    power = g ** a.lead_exponent if a.lead_exponent != 0 else None
    for i, c in enumerate(a.coeffs):
        if c:
            acc = acc + (TruncatedSeries([c], 0, bound) if power is None else power * c)
        power = g if power is None else power * g
    return acc


def series_revert(a: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse ``g`` with ``a(g(x)) = x``.

    Uses fixed-point substitution ``g <- x - r(g)`` where ``a = x + r``; each
    pass fixes one more coefficient.
    """
    if a.lead_exponent < 1 and a.coeff(0) != 0:
        raise ValueError("revert requires zero constant term")
    if a.trunc_order <= 1:
        raise TruncationError("revert needs the linear coefficient")
    c1 = a.coeff(1)
    if c1 == 0:
        raise ValueError("revert requires a nonzero linear coefficient")
    order = a.trunc_order
    b = a / c1
    r = b - TruncatedSeries.identity(order)
    g = TruncatedSeries.identity(2)
    for k in range(2, order):
        # g is exact to O(x^k) and r = O(x^2), so x - r(g) is exact to O(x^(k+1)).
        g = TruncatedSeries.identity(k + 1) - series_compose(r.truncate(k + 1), g)
    if c1 != 1:
        # b(h(x)) = x  =>  a(h(x / c1)) = x
        g = series_compose(g, TruncatedSeries([1 / c1], 1, order))
    return g


def eps_of_u(tail: Sequence) -> TruncatedSeries:
    """``eps(u) = u * exp(-sum_k a_k u^k)`` from the known tail ``a_1..a_K``."""
    K = len(tail)
    expo = TruncatedSeries([0] + [-as_rational(t) for t in tail], 0, K + 1)
    return series_exp(expo) * TruncatedSeries.monomial(1, 1, K + 2)


def constant_term_reversion(tail: Sequence, m: int) -> Fraction:
    """eps^0 coefficient of ``tau^m = u(eps)^-m`` by explicit reversion.

    ``eps(u) = u exp(-sum a_k u^k)``; the constant term depends on ``a_1..a_m``
    only, so ``len(tail) >= m`` is required.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")
    if len(tail) < m:
        raise TruncationError(f"need at least {m} tail coefficients, got {len(tail)}")
    return eps_constant_term(eps_of_u(tail), m)


def eps_constant_term(eps: TruncatedSeries, m: int) -> Fraction:
    """eps^0 coefficient of ``u(eps)^-m`` for an arbitrary ``eps(u) = c u + ...``."""
    u_of_eps = series_revert(eps)
    return (u_of_eps ** (-m)).coeff(0)


def constant_term_residue(a_m, m: int) -> Fraction:
    """Same constant term via the residue shortcut: ``-m * a_m``."""
    return -m * as_rational(a_m)
