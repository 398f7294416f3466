"""Truncated power series over mpmath scalars.

A :class:`PowerSeries` is an immutable coefficient tuple ``c_0 .. c_N`` with
truncation order ``N``.  Every binary operation truncates to the smaller of
the two operand orders, so no result ever claims more knowledge than its
weakest input.
"""

from __future__ import annotations

import os
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

DEFAULT_DIGITS = int(os.environ.get("SCPADE_DIGITS", "60"))


def digits_for_order(order: int, base: int | None = None) -> int:
    """Working precision for fits that touch coefficients up to ``order``."""
    base = DEFAULT_DIGITS if base is None else base
    return max(base, 10 + 4 * order)


class SeriesError(ArithmeticError):
    pass


class NonpositiveConstantTerm(SeriesError):
    pass


class ZeroConstantDivisor(SeriesError):
    pass


def _scalar(value):
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return value
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    if isinstance(value, complex):
        return mp.mpc(value)
    return mp.mpf(value)


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple
    label: str = field(default="x", compare=False)

    def __init__(self, coeffs: Iterable, label: str = "x"):
        cs = tuple(_scalar(c) for c in coeffs)
        if not cs:
            raise ValueError("a power series needs at least the constant term")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "label", label)

    @classmethod
    def constant(cls, value, order: int, label: str = "x") -> "PowerSeries":
        return cls([value] + [0] * order, label)

    @classmethod
    def monomial(cls, value, power: int, order: int, label: str = "x") -> "PowerSeries":
        cs = [0] * (order + 1)
        if power <= order:
            cs[power] = value
        return cls(cs, label)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} series to {order}")
        return PowerSeries(self.coeffs[: order + 1], self.label)

    @property
    def is_real(self) -> bool:
        return all(isinstance(c, mpmath.mpf) for c in self.coeffs)

    def real(self) -> "PowerSeries":
        return PowerSeries([mp.re(c) for c in self.coeffs], self.label)

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.constant(other, self.order, self.label)
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs], self.label)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        other = _scalar(other)
        return PowerSeries([c * other for c in self.coeffs], self.label)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return series_div(self, other)
        other = _scalar(other)
        return PowerSeries([c / other for c in self.coeffs], self.label)

    def __pow__(self, p):
        return series_pow(self, p)

    def __call__(self, x):
        return series_eval(self, x)

    def shift_down(self, k: int) -> "PowerSeries":
        """Divide by ``x**k``; the first ``k`` coefficients must vanish."""
        if k == 0:
            return self
        if any(c != 0 for c in self.coeffs[:k]):
            raise SeriesError(f"series is not divisible by {self.label}^{k}")
        return PowerSeries(self.coeffs[k:], self.label)

    def even_part(self, label: str = "z") -> "PowerSeries":
        """Rewrite an even series in ``z = x**2``; odd coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[1::2]):
            raise SeriesError("series has nonzero odd coefficients")
        return PowerSeries(self.coeffs[::2], label)

    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries([0], self.label)
        return PowerSeries([k * c for k, c in enumerate(self.coeffs) if k], self.label)

    def integral(self) -> "PowerSeries":
        """Term-wise antiderivative vanishing at zero (order grows by one)."""
        return PowerSeries([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)], self.label)

    def log(self) -> "PowerSeries":
        """``log(f / c0)`` through the truncation order."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroConstantDivisor("log of a series with zero constant term")
        dlog = series_div(self.derivative(), self.truncate(max(self.order - 1, 0)))
        return dlog.integral().truncate(self.order) if self.order else PowerSeries([0], self.label)

    def __repr__(self) -> str:
        shown = ", ".join(mpmath.nstr(c, 8) for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""
        return f"PowerSeries([{shown}{more}], order={self.order}, label={self.label!r})"


def series_add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    n = min(f.order, g.order)
    return PowerSeries([f.coeffs[k] + g.coeffs[k] for k in range(n + 1)], f.label)


def series_mul(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    n = min(f.order, g.order)
    a, b = f.coeffs, g.coeffs
    return PowerSeries(
        [mp.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)], f.label
    )


def series_pow(f: PowerSeries, p) -> PowerSeries:
    """``f**p`` via the recurrence implied by ``g' f = p f' g``.

    The constant term is factored out first; for real series it must be
    positive so that ``c0**p`` is the principal real power.
    """
    c0 = f.coeffs[0]
    if isinstance(c0, mpmath.mpf) and c0 <= 0:
        if c0 == 0 or not _is_integer(p):
            raise NonpositiveConstantTerm(f"constant term {c0} must be positive")
    elif c0 == 0:
        raise NonpositiveConstantTerm("constant term must be nonzero")
    p = _scalar(p)
    b = [c / c0 for c in f.coeffs]
    g = [mp.mpf(1)]
    for k in range(1, f.order + 1):
        g.append(mp.fsum((p * j - (k - j)) * b[j] * g[k - j] for j in range(1, k + 1)) / k)
    scale = c0**p if not (isinstance(c0, mpmath.mpf) and c0 < 0) else mp.power(c0, int(p))
    return PowerSeries([c * scale for c in g], f.label)


def series_inv(f: PowerSeries) -> PowerSeries:
    c0 = f.coeffs[0]
    if c0 == 0:
        raise ZeroConstantDivisor("divisor has zero constant term")
    g = [1 / c0]
    for k in range(1, f.order + 1):
        g.append(-mp.fsum(f.coeffs[j] * g[k - j] for j in range(1, k + 1)) / c0)
    return PowerSeries(g, f.label)


def series_div(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    if g.coeffs[0] == 0:
        raise ZeroConstantDivisor("divisor has zero constant term")
    n = min(f.order, g.order)
    return series_mul(f.truncate(n), series_inv(g.truncate(n)))


def series_eval(f: PowerSeries, x):
    acc = mp.mpf(0)
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def compose_into(f: PowerSeries, inner: PowerSeries) -> PowerSeries:
    """``f(inner(x))`` for ``inner`` with zero constant term (Horner in series)."""
    if inner.coeffs[0] != 0:
        raise SeriesError("inner series must vanish at the origin")
    n = min(f.order, inner.order)
    inner = inner.truncate(n)
    acc = PowerSeries.constant(f.coeffs[n], n, inner.label)
    for c in reversed(f.coeffs[:n]):
        acc = series_mul(acc, inner) + c
    return acc


def as_number(value):
    """mpmath scalar at the current precision; Fractions stay exact until here."""
    return _scalar(value)


def from_values(values: Sequence, label: str = "x") -> PowerSeries:
    return PowerSeries(values, label)


def _is_integer(p) -> bool:
    try:
        return mp.mpf(p) == int(mp.mpf(p))
    except (TypeError, ValueError):
        return False
