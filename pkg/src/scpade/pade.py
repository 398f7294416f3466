"""Padé approximants fitted by accuracy-through-order.

``pade_fit`` solves the m x m Toeplitz system for the denominator with
partial-pivoting elimination at the current mpmath precision.  Singular or
inconsistent systems never raise: the approximant comes back with
``valid=False`` so a sequence builder can record the order and move on.

With ``block=True`` a singular [n/m] system is resolved the way the Padé
table defines it: if a lower approximant [n-k/m-k] already matches the series
through order n+m, that rational function *is* the [n/m] entry.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from mpmath import mp

from .series import PowerSeries, series_div


class InsufficientCoefficients(ValueError):
    pass


class PoleAtEvaluationPoint(ZeroDivisionError):
    pass


class Limit(enum.Enum):
    INFINITE = "infinite"


INFINITE = Limit.INFINITE


@dataclass(frozen=True)
class PadeApproximant:
    num: tuple
    den: tuple
    n: int
    m: int
    valid: bool = True
    reduced_from: tuple | None = None

    def __call__(self, x):
        return pade_eval(self, x)

    def num_series(self, order: int) -> PowerSeries:
        return PowerSeries(_pad(self.num, order))

    def den_series(self, order: int) -> PowerSeries:
        return PowerSeries(_pad(self.den, order))

    def to_series(self, order: int) -> PowerSeries:
        return series_div(self.num_series(order), self.den_series(order))


def _pad(cs, order):
    cs = list(cs)[: order + 1]
    return cs + [0] * (order + 1 - len(cs))


def _tolerance():
    return mp.mpf(10) ** (-(mp.dps // 2))


def solve_dense(matrix, rhs):
    """Gaussian elimination with partial pivoting; ``None`` if singular.

    A pivot smaller than ``10**(-dps/2)`` times the largest entry of the
    matrix is treated as zero.
    """
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    scale = max((abs(v) for row in matrix for v in row), default=mp.mpf(0))
    if scale == 0:
        return None if n else []
    eps = _tolerance() * scale
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) <= eps:
            return None
        a[col], a[piv] = a[piv], a[col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, n + 1):
                    a[r][c] -= f * a[col][c]
    x = [mp.mpf(0)] * n
    for r in range(n - 1, -1, -1):
        x[r] = (a[r][n] - mp.fsum(a[r][c] * x[c] for c in range(r + 1, n))) / a[r][r]
    return x


def _strict_fit(c, n, m):
    def C(k):
        return c[k] if 0 <= k < len(c) else mp.mpf(0)

    if m:
        matrix = [[C(n + 1 + i - j) for j in range(1, m + 1)] for i in range(m)]
        rhs = [-C(n + 1 + i) for i in range(m)]
        q = solve_dense(matrix, rhs)
        if q is None:
            return None
        den = [mp.mpf(1)] + q
    else:
        den = [mp.mpf(1)]
    num = [mp.fsum(C(k - j) * den[j] for j in range(min(k, m) + 1)) for k in range(n + 1)]
    return num, den


def _matches(c, num, den, order):
    """True when num/den re-expands to ``c`` through ``order``."""
    approx = series_div(PowerSeries(_pad(num, order)), PowerSeries(_pad(den, order)))
    scale = max(abs(v) for v in c[: order + 1]) or mp.mpf(1)
    tol = _tolerance() * scale
    return all(abs(approx[k] - c[k]) <= tol for k in range(order + 1))


def pade_fit(f: PowerSeries, n: int, m: int, *, block: bool = False) -> PadeApproximant:
    if n < 0 or m < 0:
        raise ValueError("Padé degrees must be nonnegative")
    if f.order < n + m:
        raise InsufficientCoefficients(
            f"[{n}/{m}] needs order {n + m}, series has order {f.order}"
        )
    c = list(f.coeffs[: n + m + 1])
    fit = _strict_fit(c, n, m)
    if fit is not None and _matches(c, *fit, n + m):
        return PadeApproximant(tuple(fit[0]), tuple(fit[1]), n, m)
    if block:
        for k in range(1, min(n, m) + 1):
            low = _strict_fit(c, n - k, m - k)
            if low is not None and _matches(c, *low, n + m):
                return PadeApproximant(tuple(low[0]), tuple(low[1]), n, m, True, (n - k, m - k))
    num, den = fit if fit is not None else ((), (mp.mpf(1),))
    return PadeApproximant(tuple(num), tuple(den), n, m, valid=False)


def pade_eval(p: PadeApproximant, x):
    if not p.valid:
        raise ValueError("cannot evaluate an invalid Padé approximant")
    num = mp.fsum(c * x**k for k, c in enumerate(p.num))
    den = mp.fsum(c * x**k for k, c in enumerate(p.den))
    if den == 0:
        raise PoleAtEvaluationPoint(f"denominator vanishes at x={x}")
    return num / den


def effective_degree(cs) -> int:
    """Index of the last coefficient that is not numerically zero."""
    if not cs:
        return -1
    big = max(abs(c) for c in cs)
    if big == 0:
        return -1
    eps = _tolerance() * big
    for k in range(len(cs) - 1, -1, -1):
        if abs(cs[k]) > eps:
            return k
    return -1


def pade_limit(p: PadeApproximant):
    """Limit at x -> +inf: a number, 0, or :data:`INFINITE`."""
    if not p.valid:
        raise ValueError("cannot take the limit of an invalid Padé approximant")
    dn, dm = effective_degree(p.num), effective_degree(p.den)
    if dn < 0:
        return mp.mpf(0)
    if dn < dm:
        return mp.mpf(0)
    if dn > dm:
        return INFINITE
    return p.num[dn] / p.den[dm]
