"""Self-similar control functions: iterated roots, factor products, shifted root.

An iterated root of order k in the working variable w is

    K(w) = A w^alpha ( ( ... ((1 + A1 w)^2 + A2 w^2)^(3/2) + ... ) + Ak w^k )^(e/k)

with interior powers (j+1)/j and ``e = s - alpha`` (divided by 2 when the
series is rewritten in w = x^2).  Its large-w amplitude is
``A ((...(A1^2 + A2)^(3/2) + A3 ...) + Ak)^(e/k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from .pade import InsufficientCoefficients, solve_dense
from .series import PowerSeries, SeriesError, as_number, series_pow


class NegativeBase(ArithmeticError):
    pass


class VanishingLinearCoefficient(ArithmeticError):
    pass


class DegenerateHankel(ArithmeticError):
    pass


class ComplexPairMismatch(ArithmeticError):
    pass


class BranchCutHit(ArithmeticError):
    pass


VAR_MAPS = ("identity", "square")


def _inner_power(j: int, k: int, exponent):
    return mp.mpf(j + 1) / j if j < k else mp.mpf(exponent) / k


@dataclass(frozen=True)
class RootApproximant:
    A: object
    alpha: object
    s: object
    k: int
    params: tuple
    var_map: str = "identity"

    @property
    def exponent(self):
        """Outer exponent of the nest in the working variable."""
        e = as_number(self.s) - as_number(self.alpha)
        return e / 2 if self.var_map == "square" else e

    @property
    def powers(self) -> tuple:
        return tuple(_inner_power(j, self.k, self.exponent) for j in range(1, self.k + 1))


def _nest_series(params, exponent, order: int, k: int | None = None) -> PowerSeries:
    k = len(params) if k is None else k
    acc = PowerSeries.constant(1, order, "w")
    for j in range(1, k + 1):
        cs = list(acc.coeffs)
        if j <= order:
            cs[j] += params[j - 1]
        acc = series_pow(PowerSeries(cs, "w"), _inner_power(j, k, exponent))
    return acc


def build_iterated_root(
    f: PowerSeries, alpha, s, k: int, var_map: str = "identity"
) -> RootApproximant:
    """Fit A1..Ak order by order to a series normalized by its prefactor.

    ``f`` is the series in the working variable with the ``x**alpha`` factor
    already removed; its constant term becomes the prefactor amplitude.
    At step j the order-j coefficient of the nest is affine in Aj with slope
    equal to the product of the remaining powers, so each Aj comes from a
    single linear equation.
    """
    if var_map not in VAR_MAPS:
        raise ValueError(f"unknown var_map {var_map!r}")
    if f.order < k:
        raise InsufficientCoefficients(f"order-{k} root needs {k} coefficients beyond c0")
    c0 = f.coeffs[0]
    if c0 == 0:
        raise SeriesError("normalized series must have a nonzero constant term")
    target = [c / c0 for c in f.coeffs[: k + 1]]
    proto = RootApproximant(c0, alpha, s, k, (), var_map)
    exponent = proto.exponent
    if k and exponent == 0:
        raise VanishingLinearCoefficient("outer exponent s - alpha is zero")
    params: list = []
    for j in range(1, k + 1):
        params.append(_solve_step(params, exponent, j, k, target[j]))
    return RootApproximant(c0, alpha, s, k, tuple(params), var_map)


def _solve_step(params, exponent, j, k, target_j):
    """Aj such that the order-j coefficient of the final nest equals target_j.

    Coefficients above order j of every stage are irrelevant, so the full
    k-stage nest is expanded only to order j with trial values 0 and 1.
    """
    probe = [_nest_series(list(params) + [mp.mpf(t)] + [mp.mpf(0)] * (k - j), exponent, j, k)[j]
             for t in (0, 1)]
    slope = probe[1] - probe[0]
    if slope == 0:
        raise VanishingLinearCoefficient(f"order-{j} coefficient does not depend on A{j}")
    return (target_j - probe[0]) / slope


def root_amplitude(r: RootApproximant):
    """Large-variable amplitude B_k of the root approximant."""
    if r.k == 0:
        return r.A
    e = r.exponent
    val = r.params[0]
    if r.k == 1:
        return r.A * _real_pow(val, e)
    val = val**2
    for j in range(2, r.k + 1):
        val = val + r.params[j - 1]
        val = _real_pow(val, _inner_power(j, r.k, e))
    return r.A * val


def _real_pow(base, p):
    if base < 0:
        raise NegativeBase(f"negative base {mpmath.nstr(base, 8)} under power {mpmath.nstr(p, 6)}")
    if base == 0 and p < 0:
        raise NegativeBase("zero base under a negative power")
    return base**p


def root_to_series(r: RootApproximant, order: int) -> PowerSeries:
    """Expansion of K in the working variable, prefactor amplitude included."""
    if r.k == 0:
        return PowerSeries.constant(r.A, order, "w")
    nest = _nest_series(list(r.params), r.exponent, order, r.k)
    return nest * r.A


def eval_root(r: RootApproximant, x):
    """K(x) in the original variable (prefactor x**alpha included)."""
    x = mp.mpf(x)
    w = x * x if r.var_map == "square" else x
    e = r.exponent
    val = mp.mpf(1)
    for j in range(1, r.k + 1):
        val = val + r.params[j - 1] * w**j
        val = _real_pow(val, _inner_power(j, r.k, e))
    pref = r.A * (x ** as_number(r.alpha) if r.alpha else 1)
    return pref * val


def eval_root_working(r: RootApproximant, w):
    """K/(w-prefactor) evaluated directly in the working variable."""
    e = r.exponent
    val = mp.mpf(1)
    for j in range(1, r.k + 1):
        val = val + r.params[j - 1] * w**j
        val = _real_pow(val, _inner_power(j, r.k, e))
    return r.A * val


@dataclass(frozen=True)
class FactorApproximant:
    b: tuple
    c: tuple
    prefactor: object = field(default_factory=lambda: mp.mpf(1))

    @property
    def exponent(self):
        return mp.re(mp.fsum(self.c))


def _log_moments(f: PowerSeries, count: int):
    """mu_n = sum_i c_i b_i^n for n = 1..count from the log-series of f."""
    logf = f.log()
    return [(-1) ** (n + 1) * n * logf[n] for n in range(1, count + 1)]


def build_factor_approximant(f: PowerSeries, M: int, s) -> FactorApproximant:
    """Fit prod_i (1 + b_i x)^{c_i} with sum c_i = s by a Prony step.

    Writing ln f = sum_i c_i ln(1 + b_i x) makes the rescaled log
    coefficients power moments mu_n = sum_i c_i b_i^n, with mu_0 = s.
    The b_i are the roots of the Hankel-system polynomial of mu_0..mu_{2M-1};
    the c_i then solve the Vandermonde system for mu_0..mu_{M-1}.
    """
    if f.order < 2 * M - 1:
        raise InsufficientCoefficients(f"M={M} factors need order {2 * M - 1}")
    c0 = f.coeffs[0]
    f = f / c0
    mu = [as_number(s)] + _log_moments(f, 2 * M - 1)
    hankel = [[mu[i + j] for j in range(M)] for i in range(M)]
    poly = solve_dense(hankel, [-mu[i + M] for i in range(M)])
    if poly is None:
        raise DegenerateHankel("Hankel moment matrix is singular")
    roots = mp.polyroots([mp.mpf(1)] + list(reversed(poly)), maxsteps=200, extraprec=2 * mp.prec)
    roots = sorted((mp.mpc(r) for r in roots), key=lambda z: (abs(z), mp.arg(z)))
    vander = [[r**n for r in roots] for n in range(M)]
    weights = solve_dense(vander, [mp.mpc(v) for v in mu[:M]])
    if weights is None:
        raise DegenerateHankel("coincident factor roots")
    b, c = _realize_pairs(roots, weights)
    return FactorApproximant(tuple(b), tuple(c), c0)


def _realize_pairs(roots, weights):
    tol = mp.mpf(10) ** (-(mp.dps // 2))
    b, c = [], []
    for r, w in zip(roots, weights):
        scale = max(abs(r), 1)
        if abs(mp.im(r)) <= tol * scale:
            if abs(mp.im(w)) > tol * max(abs(w), 1):
                raise ComplexPairMismatch("real root carries a complex exponent")
            b.append(mp.re(r))
            c.append(mp.re(w))
            continue
        partner = [i for i, rr in enumerate(roots) if abs(rr - mp.conj(r)) <= tol * scale]
        if not partner or abs(weights[partner[0]] - mp.conj(w)) > tol * max(abs(w), 1):
            raise ComplexPairMismatch("complex factors do not form conjugate pairs")
        b.append(r)
        c.append(w)
    return b, c


def eval_factor(fa: FactorApproximant, x):
    x = mp.mpf(x)
    total = mp.mpc(0)
    for b, c in zip(fa.b, fa.c):
        base = 1 + b * x
        if mp.im(base) == 0 and mp.re(base) <= 0:
            raise BranchCutHit(f"1 + b x = {base} on the branch cut")
        total += c * mp.log(base)
    value = fa.prefactor * mp.exp(total)
    return mp.re(value)


def factor_amplitude(fa: FactorApproximant):
    """Large-x amplitude: prefactor * prod b_i^{c_i} (principal branches)."""
    total = mp.fsum(c * mp.log(b) for b, c in zip(fa.b, fa.c))
    return mp.re(fa.prefactor * mp.exp(total))


def factor_to_series(fa: FactorApproximant, order: int) -> PowerSeries:
    acc = PowerSeries.constant(mp.mpc(1), order)
    for b, c in zip(fa.b, fa.c):
        acc = acc * series_pow(PowerSeries([mp.mpc(1), mp.mpc(b)] + [0] * (order - 1))
                               if order >= 1 else PowerSeries([mp.mpc(1)]), c)
    tol = mp.mpf(10) ** (-(mp.dps // 2))
    for v in acc.coeffs:
        if abs(mp.im(v)) > tol * max(abs(v), 1):
            raise ComplexPairMismatch("factor product has a non-real coefficient")
    return acc.real() * fa.prefactor


@dataclass(frozen=True)
class ShiftedRoot:
    v2: object
    v3: object
    v4: object
    c: object

    @property
    def amplitude(self):
        return self.v2


def eval_shifted_root(sr: ShiftedRoot, t):
    base = sr.v4 * t + 1
    if base <= 0:
        raise NegativeBase("v4 t + 1 must be positive")
    return sr.v2 + sr.v3 * base ** (-sr.c)


def shifted_root_to_series(sr: ShiftedRoot, order: int) -> PowerSeries:
    tail = series_pow(PowerSeries([1, sr.v4] + [0] * max(order - 1, 0)).truncate(order), -sr.c)
    return tail * sr.v3 + sr.v2
