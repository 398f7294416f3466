"""Amplitude sequences from truncated series.

Standard pipeline: with h the series left after factoring ``x**alpha`` out
(and rewriting in ``z = x**2`` for even problems) and ``e`` its exponent,
``T = (h/h0)**(-1/e)`` grows linearly, so ``A_n = h0 * (lim w T_{n-1/n})**(-e)``.
Order n touches coefficients through ``2n - 1``.  When ``e`` is an integer the
power transform is unnecessary and ``A_n = lim h_{n+e/n} / w**e``; for
``e = -1`` the two coincide and ``e = 0`` gives the diagonal sequence.

Corrected pipeline: ``G = h / K`` tends to a constant, so
``A_n = A0 * lim G_{n/n}`` with ``A0`` the control amplitude (``n = 0``).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import singledispatch
from typing import Callable

from mpmath import mp

from . import corpus
from .pade import INFINITE, PadeApproximant, pade_fit, pade_limit
from .selfsim import (
    FactorApproximant,
    NegativeBase,
    RootApproximant,
    ShiftedRoot,
    build_iterated_root,
    eval_root,
    factor_amplitude,
    factor_to_series,
    root_amplitude,
    root_to_series,
    shifted_root_to_series,
)
from .series import PowerSeries, as_number, compose_into, digits_for_order, series_div, series_pow


class ZeroExponent(ValueError):
    pass


class AmplitudeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Entry:
    n: int
    amplitude: object = None
    valid: bool = True
    percent_error: object = None
    note: str = ""


@dataclass
class AmplitudeSequence:
    entries: list
    scheme_tag: str
    problem_id: str

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def at(self, n: int) -> Entry:
        for e in self.entries:
            if e.n == n:
                return e
        raise KeyError(n)

    def valid_entries(self) -> list:
        return [e for e in self.entries if e.valid]

    def last_valid(self) -> Entry | None:
        good = self.valid_entries()
        return good[-1] if good else None


@dataclass(frozen=True)
class ExactControl:
    """A control given directly by its expansion and amplitude.

    ``series`` maps an order to the working-variable expansion of K, with the
    prefactor amplitude included; ``amplitude`` is evaluated lazily so that it
    follows the working precision.
    """

    series: Callable[[int], PowerSeries]
    amplitude: Callable[[], object]
    exponent: object


def percent_error(value, exact):
    return 100 * (value / exact - 1)


def error_table(seq: AmplitudeSequence, exact) -> AmplitudeSequence:
    if exact == 0:
        raise ValueError("exact amplitude must be nonzero")
    exact = as_number(exact)
    entries = [
        dataclasses.replace(e, percent_error=percent_error(e.amplitude, exact))
        if e.valid and mp.isfinite(e.amplitude) else e
        for e in seq.entries
    ]
    return AmplitudeSequence(entries, seq.scheme_tag, seq.problem_id)


def _finish(entries, tag, p) -> AmplitudeSequence:
    seq = AmplitudeSequence(entries, tag, p.id)
    exact = p.exact_amplitude()
    return error_table(seq, exact) if exact is not None else seq


def _invalid(n, note):
    return Entry(n, None, False, None, note)


def _power_amplitude(n, prefactor, limit, power, scale):
    """``prefactor * limit**power`` as an entry, invalid when not a finite real."""
    if limit is INFINITE:
        return Entry(n, mp.mpf(0)) if power < 0 else _invalid(n, "infinite amplitude")
    if limit == 0:
        return Entry(n, mp.mpf(0)) if power > 0 else _invalid(n, "infinite amplitude")
    if limit < 0 and power != int(power):
        return _invalid(n, "negative limit under a fractional power")
    return Entry(n, scale * prefactor * limit**power)


def _orders(orders, first, n_max):
    if orders is None:
        return list(range(first, n_max + 1))
    chosen = sorted(set(int(n) for n in orders))
    if chosen and (chosen[0] < first or chosen[-1] > n_max):
        raise ValueError(f"orders must lie in {first}..{n_max}")
    return chosen


# -- standard -----------------------------------------------------------------


def standard_amplitudes(p, n_max: int, *, finite_limit: bool = True, digits: int | None = None,
                        orders=None):
    """Standard sequence for n = 1..n_max (or only the listed ``orders``).

    n is the denominator degree.  For an integer exponent e the near-diagonal
    ``h_{n+e/n}`` is used directly; otherwise the power transform ``T``.
    """
    p = corpus.get_problem(p)
    orders = _orders(orders, 1, n_max)
    e_exact = corpus.working_exponent_exact(p)
    if e_exact == 0 and not finite_limit:
        raise ZeroExponent(f"{p.id}: exponent s - alpha is zero")
    shift = int(e_exact) if e_exact.denominator == 1 else None
    top = 2 * n_max + max(shift or 0, 0)
    with mp.workdps(digits or digits_for_order(top)):
        scale = p.amplitude_scale()
        entries = []
        if shift is not None:
            h = corpus.working_series(p, top)
            for n in orders:
                if n + shift < 0:
                    entries.append(_invalid(n, "numerator degree below zero"))
                    continue
                P = pade_fit(h.truncate(2 * n + shift), n + shift, n, block=True)
                if not P.valid:
                    entries.append(_invalid(n, "degenerate fit"))
                    continue
                entries.append(_power_amplitude(n, 1, _leading_limit(P, shift), 1, scale))
            return _finish(entries, "standard", p)
        e = as_number(e_exact)
        h = corpus.working_series(p, 2 * n_max - 1)
        h0 = h[0]
        T = series_pow(h / h0, -1 / e)
        for n in orders:
            P = pade_fit(T.truncate(2 * n - 1), n - 1, n, block=True)
            if not P.valid:
                entries.append(_invalid(n, "degenerate fit"))
                continue
            entries.append(_power_amplitude(n, h0, _leading_limit(P, -1), -e, scale))
        return _finish(entries, "standard", p)


def _leading_limit(P: PadeApproximant, power: int):
    """Limit of P(w) / w**power at infinity."""
    pad = (mp.mpf(0),) * abs(power)
    if power > 0:
        return pade_limit(dataclasses.replace(P, den=pad + tuple(P.den)))
    return pade_limit(dataclasses.replace(P, num=pad + tuple(P.num)))


# -- control dispatch ---------------------------------------------------------


@singledispatch
def control_series(K, order: int) -> PowerSeries:
    raise TypeError(f"unsupported control {type(K).__name__}")


@control_series.register
def _(K: RootApproximant, order):
    return root_to_series(K, order)


@control_series.register
def _(K: FactorApproximant, order):
    return factor_to_series(K, order)


@control_series.register
def _(K: ShiftedRoot, order):
    return shifted_root_to_series(K, order)


@control_series.register
def _(K: ExactControl, order):
    return K.series(order)


@singledispatch
def control_amplitude(K):
    raise TypeError(f"unsupported control {type(K).__name__}")


control_amplitude.register(RootApproximant, root_amplitude)
control_amplitude.register(FactorApproximant, factor_amplitude)


@control_amplitude.register
def _(K: ShiftedRoot):
    return K.amplitude


@control_amplitude.register
def _(K: ExactControl):
    return K.amplitude()


def control_exponent(K):
    """Large-variable exponent of K in the working variable."""
    if isinstance(K, RootApproximant):
        return K.exponent
    if isinstance(K, FactorApproximant):
        return K.exponent
    if isinstance(K, ShiftedRoot):
        return mp.mpf(0)
    return as_number(K.exponent)


def _check_exponent(p, K):
    want = corpus.working_exponent(p)
    got = control_exponent(K)
    if abs(got - want) > mp.mpf(10) ** (-(mp.dps // 2)):
        raise AmplitudeMismatch(f"{p.id}: control exponent {mp.nstr(got, 8)} != {mp.nstr(want, 8)}")
    if isinstance(K, RootApproximant) and K.var_map != p.var_map:
        raise AmplitudeMismatch(f"{p.id}: control built in {K.var_map}, problem uses {p.var_map}")


# -- corrected ----------------------------------------------------------------


def corrected_amplitudes(p, K=None, n_max: int = 1, *, digits: int | None = None, orders=None):
    """``A_n = A0 lim G_{n/n}`` for n = 0..n_max, ``G = h/K``.

    Without ``K`` the problem's own control is built.  Problems whose
    corrected sequence is declared as a root sequence return the amplitudes
    of successive iterated roots instead (see :func:`root_amplitudes`).
    """
    p = corpus.get_problem(p)
    if K is None and p.corrected_form == "root":
        return root_amplitudes(p, n_max, digits=digits, orders=orders)
    orders = _orders(orders, 0, n_max)
    with mp.workdps(digits or digits_for_order(2 * n_max)):
        if K is None:
            K = corpus.control_for(p, check=False)
        _check_exponent(p, K)
        scale = p.amplitude_scale()
        order = 2 * n_max
        h = corpus.working_series(p, order)
        A0 = control_amplitude(K)
        G = series_div(h, control_series(K, order))
        entries = []
        for n in orders:
            if n == 0:
                entries.append(Entry(0, scale * A0))
                continue
            P = pade_fit(G.truncate(2 * n), n, n, block=True)
            if not P.valid:
                entries.append(_invalid(n, "degenerate fit"))
                continue
            entries.append(_power_amplitude(n, A0, pade_limit(P), 1, scale))
        return _finish(entries, "corrected", p)


def root_amplitudes(p, k_max: int, *, digits: int | None = None, orders=None):
    """Amplitudes B_k of the iterated roots of orders 1..k_max."""
    p = corpus.get_problem(p)
    orders = _orders(orders, 1, k_max)
    with mp.workdps(digits or digits_for_order(k_max)):
        h = corpus.working_series(p, k_max)
        scale = p.amplitude_scale()
        entries = []
        for k in orders:
            r = build_iterated_root(h.truncate(k), p.alpha, p.s, k, p.var_map)
            try:
                entries.append(Entry(k, scale * root_amplitude(r)))
            except NegativeBase as exc:
                entries.append(_invalid(k, str(exc)))
        return _finish(entries, "corrected", p)


def exact_control(p) -> ExactControl:
    """The problem's own expansion used as K, so that G is identically one."""
    p = corpus.get_problem(p)
    if p.exact is None:
        raise ValueError(f"{p.id} has no exact amplitude")
    return ExactControl(
        series=lambda order: corpus.working_series(p, order),
        amplitude=lambda: p.exact_amplitude() / p.amplitude_scale(),
        exponent=corpus.working_exponent_exact(p),
    )


# -- specializations ----------------------------------------------------------


@dataclass(frozen=True)
class EquationOfState:
    control: RootApproximant
    pade: PadeApproximant
    virials: tuple  # B_1.. from the re-expanded equation
    predicted: dict = field(default_factory=dict)  # n -> B_n beyond the input
    relative_errors: dict = field(default_factory=dict)  # n -> (B*/B - 1)

    def __call__(self, y):
        y = mp.mpf(y)
        return eval_root(self.control, y / (1 - y)) * self.pade(y)


def _x_of_y(order: int) -> PowerSeries:
    return PowerSeries([0] + [1] * order, "y")


def hard_sphere_eos(n_virial: int = 10, *, virials=None, digits: int | None = None) -> EquationOfState:
    """Z*(y) = K(x(y)) P(y) from B_1 .. B_{n_virial+1}, x = y/(1-y).

    ``n_virial`` counts the nontrivial coefficients B_2 onward; the Padé in y
    is as close to diagonal as they allow, and B_1 = 1 fixes its constant.
    """
    N = n_virial
    with mp.workdps(digits or DEFAULT_EOS_DIGITS):
        B = [mp.mpf(b) for b in virials] if virials is not None else corpus.virial_coefficients()
        if N + 1 > len(B):
            raise corpus.OrderOverflow("not enough tabulated virial coefficients")
        Z = PowerSeries(B[: N + 1], "y")
        zx = compose_into(PowerSeries(B[:3], "y"), PowerSeries([0, 1, -1], "x"))
        K = build_iterated_root(zx, 0, 3, 2)
        full = len(B) - 1
        Ky = compose_into(root_to_series(K, full), _x_of_y(full))
        G = series_div(Z, Ky.truncate(N))
        P = pade_fit(G, (N + 1) // 2, N // 2, block=True)
        if not P.valid:
            raise ArithmeticError("degenerate Padé for the virial ratio")
        star = Ky * P.to_series(full)
        virials = tuple(star.coeffs)
        predicted = {i + 1: virials[i] for i in range(N + 1, full + 1)}
        errors = {i + 1: virials[i] / B[i] - 1 for i in range(N + 1, full + 1)}
        return EquationOfState(K, P, virials, predicted, errors)


DEFAULT_EOS_DIGITS = 60


@dataclass(frozen=True)
class MembranePressure:
    value: object
    control: RootApproximant
    pade: PadeApproximant
    control_value: object


def membrane_pressure(pade_order: int = 4, *, problem=None, digits: int | None = None) -> MembranePressure:
    """p(inf) = (pi^2/8) * B * lim P_{m/m}(x) with B the control amplitude.

    The tabulated sum is taken as an exact polynomial, so the ratio series
    G = poly/K is known to any order.
    """
    p = corpus.get_problem(problem or "membrane")
    with mp.workdps(digits or digits_for_order(2 * pade_order)):
        order = max(2 * pade_order, 3)
        h = corpus.working_series(p, order)
        K = build_iterated_root(h.truncate(3), 0, 2, 3)
        B = root_amplitude(K)
        G = series_div(h, root_to_series(K, order))
        P = pade_fit(G.truncate(2 * pade_order), pade_order, pade_order, block=True)
        if not P.valid:
            raise ArithmeticError("degenerate Padé for the membrane ratio")
        lim = pade_limit(P)
        if lim is INFINITE:
            raise ArithmeticError("ratio Padé diverges at infinity")
        scale = p.amplitude_scale()
        return MembranePressure(scale * B * lim, K, P, scale * B)
