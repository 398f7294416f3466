"""Benchmark problems: coefficient generators, exponents and reference amplitudes.

Every generator returns the Taylor coefficients of f in its natural variable
through order N, computed at the current mpmath precision.  Tabulated inputs
(virial coefficients, loop expansions, lattice series) are kept as the decimal
strings they were published with and are never extended.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable

from mpmath import mp

from .selfsim import (
    RootApproximant,
    ShiftedRoot,
    build_factor_approximant,
    build_iterated_root,
)
from .series import PowerSeries, as_number, series_div, series_mul, series_pow


class UnknownProblem(KeyError):
    pass


class OrderOverflow(ValueError):
    pass


class ControlMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class ControlSpec:
    kind: str  # "root" | "factor" | "shifted_root"
    k: int | None = None
    M: int | None = None
    fixture: tuple | None = None


@dataclass(frozen=True)
class Problem:
    id: str
    generator: Callable[[int], list]
    alpha: object
    s: object
    control: ControlSpec
    max_order: int
    exact: Callable[[], object] | None = None
    exact_kind: str = "exact"
    var_map: str = "identity"
    scale: Callable[[], object] | None = None
    best_standard_order: int | None = None
    closed_form: Callable | None = None
    printed_control: tuple = ()
    polynomial: bool = False
    corrected_form: str = "pade"  # "pade" | "root"
    label: str = "x"
    notes: str = ""

    def coefficients(self, N: int) -> PowerSeries:
        return generate_coefficients(self, N)

    def exact_amplitude(self):
        return None if self.exact is None else self.exact()

    def amplitude_scale(self):
        return mp.mpf(1) if self.scale is None else self.scale()

    @property
    def step(self) -> int:
        return 2 if self.var_map == "square" else 1


def _const(text: str) -> Callable[[], object]:
    return lambda: mp.mpf(text)


def _table(values: list[str]) -> Callable[[int], list]:
    return lambda N: [mp.mpf(v) for v in values[: N + 1]]


def _pad(cs: list, N: int) -> list:
    return cs[: N + 1] + [mp.mpf(0)] * (N + 1 - len(cs))


# -- generators ---------------------------------------------------------------


def mittag_leffler_coeffs(N: int) -> list:
    return [(-1) ** n / mp.gamma(mp.mpf(n) / 2 + 1) for n in range(N + 1)]


@lru_cache(maxsize=None)
def quartic_rational_coeffs(N: int) -> tuple:
    """Ground-state energy series of -1/2 d2/dx2 + x^2/2 + g x^4.

    With psi = exp(-x^2/2) * sum g^n phi_n and phi_n polynomials in x^2
    (phi_n(0) = 0 for n > 0), each order reduces to the triangular system
    L phi_n = sum_{k<n} E_k phi_{n-k} - x^4 phi_{n-1} + E_n, L = -D^2/2 + x D.
    """
    energies = [Fraction(1, 2)]
    phis: list[dict] = [{0: Fraction(1)}]
    for n in range(1, N + 1):
        rhs: dict = {}
        for k in range(1, n):
            for j, c in phis[n - k].items():
                rhs[j] = rhs.get(j, 0) + energies[k] * c
        for j, c in phis[n - 1].items():
            rhs[j + 2] = rhs.get(j + 2, 0) - c
        phi: dict = {}
        for j in range(max(rhs), 0, -1):
            phi[j] = (rhs.get(j, 0) + phi.get(j + 1, 0) * (j + 1) * (2 * j + 1)) / (2 * j)
        energies.append(-phi.get(1, 0) - rhs.get(0, 0))
        phis.append(phi)
    return tuple(energies)


def quartic_coeffs(N: int) -> list:
    return [mp.mpf(c.numerator) / c.denominator for c in quartic_rational_coeffs(N)]


# One transcribed digit: -8.912101753...e19 -> -8.912102753...e19.
QUARTIC_TABLE_A16_SHIFT = -(10**13)


def quartic_table_coeffs(N: int) -> list:
    cs = quartic_coeffs(N)
    if N >= 16:
        cs[16] += QUARTIC_TABLE_A16_SHIFT
    return cs


def correlation_coeffs(N: int) -> list:
    root = series_pow(PowerSeries(_pad([1, 0, mp.mpf(1) / 4], N)), mp.mpf(1) / 2)
    cs = [2 * c for c in root.coeffs]
    if N >= 1:
        cs[1] -= 1
    return cs


def debye_huckel_coeffs(N: int) -> list:
    return [2 * (-1) ** n / mp.factorial(n + 2) for n in range(N + 1)]


def branched_polymer_coeffs(N: int) -> list:
    cs = [mp.mpf(1)]
    for n in range(1, N + 1):
        cs.append(cs[-1] * mp.mpf(-3) / 2 / (n + mp.mpf(1) / 2))
    return cs


def particle_in_box_coeffs(N: int) -> list:
    """Taylor series of 8 pi^2 g^2 f(g) for the box ground-state energy."""
    # F = 1 + pi^4 g^2/32 + (pi^2 g/4) sqrt(1 + pi^4 g^2/64)
    pi2 = mp.pi**2
    root = series_pow(PowerSeries(_pad([1, 0, pi2**2 / 64], N)), mp.mpf(1) / 2)
    cs = [mp.mpf(1)] + [pi2 / 4 * c for c in root.coeffs[:N]]
    if N >= 2:
        cs[2] += pi2**2 / 32
    return cs


def generating_function_coeffs(N: int, a=None) -> list:
    """Coefficients of (sqrt(x^2+1) + x)^a via the rising-factorial formula."""
    a = mp.mpf(1) / 3 if a is None else mp.mpf(a)
    cs = []
    for n in range(N + 1):
        rising = mp.rf(a / 2 - mp.mpf(n) / 2 + 1, n)
        cs.append(2**n * rising / (mp.factorial(n) * (n / a + 1)))
    return cs


def scattering_coeffs(N: int) -> list:
    """Series of int_0^x (sin t/t^3 - cos t/t^2)^2 dt (odd in x)."""
    K = N // 2 + 1
    g = [(-1) ** k * (1 / mp.factorial(2 * k + 1) - 1 / mp.factorial(2 * k)) for k in range(1, K + 1)]
    sq = series_mul(PowerSeries(g), PowerSeries(g))
    cs = [mp.mpf(0)] * (N + 1)
    for j, c in enumerate(sq.coeffs):
        if 2 * j + 1 <= N:
            cs[2 * j + 1] = c / (2 * j + 1)
    return cs


def wilson_loop_coeffs(N: int) -> list:
    decay = PowerSeries([mp.mpf(-1) ** n / mp.factorial(n) for n in range(N + 1)])
    bessel = [mp.mpf(0)] * (N + 1)
    for k in range(N // 2 + 1):
        bessel[2 * k] = 1 / (4**k * mp.factorial(k) * mp.factorial(k + 1))
    return list(series_mul(decay, PowerSeries(bessel)).coeffs)


def error_function_coeffs(N: int) -> list:
    cs = [mp.mpf(0)] * (N + 1)
    for n in range(N // 2 + 1):
        if 2 * n + 1 <= N:
            cs[2 * n + 1] = mp.mpf(-1) ** n / (mp.factorial(n) * (2 * n + 1))
    return cs


def debye_coeffs(N: int) -> list:
    return [mp.bernoulli(n) / (mp.factorial(n) * (n + 1)) for n in range(N + 1)]


def connected_moments_coeffs(N: int) -> list:
    u = PowerSeries([(-4) ** n / mp.factorial(n) for n in range(N + 1)])
    one = PowerSeries.constant(1, N)
    u2 = u * u
    u3 = u2 * u
    num = u3 * 121 + u2 * 189199 + u * 8180919 + one * 6561
    den = (one * 81 - u) * (u2 * 121 + u * 20198 + one * 81)
    return list(series_div(num, den).coeffs)


SCHWINGER = ["1", "2", "-10", "78.66667", "-736.2222", "7572.929", "-82736.69", "942803.4"]
BOSE = {
    "bose_O1": ["0", "0.334931", "-0.178478", "0.129786", "-0.115999", "0.120433"],
    "bose_O2": ["0", "0.223286", "-0.0661032", "0.026446", "-0.0129177", "0.007290373"],
    "bose_O4": ["0", "0.167465", "-0.0297465", "0.00700448", "-0.00198926", "0.000647007"],
}
BOSE_MONTE_CARLO = {"bose_O1": "1.09", "bose_O2": "1.32", "bose_O4": "1.6"}
VIRIAL = [
    "1", "4", "10", "18.364768", "28.224512", "39.815148", "53.344420", "68.537549",
    "85.812838", "105.775104", "127.93", "152.67", "181.19", "214.75", "246.96", "279.17",
]
MEMBRANE = ["1", "0.25", "0.03125", "2.176347e-3", "0.552721e-4", "-0.721482e-5", "-1.777848e-6"]
CONNECTED_MOMENTS_ROOT = (
    Fraction(403171240048919, 85626857995920),
    Fraction(36337990380139, 85626857995920),
    Fraction(2331886111, 1340069829),
    Fraction(9, 10),
)


def virial_coefficients() -> list:
    """B_1..B_16 of the hard-sphere fluid (index 0 holds B_1)."""
    return [mp.mpf(v) for v in VIRIAL]


def hard_sphere_x_coeffs(N: int) -> list:
    """Z(y(x)) with y = x/(1+x), from B_1..B_{N+1}."""
    if N + 1 > len(VIRIAL):
        raise OrderOverflow("only sixteen virial coefficients are tabulated")
    B = virial_coefficients()[: N + 1]
    y = PowerSeries([0] + [(-1) ** (k + 1) for k in range(1, N + 1)])
    acc = PowerSeries.constant(B[N], N)
    for b in reversed(B[:N]):
        acc = acc * y + b
    return list(acc.coeffs)


def membrane_coeffs(N: int) -> list:
    return _pad([mp.mpf(v) for v in MEMBRANE], N)


def shifted_root_fixture() -> ShiftedRoot:
    return ShiftedRoot(*(mp.mpf(f.numerator) / f.denominator for f in CONNECTED_MOMENTS_ROOT))


def _frac(p, q=1):
    return lambda: mp.mpf(p) / q


# -- registry -----------------------------------------------------------------


def _build_registry() -> dict:
    problems = [
        Problem(
            "mittag_leffler", mittag_leffler_coeffs, 0, -1, ControlSpec("root", k=2), 1000,
            exact=lambda: 1 / mp.sqrt(mp.pi),
            closed_form=lambda x: mp.erfc(x) * mp.exp(x * x),
            printed_control=((lambda: 2 / mp.sqrt(mp.pi), None),
                             (lambda: -2 * (mp.pi - 4) / mp.pi, None)),
        ),
        Problem(
            "quartic_oscillator", quartic_coeffs, 0, Fraction(1, 3), ControlSpec("root", k=2), 60,
            exact=_const("0.667986"), exact_kind="reference", label="g",
            printed_control=((_frac(9, 2), None), (_frac(-18), None)),
            notes="coefficients from the perturbative recursion",
        ),
        Problem(
            "quartic_oscillator_table", quartic_table_coeffs, 0, Fraction(1, 3), ControlSpec("root", k=2), 60,
            exact=_const("0.667986"), exact_kind="reference", label="g",
            printed_control=((_frac(9, 2), None), (_frac(-18), None)),
            notes="legacy coefficient table: a16 carries one transcribed digit",
        ),
        Problem(
            "correlation", correlation_coeffs, 0, -1, ControlSpec("root", k=2), 1000,
            exact=_frac(2), closed_form=lambda x: mp.sqrt(x * x + 4) - x,
            printed_control=((_frac(1, 2), None), (_frac(1, 4), None)),
        ),
        Problem(
            "debye_huckel", debye_huckel_coeffs, 0, -1, ControlSpec("root", k=2), 1000,
            exact=_frac(2),
            closed_form=lambda x: 2 / x - 2 * (1 - mp.exp(-x)) / x**2 if x else mp.mpf(1),
            printed_control=((_frac(1, 3), None), (_frac(1, 18), None)),
        ),
        Problem(
            "branched_polymer", branched_polymer_coeffs, 0, -1, ControlSpec("factor", M=2), 1000,
            exact=_frac(1, 3),
            closed_form=lambda x: mp.hyp1f1(1, mp.mpf(3) / 2, -mp.mpf(3) / 2 * x),
            notes="1F1(1; 3/2; -3x/2); coefficients alternate in sign",
        ),
        Problem(
            "particle_in_box", particle_in_box_coeffs, 0, 2, ControlSpec("root", k=3), 1000,
            exact=lambda: mp.pi**2 / 128, scale=lambda: 1 / (8 * mp.pi**2), label="g",
            closed_form=lambda g: 8 * mp.pi**2 * g * g * mp.pi**2 / 128 * (
                mp.mpf(1) / 2 + 16 / (mp.pi**4 * g * g) + mp.sqrt(1 + 64 / (mp.pi**4 * g * g)) / 2),
            printed_control=((lambda: mp.pi**2 / 8, None), (lambda: mp.pi**4 / 64, None),
                             (lambda: 3 * mp.pi**6 / 1024, None)),
            notes="series of 8 pi^2 g^2 f(g); amplitudes reported as f(inf)",
        ),
        Problem(
            "generating_function", generating_function_coeffs, 0, Fraction(1, 3), ControlSpec("root", k=2), 1000,
            exact=lambda: mp.cbrt(2),
            closed_form=lambda x: mp.cbrt(mp.sqrt(x * x + 1) + x),
            printed_control=((_frac(1), None), (_frac(1), None)),
            notes="a = 1/3",
        ),
        Problem(
            "scattering", scattering_coeffs, 1, 0, ControlSpec("root", k=1), 1000, var_map="square",
            exact=lambda: mp.pi / 15,
            closed_form=lambda x: mp.quad(
                lambda t: ((mp.sin(t) - t * mp.cos(t)) / t**3) ** 2 if t else mp.mpf(1) / 9, [0, x]),
            printed_control=((_frac(2, 15), None),), corrected_form="root",
            notes="integrand squared; corrected sequence is the iterated-root amplitudes in x^2",
        ),
        Problem(
            "wilson_loop", wilson_loop_coeffs, 0, Fraction(-3, 2), ControlSpec("root", k=2), 1000,
            exact=lambda: mp.sqrt(2 / mp.pi),
            closed_form=lambda x: 2 * mp.exp(-x) * mp.besseli(1, x) / x if x else mp.mpf(1),
            printed_control=((_frac(2, 3), None), (_frac(5, 18), None)),
        ),
        Problem(
            "error_function", error_function_coeffs, 1, 0, ControlSpec("root", k=3), 1000,
            var_map="square", exact=lambda: mp.sqrt(mp.pi) / 2,
            closed_form=lambda x: mp.sqrt(mp.pi) / 2 * mp.erf(x),
            printed_control=((_frac(2, 3), None), (_frac(4, 15), None), (_frac(16, 63), None)),
        ),
        Problem(
            "debye", debye_coeffs, 0, -1, ControlSpec("root", k=2), 1000,
            exact=lambda: mp.pi**2 / 6,
            closed_form=lambda x: mp.quad(lambda y: y / mp.expm1(y) if y else mp.mpf(1), [0, x]) / x
            if x else mp.mpf(1),
            printed_control=((_frac(1, 4), None), (_frac(5, 72), None)),
        ),
        Problem(
            "connected_moments", connected_moments_coeffs, 0, 0,
            ControlSpec("shifted_root", fixture=CONNECTED_MOMENTS_ROOT), 1000, label="t",
            exact=_frac(1), closed_form=_connected_moments_closed,
        ),
        Problem(
            "schwinger", _table(SCHWINGER), 0, Fraction(1, 4), ControlSpec("root", k=2), 7,
            exact=_const("0.5642"), label="z",
            printed_control=((_frac(8), None), (_frac(-32), None)),
        ),
        Problem(
            "hard_sphere", hard_sphere_x_coeffs, 0, 3, ControlSpec("root", k=2), 10,
            exact=_frac(2), exact_kind="reference",
            printed_control=((_frac(4, 3), None), (_frac(4, 9), None)),
            notes="Z(y(x)) with x = y/(1-y); Z ~ 2 x^3",
        ),
        Problem(
            "membrane", membrane_coeffs, 0, 2, ControlSpec("root", k=3), 40,
            exact=_const("0.0798"), exact_kind="reference", scale=lambda: mp.pi**2 / 8,
            polynomial=True,
            printed_control=((_frac(1, 8), None), (_frac(1, 64), None), (_const("0.00326452"), 6)),
            notes="tabulated sum treated as a polynomial; amplitude reported as p(inf)",
        ),
    ]
    for pid, values in BOSE.items():
        printed = ()
        if pid == "bose_O2":
            printed = ((_const("0.296"), 3), (_const("-0.0616"), 3))
        problems.append(Problem(
            pid, _table(values), 1, 0, ControlSpec("root", k=2), 5,
            exact=_const(BOSE_MONTE_CARLO[pid]), exact_kind="reference",
            best_standard_order=2, printed_control=printed,
        ))
    return {p.id: p for p in problems}


def _connected_moments_closed(t):
    u = mp.exp(-4 * t)
    return (121 * u**3 + 189199 * u**2 + 8180919 * u + 6561) / (
        (81 - u) * (121 * u**2 + 20198 * u + 81))


REGISTRY: dict = {}
# short names; "quartic" is the tabulated variant whose amplitudes are the reference ones
ALIASES = {"quartic": "quartic_oscillator_table"}


def registry() -> dict:
    if not REGISTRY:
        REGISTRY.update(_build_registry())
    return REGISTRY


def get_problem(pid) -> Problem:
    if isinstance(pid, Problem):
        return pid
    try:
        return registry()[ALIASES.get(pid, pid)]
    except KeyError:
        raise UnknownProblem(pid) from None


def generate_coefficients(pid, N: int) -> PowerSeries:
    p = get_problem(pid)
    if N > p.max_order and not p.polynomial:
        raise OrderOverflow(f"{p.id} supports order <= {p.max_order}, asked for {N}")
    cs = p.generator(N)
    if len(cs) < N + 1:
        if not p.polynomial:
            raise OrderOverflow(f"{p.id} generator stops at order {len(cs) - 1}")
        cs = _pad(list(cs), N)
    return PowerSeries(cs[: N + 1], p.label)


def exact_amplitude(pid):
    return get_problem(pid).exact_amplitude()


def working_series(p: Problem, N: int) -> PowerSeries:
    """Series h(w) with f(x) = x^alpha h(w), w = x or x^2, to w-order N."""
    order = p.step * N + int(p.alpha)
    f = generate_coefficients(p, order).shift_down(int(p.alpha))
    if p.var_map == "square":
        f = f.even_part()
    return f.truncate(N)


def working_exponent_exact(p: Problem) -> Fraction:
    return (Fraction(p.s) - Fraction(p.alpha)) / p.step


def working_exponent(p: Problem):
    return as_number(working_exponent_exact(p))


def control_for(pid, order: int | None = None, check: bool = True):
    """Build the problem's control function from its own coefficients."""
    p = get_problem(pid)
    spec = p.control
    if spec.kind == "root":
        h = working_series(p, spec.k if order is None else max(order, spec.k))
        K = build_iterated_root(h, p.alpha, p.s, spec.k, p.var_map)
        if check:
            check_printed_control(p, K)
        return K
    if spec.kind == "factor":
        h = working_series(p, 2 * spec.M - 1)
        return build_factor_approximant(h, spec.M, working_exponent(p))
    if spec.kind == "shifted_root":
        return ShiftedRoot(*(mp.mpf(f.numerator) / f.denominator for f in spec.fixture))
    raise ValueError(f"unknown control kind {spec.kind!r}")


def check_printed_control(p: Problem, K: RootApproximant) -> None:
    for i, (value, sig) in enumerate(p.printed_control):
        got, want = K.params[i], value()
        if sig is None:
            ok = abs(got - want) <= mp.mpf(10) ** -12 * max(abs(want), 1)
        else:
            ok = mp.mpf(mp.nstr(got, sig)) == mp.mpf(mp.nstr(want, sig))
        if not ok:
            raise ControlMismatch(f"{p.id}: A{i + 1} = {mp.nstr(got, 10)}, expected {mp.nstr(want, 10)}")


# -- user problem files -------------------------------------------------------


def problem_from_dict(d: dict) -> Problem:
    """Problem from the JSON schema ``{id, coefficients | generator, alpha, s, exact, control}``."""
    pid = d["id"]
    if "generator" in d:
        base = get_problem(str(d["generator"]).removeprefix("builtin:"))
        gen, max_order, polynomial = base.generator, base.max_order, base.polynomial
    else:
        values = [str(v) for v in d["coefficients"]]
        gen, max_order, polynomial = _table(values), len(values) - 1, bool(d.get("polynomial", False))
    ctl = d.get("control", {"kind": "root", "k": 2})
    var_map = ctl.get("var_map", d.get("var_map", "identity"))
    fixture = tuple(Fraction(str(v)) for v in ctl["fixture"]) if "fixture" in ctl else None
    spec = ControlSpec(ctl.get("kind", "root"), k=ctl.get("k"), M=ctl.get("M"), fixture=fixture)
    exact = d.get("exact")
    return Problem(
        pid, gen, _parse_number(d.get("alpha", 0)), _parse_number(d["s"]), spec,
        int(d.get("max_order", max_order)),
        exact=None if exact is None else (lambda e=str(exact): as_number(_parse_number(e))),
        var_map=var_map, polynomial=polynomial,
        best_standard_order=d.get("best_standard_order"),
        notes=d.get("notes", ""),
    )


def _parse_number(v):
    """Exact Fraction for exponents given as "p/q", integers or decimals."""
    return Fraction(str(v))


def load_problem_file(path) -> list[Problem]:
    data = json.loads(Path(path).read_text())
    items = data if isinstance(data, list) else [data]
    return [problem_from_dict(item) for item in items]


def with_coefficients(p: Problem, values: list) -> Problem:
    """Copy of ``p`` whose generator returns ``values`` (used for fault injection)."""
    return replace(p, generator=_table([str(v) for v in values]), max_order=len(values) - 1)
