"""Golden-value checks for the benchmark problems.

Each check returns one :class:`CheckResult`.  Checks read problems through an
:class:`Overrides` mapping so that a corrupted coefficient can be injected
and the failing fixture observed by name.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from mpmath import mp

from . import corpus, scheme
from .pade import pade_fit
from .selfsim import build_factor_approximant, build_iterated_root, root_to_series
from .series import PowerSeries, series_pow

QUARTIC_STANDARD = {2: "0.759147", 3: "0.734081", 4: "0.720699", 5: "0.712286",
                    6: "0.706466", 7: "0.702176", 8: "0.698869", 9: "0.696173"}
QUARTIC_CORRECTED = {0: "0.572357", 1: "0.572357", 2: "0.572357", 3: "0.587104",
                     4: "0.63279", 5: "0.655086", 6: "0.660334", 7: "0.661945",
                     8: "0.663225", 9: "0.665346"}
SCATTERING = [
    "0.30429", "0.247712", "0.238538", "0.238538", "0.232624", "0.228707", "0.225813",
    "0.223642", "0.221929", "0.220562", "0.219428", "0.218486", "0.217682", "0.216994",
    "0.216394", "0.21587", "0.215405", "0.214992", "0.214621", "0.214287", "0.213984",
    "0.213709", "0.213457", "0.213226", "0.213013",
]
SCATTERING_ROOTS = {1: ["2/15"], 2: ["2/15", "34/2625"], 3: ["2/15", "34/2625", "152/55125"]}
BOSE_STANDARD = {"bose_O2": "0.982", "bose_O1": "0.824", "bose_O4": "1.219"}
BOSE_CORRECTED = {"bose_O2": "1.386", "bose_O1": "1.207", "bose_O4": "1.6"}
FACTOR_B = ("0.142857", "0.255551")
FACTOR_C = ("-0.5", "1.67705")
CONTROL_PROBLEMS = (
    "mittag_leffler", "quartic_oscillator", "correlation", "debye_huckel", "particle_in_box",
    "generating_function", "wilson_loop", "error_function", "debye", "schwinger", "bose_O2",
    "hard_sphere", "membrane",
)
CONVERGENCE = {
    # problem: (order checked, relative tolerance in percent)
    "correlation": (40, 0.5),
    "particle_in_box": (40, 0.5),
    "generating_function": (40, 0.5),
    "branched_polymer": (80, 1.0),
    "mittag_leffler": (40, 1.0),
    "wilson_loop": (80, 1.0),
    "error_function": (80, 1.0),
    "debye": (80, 1.0),
    "connected_moments": (80, 1.0),
}
STUCK_BOX_VALUE = "0.0385531"
STANDARD_PATHOLOGY_ORDER = 40
IDENTITY_ORDER = 12


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.criterion}. {self.name}: {self.detail}"


@dataclass
class Overrides:
    problems: dict = field(default_factory=dict)
    virials: list | None = None

    def get(self, pid):
        return self.problems.get(pid) or corpus.get_problem(pid)

    def corrupt(self, pid: str, index: int, value) -> "Overrides":
        """Replace coefficient ``index`` of ``pid`` (natural variable).

        For ``hard_sphere`` the index addresses the virial table (0 is B_1).
        """
        if pid == "hard_sphere":
            self.virials = list(self.virials or corpus.VIRIAL)
            self.virials[index] = str(value)
            return self
        p = corpus.get_problem(pid)
        n = p.max_order if p.max_order <= 60 else max(index, 60)
        with mp.workdps(60):
            cs = [mp.nstr(c, 50) for c in p.generator(n)]
        cs[index] = str(value)
        self.problems[pid] = corpus.with_coefficients(p, cs)
        return self


def same_digits(value, printed, digits: int = 6) -> bool:
    """``value`` rounded to ``digits`` significant figures equals ``printed``."""
    if value is None:
        return False
    want = _number(printed)
    return mp.mpf(mp.nstr(value, digits)) == mp.mpf(mp.nstr(want, digits))


def _number(text):
    text = str(text)
    if "/" in text:
        a, b = text.split("/")
        return mp.mpf(a) / mp.mpf(b)
    return mp.mpf(text)


def _fmt(v, d=7):
    return "invalid" if v is None else mp.nstr(v, d)


def _mismatches(seq, printed: dict, digits=6):
    bad = []
    for n, text in printed.items():
        e = seq.at(n)
        value = e.amplitude if e.valid else None
        if not same_digits(value, text, digits):
            bad.append(f"n={n}: {_fmt(value)} vs {text}")
    return bad


def _result(criterion, name, bad, ok_detail):
    return CheckResult(criterion, name, not bad, ok_detail if not bad else "; ".join(bad))


# -- 1 quartic ---------------------------------------------------------------


def check_quartic_standard(ov):
    seq = scheme.standard_amplitudes(ov.get("quartic_oscillator_table"), 9)
    return _result(1, "quartic standard A2..A9", _mismatches(seq, QUARTIC_STANDARD),
                   f"A9 = {_fmt(seq.at(9).amplitude)}")


def check_quartic_corrected(ov):
    seq = scheme.corrected_amplitudes(ov.get("quartic_oscillator_table"), None, 9)
    printed = dict(QUARTIC_CORRECTED)
    # A1 = A2 = A0 as printed: an invalid (degenerate) A2 is read as "no change"
    if not seq.at(2).valid:
        printed.pop(2)
    return _result(1, "quartic corrected A0, A3..A9", _mismatches(seq, printed),
                   f"A9 = {_fmt(seq.at(9).amplitude)}")


def check_quartic_errors(ov):
    p = ov.get("quartic_oscillator_table")
    std = scheme.standard_amplitudes(p, 9).at(9).percent_error
    cor = scheme.corrected_amplitudes(p, None, 9).at(9).percent_error
    bad = []
    if std is None or abs(std - mp.mpf("4.21967")) > mp.mpf("0.01"):
        bad.append(f"standard error {_fmt(std)}% vs 4.21967%")
    if cor is None or abs(cor - mp.mpf("-0.3952")) > mp.mpf("0.01"):
        bad.append(f"corrected error {_fmt(cor)}% vs -0.3952%")
    return _result(1, "quartic final errors", bad, f"{_fmt(std, 6)}%, {_fmt(cor, 6)}%")


# -- 2 scattering ------------------------------------------------------------


def check_scattering_sequence(ov):
    seq = scheme.corrected_amplitudes(ov.get("scattering"), None, 25)
    printed = {n + 1: v for n, v in enumerate(SCATTERING)}
    return _result(2, "scattering S1..S25", _mismatches(seq, printed), "all 25 match")


def check_scattering_error(ov):
    err = scheme.corrected_amplitudes(ov.get("scattering"), None, 25).at(25).percent_error
    bad = [] if err is not None and abs(err - mp.mpf("1.70644")) <= mp.mpf("0.01") else [
        f"last error {_fmt(err)}% vs 1.70644%"]
    return _result(2, "scattering last error", bad, f"{_fmt(err, 6)}%")


def check_scattering_roots(ov):
    p = ov.get("scattering")
    bad = []
    with mp.workdps(40):
        h = corpus.working_series(p, 3)
        for k, want in SCATTERING_ROOTS.items():
            r = build_iterated_root(h.truncate(k), p.alpha, p.s, k, p.var_map)
            for j, text in enumerate(want):
                if not same_digits(r.params[j], text):
                    bad.append(f"R{k}* A{j + 1} = {_fmt(r.params[j])} vs {text}")
    return _result(2, "scattering R1*, R2*, R3*", bad, "parameters match")


# -- 3 Schwinger -------------------------------------------------------------


def check_schwinger(ov):
    p = ov.get("schwinger")
    bad = []
    std = scheme.standard_amplitudes(p, 4).valid_entries()
    cor = scheme.corrected_amplitudes(p, None, 3).valid_entries()
    got_std = [e.amplitude for e in std]
    got_cor = [e.amplitude for e in cor]
    if not any(same_digits(v, "0.680043") for v in got_std):
        bad.append(f"standard amplitudes {[_fmt(v) for v in got_std]} never 0.680043")
    if not any(same_digits(v, "0.591181") for v in got_cor):
        bad.append(f"corrected amplitudes {[_fmt(v) for v in got_cor]} never 0.591181")
    return _result(3, "Schwinger A7", bad, "0.680043 and 0.591181")


# -- 4 Bose gas --------------------------------------------------------------


def check_bose(ov):
    bad, shown = [], []
    tol = mp.mpf("0.005")
    for pid in BOSE_STANDARD:
        p = ov.get(pid)
        n_best = p.best_standard_order
        std = scheme.standard_amplitudes(p, n_best).at(n_best)
        cor = scheme.corrected_amplitudes(p, None, 2).last_valid()
        for tag, entry, want in (("standard", std, BOSE_STANDARD[pid]),
                                 ("corrected", cor, BOSE_CORRECTED[pid])):
            value = entry.amplitude if entry and entry.valid else None
            shown.append(f"{pid} {tag} {_fmt(value, 5)}")
            if value is None or abs(value - mp.mpf(want)) > tol:
                bad.append(f"{pid} {tag} {_fmt(value)} vs {want}")
    return _result(4, "Bose gas c1", bad, ", ".join(shown))


# -- 5 hard spheres ----------------------------------------------------------


def check_hard_sphere(ov):
    virials = _virials(ov)
    eos = scheme.hard_sphere_eos(10, virials=virials)
    bad = []
    with mp.workdps(60):
        tol = mp.mpf(10) ** -20
        for i in range(11):
            if abs(eos.virials[i] - mp.mpf(virials[i])) > tol * abs(mp.mpf(virials[i])):
                bad.append(f"B{i + 1} not reproduced")
    worst = max(abs(v) for v in eos.relative_errors.values())
    if worst > mp.mpf("0.025"):
        bad.append(f"max error {_fmt(100 * worst, 4)}% > 2.5%")
    return _result(5, "hard-sphere equation of state", bad, f"max error {_fmt(100 * worst, 4)}%")


def _virials(ov):
    return corpus.VIRIAL if ov.virials is None else ov.virials


# -- 6 membrane --------------------------------------------------------------


def check_membrane(ov):
    res = scheme.membrane_pressure(problem=ov.get("membrane"))
    bad = []
    if abs(res.value - mp.mpf("0.0806")) > mp.mpf("0.0005"):
        bad.append(f"p(inf) = {_fmt(res.value)} vs 0.0806")
    if not same_digits(res.control.params[2], "0.00326452"):
        bad.append(f"A3 = {_fmt(res.control.params[2])} vs 0.00326452")
    return _result(6, "membrane pressure", bad,
                   f"p(inf) = {_fmt(res.value, 6)}, A3 = {_fmt(res.control.params[2], 6)}")


# -- 7 control fixtures ------------------------------------------------------


def check_controls(ov):
    bad = []
    with mp.workdps(40):
        for pid in CONTROL_PROBLEMS:
            p = ov.get(pid)
            k = p.control.k
            h = corpus.working_series(p, k)
            r = build_iterated_root(h, p.alpha, p.s, k, p.var_map)
            for j, (value, sig) in enumerate(p.printed_control):
                if not same_digits(r.params[j], value(), min(6, sig or 6)):
                    bad.append(f"{pid} A{j + 1} = {_fmt(r.params[j])} vs {_fmt(value())}")
        if not same_digits(root_amplitude_of(ov, "bose_O2"), "0.223286"):
            bad.append("bose_O2 prefactor")
    return _result(7, "printed root controls", bad, f"{len(CONTROL_PROBLEMS)} controls match")


def root_amplitude_of(ov, pid):
    return corpus.working_series(ov.get(pid), 0)[0]


def check_factor(ov):
    p = ov.get("branched_polymer")
    bad = []
    with mp.workdps(40):
        fa = build_factor_approximant(corpus.working_series(p, 3), 2, p.s)
        # printed pairing: b with negative imaginary part carries c with negative imaginary part
        for b, c in zip(fa.b, fa.c):
            sign = 1 if mp.im(b) > 0 else -1
            pairs = ((mp.re(b), FACTOR_B[0]), (sign * mp.im(b), FACTOR_B[1]),
                     (mp.re(c), FACTOR_C[0]), (sign * mp.im(c), FACTOR_C[1]))
            for got, text in pairs:
                if not same_digits(got, text):
                    bad.append(f"{_fmt(got)} vs {text}")
        shown = ", ".join(f"b={mp.nstr(b, 6)} c={mp.nstr(c, 6)}" for b, c in zip(fa.b, fa.c))
    return _result(7, "branched-polymer factor parameters", bad, shown)


# -- 8 pathologies -----------------------------------------------------------


def _converges(ov, pid):
    order, tol = CONVERGENCE[pid]
    p = ov.get(pid)
    e = scheme.corrected_amplitudes(p, None, order, orders=[order]).at(order)
    ok = e.valid and abs(e.percent_error) <= tol
    return ok, f"{pid} n={order}: {_fmt(e.amplitude)} ({_fmt(e.percent_error, 3)}%)"


def check_correlation(ov):
    p = ov.get("correlation")
    std = scheme.standard_amplitudes(p, STANDARD_PATHOLOGY_ORDER).valid_entries()
    vals = [e.amplitude for e in std]
    bad = []
    slack = mp.mpf("1e-20")
    if any(v < -slack or v - 4 > slack for v in vals):
        bad.append("standard amplitude outside [0, 4]")
    tail = vals[len(vals) // 2:]
    if max(tail) - min(tail) <= mp.mpf("1e-3"):
        bad.append("standard tail settles within 1e-3")
    ok, msg = _converges(ov, "correlation")
    if not ok:
        bad.append(msg)
    return _result(8, "(a) correlation function", bad,
                   f"standard spans [{_fmt(min(tail), 3)}, {_fmt(max(tail), 3)}]; {msg}")


def check_particle_in_box(ov):
    p = ov.get("particle_in_box")
    std = scheme.standard_amplitudes(p, STANDARD_PATHOLOGY_ORDER)
    stuck = mp.mpf(STUCK_BOX_VALUE)
    off = [f"n={e.n}: {_fmt(e.amplitude)}" for e in std.valid_entries()
           if abs(e.amplitude - stuck) > mp.mpf("1e-6")]
    bad = [f"standard not stuck at {STUCK_BOX_VALUE}: " + ", ".join(off[:3])] if off else []
    ok, msg = _converges(ov, "particle_in_box")
    if not ok:
        bad.append(msg)
    return _result(8, "(b) particle in a box", bad, msg)


def check_generating_function(ov):
    p = ov.get("generating_function")
    std = scheme.standard_amplitudes(p, STANDARD_PATHOLOGY_ORDER)
    tol = mp.mpf("1e-20")
    off = [f"n={e.n}: {_fmt(e.amplitude)}" for e in std.valid_entries() if abs(e.amplitude - 1) > tol]
    bad = ["standard amplitude moves: " + ", ".join(off[:3])] if off else []
    ok, msg = _converges(ov, "generating_function")
    if not ok:
        bad.append(msg)
    return _result(8, "(c) generating function", bad, msg)


def check_branched_polymer(ov):
    p = ov.get("branched_polymer")
    probe = (10, 20, 30, 40)
    std = scheme.standard_amplitudes(p, max(probe), orders=probe)
    errs = [abs(std.at(n).percent_error) if std.at(n).valid else None for n in probe]
    bad = []
    if None in errs or any(b <= a for a, b in zip(errs, errs[1:])):
        bad.append("standard error does not grow: " + ", ".join(_fmt(e, 4) for e in errs))
    ok, msg = _converges(ov, "branched_polymer")
    if not ok:
        bad.append(msg)
    return _result(8, "(d) branched polymer", bad,
                   "standard |error| " + " < ".join(_fmt(e, 4) + "%" for e in errs) + f"; {msg}")


def check_convergent_family(ov):
    bad, shown = [], []
    for pid in ("mittag_leffler", "wilson_loop", "error_function", "debye", "connected_moments"):
        ok, msg = _converges(ov, pid)
        shown.append(msg)
        if not ok:
            bad.append(msg)
    return _result(8, "(e) corrected convergence", bad, "; ".join(shown))


# -- 9 property suites -------------------------------------------------------


def check_exact_identity(ov):
    bad = []
    for pid, p in sorted(corpus.registry().items()):
        p = ov.get(pid)
        if p.closed_form is None or p.exact_kind != "exact":
            continue
        seq = scheme.corrected_amplitudes(p, scheme.exact_control(p), IDENTITY_ORDER)
        exact = p.exact_amplitude()
        for e in seq.valid_entries():
            if abs(e.amplitude / exact - 1) > mp.mpf("1e-8"):
                bad.append(f"{pid} n={e.n}: {_fmt(e.amplitude)}")
    return _result(9, "exact-control identity", bad, "A_n = A_exact on all closed-form problems")


def check_random_pade(ov, count: int = 100, seed: int = 20240611):
    rng = random.Random(seed)
    bad = 0
    with mp.workdps(50):
        for _ in range(count):
            n, m = rng.randint(0, 5), rng.randint(0, 5)
            f = PowerSeries([mp.mpf(rng.uniform(-2, 2)) for _ in range(n + m + 1)])
            P = pade_fit(f, n, m)
            if not P.valid:
                continue
            diff = P.to_series(n + m) - f
            if max(abs(c) for c in diff) > mp.mpf(10) ** -30:
                bad += 1
    return _result(9, "Padé accuracy-through-order", [f"{bad} fits fail"] if bad else [],
                   f"{count} random series")


def check_pow_roundtrip(ov, count: int = 50, seed: int = 7):
    rng = random.Random(seed)
    bad = 0
    with mp.workdps(50):
        for _ in range(count):
            f = PowerSeries([1] + [mp.mpf(rng.uniform(-1, 1)) for _ in range(10)])
            p = mp.mpf(rng.choice([-3, -1, 1, 2, 3])) / rng.choice([1, 2, 3, 7])
            back = series_pow(series_pow(f, p), 1 / p)
            if max(abs(a - b) for a, b in zip(back, f)) > mp.mpf(10) ** -35:
                bad += 1
    return _result(9, "series_pow round-trip", [f"{bad} round-trips fail"] if bad else [],
                   f"{count} random series")


def check_root_reexpansion(ov):
    bad = []
    with mp.workdps(50):
        for pid in CONTROL_PROBLEMS:
            p = ov.get(pid)
            k = p.control.k
            h = corpus.working_series(p, k)
            r = build_iterated_root(h, p.alpha, p.s, k, p.var_map)
            back = root_to_series(r, k)
            if max(abs(a - b) for a, b in zip(back, h)) > mp.mpf(10) ** -35 * max(abs(c) for c in h):
                bad.append(pid)
    return _result(9, "root re-expansion through order k", bad, "all controls")


@dataclass(frozen=True)
class Check:
    criterion: int
    groups: tuple
    run: Callable


CHECKS = [
    Check(1, ("quartic", "quartic_oscillator"), check_quartic_standard),
    Check(1, ("quartic", "quartic_oscillator"), check_quartic_corrected),
    Check(1, ("quartic", "quartic_oscillator"), check_quartic_errors),
    Check(2, ("scattering",), check_scattering_sequence),
    Check(2, ("scattering",), check_scattering_error),
    Check(2, ("scattering",), check_scattering_roots),
    Check(3, ("schwinger",), check_schwinger),
    Check(4, ("bose", "bose_O1", "bose_O2", "bose_O4"), check_bose),
    Check(5, ("hard_sphere",), check_hard_sphere),
    Check(6, ("membrane",), check_membrane),
    Check(7, ("controls",), check_controls),
    Check(7, ("controls", "branched_polymer"), check_factor),
    Check(8, ("pathology", "correlation"), check_correlation),
    Check(8, ("pathology", "particle_in_box"), check_particle_in_box),
    Check(8, ("pathology", "generating_function"), check_generating_function),
    Check(8, ("pathology", "branched_polymer"), check_branched_polymer),
    Check(8, ("pathology", "mittag_leffler", "wilson_loop", "error_function", "debye",
              "connected_moments"), check_convergent_family),
    Check(9, ("properties",), check_exact_identity),
    Check(9, ("properties",), check_random_pade),
    Check(9, ("properties",), check_pow_roundtrip),
    Check(9, ("properties",), check_root_reexpansion),
]


def select(only=None) -> list:
    if not only:
        return list(CHECKS)
    keys = set(only)
    chosen = [c for c in CHECKS if keys & set(c.groups) or str(c.criterion) in keys]
    if not chosen:
        raise KeyError(f"no checks match {sorted(keys)}")
    return chosen


def run_acceptance(only=None, overrides: Overrides | None = None, report=None) -> list:
    ov = overrides or Overrides()
    results = []
    for check in select(only):
        try:
            res = check.run(ov)
        except Exception as exc:  # a crash is a failed fixture, not an aborted run
            res = CheckResult(check.criterion, check.run.__name__, False,
                              f"{type(exc).__name__}: {exc}")
        results.append(res)
        if report:
            report(res)
    return results
