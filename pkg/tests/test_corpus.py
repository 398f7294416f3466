import json
from fractions import Fraction

import pytest
from mpmath import mp

from scpade import corpus
from scpade.series import PowerSeries, series_pow

CLOSED = sorted(pid for pid, p in corpus.registry().items() if p.closed_form is not None)


def test_quartic_recursion_is_exact():
    got = corpus.quartic_rational_coeffs(6)
    assert got == (Fraction(1, 2), Fraction(3, 4), Fraction(-21, 8), Fraction(333, 16),
                   Fraction(-30885, 128), Fraction(916731, 256), Fraction(-65518401, 1024))


def test_quartic_table_differs_in_one_digit():
    exact = corpus.quartic_coeffs(17)
    table = corpus.quartic_table_coeffs(17)
    diffs = [n for n, (a, b) in enumerate(zip(exact, table)) if a != b]
    assert diffs == [16]
    assert mp.nstr(table[16], 10) == "-8.912102754e+19"


@pytest.mark.parametrize("pid", CLOSED)
def test_series_matches_closed_form(pid):
    p = corpus.get_problem(pid)
    f = corpus.generate_coefficients(p, min(p.max_order, 30))
    x = mp.mpf("0.05")
    # quadrature-defined closed forms cancel near the origin; 1e-25 is still far below truncation
    assert abs(f(x) - p.closed_form(x)) < mp.mpf(10) ** -25


def test_generating_function_formula_against_direct_expansion():
    N = 12
    inner = series_pow(PowerSeries([1, 0, 1] + [0] * (N - 2)), mp.mpf(1) / 2) + PowerSeries.monomial(1, 1, N)
    direct = series_pow(inner, mp.mpf(1) / 3)
    formula = corpus.generating_function_coeffs(N)
    assert all(abs(a - b) < mp.mpf(10) ** -40 for a, b in zip(direct, formula))


def test_particle_in_box_printed_coefficients():
    cs = corpus.particle_in_box_coeffs(6)
    pi = mp.pi
    want = [1, pi**2 / 4, pi**4 / 32, pi**6 / 512, 0, -pi**10 / 131072, 0]
    assert all(abs(a - b) < mp.mpf(10) ** -40 for a, b in zip(cs, want))


def test_debye_uses_bernoulli_with_negative_half():
    cs = corpus.debye_coeffs(3)
    want = [1, mp.mpf(-1) / 4, mp.mpf(1) / 36]
    assert all(abs(a - b) < mp.mpf(10) ** -45 for a, b in zip(cs, want))


def test_hard_sphere_series_in_x():
    cs = corpus.hard_sphere_x_coeffs(2)
    assert cs == [1, 4, 6]  # 1 + 4y + 10y^2 with y = x - x^2 + ...


def test_membrane_is_a_padded_polynomial():
    s = corpus.generate_coefficients("membrane", 9)
    assert s.order == 9 and all(c == 0 for c in s.coeffs[7:])


def test_tabulated_problems_do_not_extend():
    with pytest.raises(corpus.OrderOverflow):
        corpus.generate_coefficients("schwinger", 8)
    with pytest.raises(corpus.OrderOverflow):
        corpus.hard_sphere_x_coeffs(16)


def test_unknown_problem():
    with pytest.raises(corpus.UnknownProblem):
        corpus.get_problem("no_such_problem")


def test_alias():
    assert corpus.get_problem("quartic").id == "quartic_oscillator_table"


@pytest.mark.parametrize("pid", sorted(pid for pid, p in corpus.registry().items() if p.printed_control))
def test_builder_matches_printed_controls(pid):
    corpus.control_for(pid, check=True)


def test_printed_control_mismatch_detected():
    bad = corpus.with_coefficients(corpus.get_problem("debye_huckel"), ["1", "-0.4", "0.1"])
    with pytest.raises(corpus.ControlMismatch):
        corpus.control_for(bad, check=True)


def test_exponent_is_exact():
    p = corpus.get_problem("scattering")
    assert corpus.working_exponent_exact(p) == Fraction(-1, 2)


def test_problem_file_round_trip(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps([
        {"id": "dh_copy", "generator": "builtin:debye_huckel", "alpha": 0, "s": -1, "exact": 2,
         "control": {"kind": "root", "k": 2}},
        {"id": "listed", "coefficients": ["1", "-0.5", "0.25", "-0.125"], "s": "-1",
         "control": {"kind": "root", "k": 1}},
    ]))
    a, b = corpus.load_problem_file(path)
    assert a.exact_amplitude() == 2
    assert corpus.control_for(a).params[0] == corpus.control_for("debye_huckel").params[0]
    assert b.max_order == 3 and corpus.generate_coefficients(b, 3)[3] == mp.mpf("-0.125")
