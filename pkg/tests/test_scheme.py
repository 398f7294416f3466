import dataclasses

import pytest
from mpmath import mp

from scpade import corpus, scheme
from scpade.pade import pade_fit, pade_limit
from scpade.selfsim import build_iterated_root
from scpade.series import series_pow

CLOSED = sorted(pid for pid, p in corpus.registry().items()
                if p.closed_form is not None and p.exact_kind == "exact")


def values(seq):
    return {e.n: e.amplitude for e in seq if e.valid}


def test_quartic_corrected_is_monotone_below_exact():
    seq = scheme.corrected_amplitudes("quartic_oscillator_table", None, 9)
    a = [values(seq)[n] for n in range(3, 10)]
    assert all(x <= y for x, y in zip(a, a[1:]))
    assert a[-1] < mp.mpf("0.667986")


def test_corrected_first_order_repeats_control_amplitude():
    seq = scheme.corrected_amplitudes("quartic_oscillator_table", None, 2)
    assert abs(seq.at(1).amplitude - seq.at(0).amplitude) < mp.mpf(10) ** -40
    assert mp.nstr(seq.at(0).amplitude, 6) == "0.572357"


@pytest.mark.parametrize("pid", CLOSED)
def test_exact_control_identity(pid):
    p = corpus.get_problem(pid)
    seq = scheme.corrected_amplitudes(p, scheme.exact_control(p), 8)
    exact = p.exact_amplitude()
    assert len(seq.valid_entries()) == 9
    for e in seq.valid_entries():
        assert abs(e.amplitude / exact - 1) < mp.mpf("1e-8")


@pytest.mark.parametrize("lam", ["3", "0.25"])
def test_scale_covariance(lam):
    lam = mp.mpf(lam)
    p = corpus.get_problem("debye_huckel")
    scaled = corpus.with_coefficients(p, [mp.nstr(lam * c, 60) for c in corpus.debye_huckel_coeffs(12)])
    scaled = dataclasses.replace(scaled, exact=None)
    base = values(scheme.corrected_amplitudes(p, None, 6))
    got = values(scheme.corrected_amplitudes(scaled, None, 6))
    assert base.keys() == got.keys()
    for n in base:
        assert abs(got[n] - lam * base[n]) < mp.mpf(10) ** -30


def test_generating_function_standard_is_stuck_at_one():
    seq = scheme.standard_amplitudes("generating_function", 16)
    assert seq.valid_entries()
    for e in seq:
        assert not e.valid or abs(e.amplitude - 1) < mp.mpf(10) ** -30


def test_particle_in_box_standard_alternates_with_infinity():
    seq = scheme.standard_amplitudes("particle_in_box", 10)
    for e in seq:
        if e.n % 2:
            assert not e.valid and e.amplitude is None and e.percent_error is None
        else:
            assert abs(e.amplitude - mp.pi**2 / 256) < mp.mpf(10) ** -30


def test_integer_exponent_matches_power_transform():
    # for e = -1 the transform T = f and w T_{n-1/n} is f_{n-1/n} with a shifted numerator
    p = corpus.get_problem("debye_huckel")
    seq = scheme.standard_amplitudes(p, 5)
    f = corpus.generate_coefficients(p, 9)
    T = series_pow(f, 1)
    for n in range(1, 6):
        P = pade_fit(T.truncate(2 * n - 1), n - 1, n)
        L = pade_limit(dataclasses.replace(P, num=(0,) + P.num))
        assert abs(seq.at(n).amplitude - L) < mp.mpf(10) ** -30


def test_orders_subset_matches_full_run():
    full = scheme.corrected_amplitudes("wilson_loop", None, 10)
    part = scheme.corrected_amplitudes("wilson_loop", None, 10, orders=[4, 10])
    assert [e.n for e in part] == [4, 10]
    assert part.at(10) == full.at(10) and part.at(4) == full.at(4)


def test_error_table():
    seq = scheme.AmplitudeSequence([scheme.Entry(1, mp.mpf(2)), scheme.Entry(2, None, False)],
                                   "standard", "t")
    out = scheme.error_table(seq, 2)
    assert out.at(1).percent_error == 0
    assert out.at(2).percent_error is None
    assert scheme.error_table(seq, 4).at(1).percent_error == -50
    with pytest.raises(ValueError):
        scheme.error_table(seq, 0)


def test_mismatched_control_exponent():
    p = corpus.get_problem("debye_huckel")
    K = build_iterated_root(corpus.working_series(p, 2), 0, -2, 2)
    with pytest.raises(scheme.AmplitudeMismatch):
        scheme.corrected_amplitudes(p, K, 2)


def test_zero_exponent_without_finite_limit():
    with pytest.raises(scheme.ZeroExponent):
        scheme.standard_amplitudes("connected_moments", 3, finite_limit=False)
    assert scheme.standard_amplitudes("connected_moments", 3).valid_entries()


def test_scattering_sequence_is_root_amplitudes():
    seq = scheme.corrected_amplitudes("scattering", None, 4)
    assert [e.n for e in seq] == [1, 2, 3, 4]
    assert abs(seq.at(1).amplitude - mp.mpf(1) / 9 * mp.sqrt(mp.mpf(15) / 2)) < mp.mpf(10) ** -40


def test_hard_sphere_reproduces_inputs_and_predicts():
    eos = scheme.hard_sphere_eos(10)
    B = corpus.virial_coefficients()
    for i in range(11):
        assert abs(eos.virials[i] - B[i]) < mp.mpf(10) ** -30 * B[i]
    assert sorted(eos.predicted) == [12, 13, 14, 15, 16]
    assert max(abs(v) for v in eos.relative_errors.values()) <= mp.mpf("0.025")
    y = mp.mpf("0.01")
    assert abs(eos(y) - sum(b * y**i for i, b in enumerate(eos.virials))) < mp.mpf(10) ** -12


def test_membrane_pressure():
    res = scheme.membrane_pressure()
    assert abs(res.value - mp.mpf("0.0806")) <= mp.mpf("0.0005")
    assert mp.nstr(res.control.params[2], 6) == "0.00326452"
    # no Padé correction: (pi^2/8) times the control amplitude
    assert abs(res.control_value - mp.mpf("0.0523")) < mp.mpf("0.0005")
