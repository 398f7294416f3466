import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from scpade.pade import InsufficientCoefficients
from scpade.selfsim import (
    NegativeBase,
    RootApproximant,
    ShiftedRoot,
    VanishingLinearCoefficient,
    build_factor_approximant,
    build_iterated_root,
    eval_factor,
    eval_root,
    eval_shifted_root,
    factor_amplitude,
    factor_to_series,
    root_amplitude,
    root_to_series,
    shifted_root_to_series,
)
from scpade.series import PowerSeries, series_pow


def close(a, b, tol="1e-35"):
    return all(abs(x - y) <= mp.mpf(tol) * max(1, abs(y)) for x, y in zip(a, b))


def debye_huckel(order):
    return PowerSeries([2 * (-1) ** n / mp.factorial(n + 2) for n in range(order + 1)])


def test_debye_huckel_root_by_hand():
    r = build_iterated_root(debye_huckel(2), 0, -1, 2)
    assert close(r.params, [mp.mpf(1) / 3, mp.mpf(1) / 18])
    # 1 * ((1/3)^2 + 1/18)^(-1/2) = sqrt(6)
    assert abs(root_amplitude(r) - mp.sqrt(6)) < mp.mpf(10) ** -40


def test_first_order_root_is_power_law():
    r = build_iterated_root(PowerSeries([2, 3]), 0, mp.mpf(1) / 2, 1)
    # 2 (1 + A1 x)^(1/2) with A1/2 = 3/2
    assert r.params == (3,)
    assert abs(root_amplitude(r) - 2 * mp.sqrt(3)) < mp.mpf(10) ** -40
    assert abs(eval_root(r, 1) - 2 * 2) < mp.mpf(10) ** -40


def test_square_map_halves_the_exponent():
    r = RootApproximant(1, 1, 0, 2, (1, 1), "square")
    assert r.exponent == mp.mpf(-1) / 2
    assert r.powers == (2, mp.mpf(-1) / 4)


@given(st.lists(st.floats(-2, 2, allow_nan=False).filter(lambda v: abs(v) > 1e-3),
                min_size=1, max_size=5),
       st.sampled_from([-1, 2, mp.mpf(1) / 3, mp.mpf(-3) / 2]))
def test_root_reexpands_through_order_k(tail, s):
    f = PowerSeries([mp.mpf("1.5")] + tail)
    k = len(tail)
    r = build_iterated_root(f, 0, s, k)
    assert close(root_to_series(r, k), f, "1e-30")


def test_root_needs_k_coefficients():
    with pytest.raises(InsufficientCoefficients):
        build_iterated_root(PowerSeries([1, 1]), 0, -1, 2)


def test_zero_exponent_is_rejected():
    with pytest.raises(VanishingLinearCoefficient):
        build_iterated_root(PowerSeries([1, 1, 1]), 0, 0, 2)


def test_negative_base_in_amplitude():
    r = RootApproximant(1, 0, -1, 2, (mp.mpf(1), mp.mpf(-2)))
    with pytest.raises(NegativeBase):
        root_amplitude(r)


def synthetic_factor_series(order):
    a = series_pow(PowerSeries([1, 2] + [0] * (order - 1)), mp.mpf(1) / 2)
    b = series_pow(PowerSeries([1, mp.mpf(1) / 2] + [0] * (order - 1)), mp.mpf(-3) / 2)
    return a * b


def test_factor_recovers_known_product():
    fa = build_factor_approximant(synthetic_factor_series(5), 2, -1)
    got = sorted(zip((mp.re(b) for b in fa.b), (mp.re(c) for c in fa.c)))
    assert close([v for pair in got for v in pair], [mp.mpf(1) / 2, mp.mpf(-3) / 2, 2, mp.mpf(1) / 2])
    # amplitude of (1+2x)^(1/2) (1+x/2)^(-3/2) is sqrt(2) * 2^(3/2) = 4
    assert abs(factor_amplitude(fa) - 4) < mp.mpf(10) ** -30


def branched(order):
    cs = [mp.mpf(1)]
    for n in range(1, order + 1):
        cs.append(cs[-1] * mp.mpf(-3) / 2 / (n + mp.mpf(1) / 2))
    return PowerSeries(cs)


def test_branched_polymer_factor_pairs():
    fa = build_factor_approximant(branched(3), 2, -1)
    assert all(abs(mp.re(b) - mp.mpf(1) / 7) < mp.mpf(10) ** -30 for b in fa.b)
    assert all(abs(mp.re(c) + mp.mpf(1) / 2) < mp.mpf(10) ** -30 for c in fa.c)
    assert abs(fa.b[0] - mp.conj(fa.b[1])) < mp.mpf(10) ** -30
    # the root with negative imaginary part carries the exponent with negative imaginary part
    for b, c in zip(fa.b, fa.c):
        assert mp.sign(mp.im(b)) == mp.sign(mp.im(c))
    assert close(factor_to_series(fa, 3), branched(3), "1e-30")
    assert mp.im(eval_factor(fa, 2)) == 0


def test_shifted_root():
    sr = ShiftedRoot(mp.mpf(2), mp.mpf(3), mp.mpf(4), mp.mpf(1) / 2)
    assert eval_shifted_root(sr, 0) == 5
    assert eval_shifted_root(sr, 2) == 2 + 3 / mp.mpf(3)
    s = shifted_root_to_series(sr, 2)
    assert close(s, [5, -6, 18])  # (1+4t)^(-1/2) = 1 - 2t + 6t^2
