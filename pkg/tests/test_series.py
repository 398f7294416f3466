import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from scpade.series import (
    NonpositiveConstantTerm,
    PowerSeries,
    SeriesError,
    ZeroConstantDivisor,
    compose_into,
    digits_for_order,
    series_inv,
    series_pow,
)

coeff = st.floats(min_value=-3, max_value=3, allow_nan=False)


def close(a, b, tol="1e-40"):
    return all(abs(x - y) <= mp.mpf(tol) * max(1, abs(y)) for x, y in zip(a, b))


@pytest.mark.parametrize("p", [mp.mpf(1) / 3, mp.mpf(-3) / 2, 5, mp.mpf("0.7")])
def test_pow_matches_binomial(p):
    f = PowerSeries([1, 1, 0, 0, 0, 0, 0])
    g = series_pow(f, p)
    assert close(g, [mp.binomial(p, k) for k in range(7)])


def test_pow_scales_constant_term():
    g = series_pow(PowerSeries([4, 4, 1]), mp.mpf(1) / 2)  # sqrt((2 + x)^2)
    assert close(g, [2, 1, 0])


def test_integer_power_of_negative_constant():
    g = series_pow(PowerSeries([-1, 1, 0, 0]), 3)
    assert close(g, [-1, 3, -3, 1])


def test_nonpositive_constant_rejected():
    with pytest.raises(NonpositiveConstantTerm):
        series_pow(PowerSeries([-1, 1]), mp.mpf(1) / 2)
    with pytest.raises(NonpositiveConstantTerm):
        series_pow(PowerSeries([0, 1]), 2)


def test_division_by_zero_constant():
    with pytest.raises(ZeroConstantDivisor):
        PowerSeries([1, 1]) / PowerSeries([0, 1])


def test_binary_ops_truncate_to_shorter():
    f = PowerSeries([1, 2, 3, 4])
    g = PowerSeries([1, 1])
    assert (f * g).order == 1
    assert (f + g).order == 1


@given(st.lists(coeff, min_size=1, max_size=10))
def test_inverse_is_reciprocal(tail):
    f = PowerSeries([1] + tail)
    one = f * series_inv(f)
    assert close(one, [1] + [0] * len(tail), "1e-35")


@given(st.lists(coeff, min_size=1, max_size=10),
       st.sampled_from([mp.mpf(1) / 3, mp.mpf(-1) / 2, mp.mpf(5) / 7, 2, -3]))
def test_pow_round_trip(tail, p):
    f = PowerSeries([1] + tail)
    back = series_pow(series_pow(f, p), 1 / mp.mpf(p))
    assert close(back, f, "1e-30")


@given(st.lists(coeff, min_size=1, max_size=8), st.lists(coeff, min_size=1, max_size=8))
def test_pow_is_multiplicative(a, b):
    n = min(len(a), len(b))
    f, g = PowerSeries([1] + a[:n]), PowerSeries([1] + b[:n])
    p = mp.mpf(2) / 5
    assert close(series_pow(f * g, p), series_pow(f, p) * series_pow(g, p), "1e-30")


def test_log_of_exponential():
    f = PowerSeries([1 / mp.factorial(k) for k in range(8)])
    assert close(f.log(), [0, 1] + [0] * 6)


def test_compose_geometric_into_shift():
    # 1/(1 - y) with y = x/(1 + x) is 1 + x
    geo = PowerSeries([1] * 6)
    inner = PowerSeries([0] + [(-1) ** (k + 1) for k in range(1, 6)])
    assert close(compose_into(geo, inner), [1, 1, 0, 0, 0, 0])


def test_shift_and_even_part():
    f = PowerSeries([0, 2, 0, 3, 0])
    assert f.shift_down(1).coeffs == PowerSeries([2, 0, 3, 0]).coeffs
    assert f.shift_down(1).even_part().coeffs == PowerSeries([2, 3]).coeffs
    with pytest.raises(SeriesError):
        f.even_part()
    with pytest.raises(SeriesError):
        PowerSeries([1, 0]).shift_down(1)


def test_horner_evaluation():
    assert PowerSeries([1, 2, 3])(mp.mpf(2)) == 17


def test_precision_grows_with_order():
    assert digits_for_order(1) >= 30
    assert digits_for_order(200) == 810
