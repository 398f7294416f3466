import random

import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from scpade.pade import (
    INFINITE,
    InsufficientCoefficients,
    PoleAtEvaluationPoint,
    effective_degree,
    pade_eval,
    pade_fit,
    pade_limit,
    solve_dense,
)
from scpade.series import PowerSeries

def exp_series():
    return PowerSeries([1 / mp.factorial(k) for k in range(12)])


def test_exp_one_one():
    P = pade_fit(exp_series(), 1, 1)
    assert P.num == (1, mp.mpf(1) / 2)
    assert P.den == (1, -mp.mpf(1) / 2)
    assert pade_eval(P, 1) == 3


def test_exp_two_two_by_hand():
    # (1 + x/2 + x^2/12) / (1 - x/2 + x^2/12)
    P = pade_fit(exp_series(), 2, 2)
    assert all(abs(a - b) < mp.mpf(10) ** -45 for a, b in zip(P.num, [1, 0.5, mp.mpf(1) / 12]))
    assert all(abs(a - b) < mp.mpf(10) ** -45 for a, b in zip(P.den, [1, -0.5, mp.mpf(1) / 12]))


def test_geometric_series_is_exact():
    P = pade_fit(PowerSeries([1] * 8), 0, 1)
    assert P.den == (1, -1)
    assert pade_limit(P) == 0


def test_limits():
    assert pade_limit(pade_fit(exp_series(), 1, 1)) == -1
    assert pade_limit(pade_fit(exp_series(), 2, 1)) is INFINITE
    assert pade_limit(pade_fit(exp_series(), 0, 2)) == 0


def test_pole_is_reported():
    with pytest.raises(PoleAtEvaluationPoint):
        pade_eval(pade_fit(exp_series(), 1, 1), 2)


def test_needs_enough_coefficients():
    with pytest.raises(InsufficientCoefficients):
        pade_fit(PowerSeries([1, 1]), 1, 1)


def test_singular_system_is_flagged_not_raised():
    f = PowerSeries([1, 0, 1])  # [1/1] has a zero Toeplitz matrix
    P = pade_fit(f, 1, 1)
    assert not P.valid
    assert not pade_fit(f, 1, 1, block=True).valid


def test_block_reduction_to_lower_entry():
    f = PowerSeries([2, 0, 0, 0, 0])
    P = pade_fit(f, 2, 2, block=True)
    assert P.valid and P.reduced_from == (0, 0)
    assert pade_limit(P) == 2


def test_dense_solver_detects_singularity():
    assert solve_dense([[1, 2], [2, 4]], [1, 2]) is None
    assert solve_dense([[2, 1], [1, 3]], [3, 5]) == [mp.mpf(4) / 5, mp.mpf(7) / 5]


def test_effective_degree_trims_noise():
    assert effective_degree([1, 2, mp.mpf(10) ** -40]) == 1
    assert effective_degree([0, 0]) == -1


def test_accuracy_through_order_on_random_series():
    rng = random.Random(1)
    checked = 0
    for _ in range(100):
        n, m = rng.randint(0, 5), rng.randint(0, 5)
        f = PowerSeries([mp.mpf(rng.uniform(-2, 2)) for _ in range(n + m + 1)])
        P = pade_fit(f, n, m)
        if not P.valid:
            continue
        checked += 1
        diff = P.to_series(n + m) - f
        assert max(abs(c) for c in diff) < mp.mpf(10) ** -30
    assert checked > 90


@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=4),
       st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=4))
def test_rational_function_is_recovered(a, b):
    num = PowerSeries([1] + a)
    den = PowerSeries([1] + b)
    n, m = len(a), len(b)
    order = n + m + 2
    series = PowerSeries(list(num) + [0] * (order - n)) / PowerSeries(list(den) + [0] * (order - m))
    P = pade_fit(series, n, m, block=True)
    if P.valid:
        diff = P.to_series(order) - series
        assert max(abs(c) for c in diff) < mp.mpf(10) ** -20
