import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from giantscope._numerics import bose, log_ratio, maximize, rel_entropy, root, saddle_gap

mpmath.mp.dps = 40


@given(st.floats(0.0, 50.0))
def test_log_ratio_matches_mpmath(x):
    ref = 0.0 if x == 0 else float(mpmath.log(x / -mpmath.expm1(-mpmath.mpf(x))))
    assert log_ratio(x) == pytest.approx(ref, rel=1e-13, abs=1e-17)


@given(st.floats(0.0, 50.0))
def test_saddle_gap_matches_mpmath(x):
    with mpmath.workdps(800):
        xm = mpmath.mpf(x)
        ref = 0.0 if x == 0 else float(xm / 2 * mpmath.coth(xm / 2) - 1)
    assert saddle_gap(x) == pytest.approx(ref, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("x", [0.0, 1e-9, 9.99e-4, 1e-3, 0.5, 3.0, -2.0])
def test_bose(x):
    ref = 1.0 if x == 0 else float(mpmath.mpf(x) / mpmath.expm1(x))
    assert bose(x) == pytest.approx(ref, rel=1e-13)


def test_rel_entropy_conventions():
    assert rel_entropy(0.0, 0.0) == 0.0
    assert rel_entropy(0.0, 0.3) == 0.3
    assert rel_entropy(0.2, 0.0) == math.inf
    assert rel_entropy(-0.1, 1.0) == math.inf
    assert rel_entropy(0.4, 0.4) == 0.0


def test_root_requires_bracket():
    assert root(lambda x: x * x - 2, 0.0, 2.0) == pytest.approx(math.sqrt(2), rel=1e-15)
    with pytest.raises(ValueError):
        root(lambda x: x * x + 1, 0.0, 1.0)


def test_maximize_refines_grid():
    val, arg = maximize(lambda x: -(x - 0.123456789) ** 2, 0.0, 1.0, grid=17)
    assert arg == pytest.approx(0.123456789, abs=1e-9)
    assert val == pytest.approx(0.0, abs=1e-15)
