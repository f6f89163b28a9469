import math
from fractions import Fraction

from hypothesis import given, strategies as st
from mpmath import iv

from ballcover.bounds import (E_UPPER, enclose, exact_ceil, exceeds_e_times, floor_e_times, ivq,
                              lower_bound, upper_bound)


def test_e_upper_is_an_upper_bound():
    lo, hi = enclose(lambda: iv.e)
    assert lo < hi < E_UPPER
    assert E_UPPER - hi < Fraction(1, 1000)


def test_floor_e_times_known_values():
    assert floor_e_times(1) == 2
    assert floor_e_times(54) == 146
    assert floor_e_times(9) == 24
    assert floor_e_times(0) == 0


@given(st.fractions(min_value=0, max_value=500, max_denominator=50))
def test_floor_e_times_matches_float(coef):
    value = float(coef) * math.e
    if abs(value - round(value)) > 1e-6:
        assert floor_e_times(coef) == math.floor(value)


def test_exceeds_e_times():
    assert exceeds_e_times(Fraction(2719, 1000), 1)
    assert not exceeds_e_times(Fraction(2718, 1000), 1)
    assert exceeds_e_times(1, 0) and not exceeds_e_times(0, 0)


def test_bounds_bracket_log():
    lo = lower_bound(lambda: iv.log(ivq(Fraction(55, 3))))
    hi = upper_bound(lambda: iv.log(ivq(Fraction(55, 3))))
    assert lo <= Fraction(math.log(55 / 3)) <= hi or hi - lo < Fraction(1, 10**20)
    assert exact_ceil(lambda: 8 * ivq(Fraction(5, 3)) * iv.log(ivq(Fraction(55, 3)))) == 39
