from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from rhverify.errors import DomainError
from rhverify.ival import Ball, CBall, precision
from rhverify.specfun import (
    digamma,
    digamma_complex,
    digamma_complex_re,
    log_abs_gamma_on_line,
    loggamma_complex,
    polygamma1,
    special_constants,
)

mpmath.mp.dps = 90


def test_digamma_at_one():
    assert digamma(Ball(1)).contains(-mpmath.euler)


def test_digamma_at_half():
    v = digamma(Ball(1) / 2)
    assert v.contains(-2 * mpmath.log(2) - mpmath.euler)
    assert v.contains(special_constants().psi0_half.mid)


def test_digamma_recurrence():
    a = digamma(Ball(3) / 2)
    assert a.overlaps(digamma(Ball(1) / 2) + 2)
    assert a.contains(mpmath.digamma(1.5))


def test_digamma_pole():
    with pytest.raises(DomainError):
        digamma(Ball(-1, 1))


def test_trigamma_values():
    assert polygamma1(Ball(1) / 2).contains(mpmath.pi**2 / 2)
    assert polygamma1(Ball(1) / 2).is_positive()
    assert polygamma1(Ball(1)).contains(mpmath.zeta(2))
    assert polygamma1(Ball(2)).contains(mpmath.zeta(2) - 1)


def test_digamma_complex_real_axis():
    assert digamma_complex_re(CBall(2, 0)).contains(1 - mpmath.euler)


def test_digamma_complex_conjugate_symmetry():
    a = digamma_complex_re(CBall(2, -5))
    b = digamma_complex_re(CBall(2, 5))
    assert a.overlaps(b)
    assert a.contains(mpmath.digamma(mpmath.mpc(2, 5)).real)


def test_digamma_complex_large_height():
    v = digamma_complex_re(CBall(2, -500000))
    assert v.contains(mpmath.digamma(mpmath.mpc(2, -500000)).real)
    assert abs(float(v.mid) - float(mpmath.log(5e5))) < 1e-5


def test_loggamma_special_values():
    assert log_abs_gamma_on_line(Ball(1), Ball(0)).contains(0)
    assert log_abs_gamma_on_line(Ball(1) / 2, Ball(0)).contains(mpmath.log(mpmath.pi) / 2)


def test_loggamma_off_axis():
    t = Ball("7.067")
    v = log_abs_gamma_on_line(Ball(5) / 4, t)
    assert v.is_negative()
    assert v.contains(mpmath.re(mpmath.loggamma(mpmath.mpc(1.25, mpmath.mpf("7.067")))))


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=Fraction(1, 100), max_value=200, max_denominator=1000))
def test_real_functions_against_mpmath(q):
    x = mpmath.mpf(q.numerator) / q.denominator
    assert digamma(Ball(q)).contains(mpmath.digamma(x))
    assert polygamma1(Ball(q)).contains(mpmath.psi(1, x))


@settings(max_examples=150, deadline=None)
@given(
    st.fractions(min_value=Fraction(1, 10), max_value=40, max_denominator=100),
    st.fractions(min_value=-10**4, max_value=10**4, max_denominator=100),
)
def test_complex_functions_against_mpmath(a, b):
    z = mpmath.mpc(mpmath.mpf(a.numerator) / a.denominator, mpmath.mpf(b.numerator) / b.denominator)
    assert digamma_complex(CBall(a, b)).contains(mpmath.digamma(z))
    assert loggamma_complex(CBall(a, b)).contains(mpmath.loggamma(z))


def test_widths_shrink_with_precision():
    with precision(128):
        w128 = digamma(Ball(3) / 7).width
    with precision(384):
        w384 = digamma(Ball(3) / 7).width
    assert w384 < w128 * mpmath.mpf(2) ** -200
