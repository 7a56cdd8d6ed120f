from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaraki import arith
from qaraki.arith import GaussianRational as G

rationals = st.builds(Fraction, st.integers(-60, 60), st.integers(1, 12))
gaussians = st.builds(G, rationals, rationals)


def test_to_rational_accepts_literals():
    assert arith.to_rational("3/4") == arith.mpq(3, 4)
    assert arith.to_rational(" -2 ") == -2
    assert arith.to_rational(Fraction(1, 3)) == arith.mpq(1, 3)


@pytest.mark.parametrize("bad", [0.5, "1/0", "x", "1.5", True, None])
def test_to_rational_rejects(bad):
    with pytest.raises(arith.ExactInputError):
        arith.to_rational(bad)


def test_format_rational():
    assert arith.format_rational(arith.mpq(6, 4)) == "3/2"
    assert arith.format_rational(arith.mpq(4, 2)) == "2"


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a) == 0


@given(gaussians.filter(bool))
def test_inverse_and_conjugate(a):
    assert a * a.inverse() == 1
    assert a / a == 1
    assert (a * a.conjugate()).imag == 0
    assert a * a.conjugate() == a.norm2()
    assert abs(complex(a) - complex(float(a.real), float(a.imag))) == 0


def test_unit_and_hash():
    assert arith.I * arith.I == -1
    assert hash(G(1, 0)) == hash(G("1", "0"))
    assert {G(1, 2), G(1, 2)} == {G(1, 2)}
    assert not arith.ZERO


def test_exact_solve_and_inverse():
    a = arith.asarray([[2, 1], [1, 3]], "exact")
    a[0, 1] = arith.I
    a[1, 0] = -arith.I
    inv = arith.inverse(a)
    assert (a.dot(inv) == arith.eye(2, "exact")).all()
    assert arith.determinant(a) == 5


def test_ldl_pivots_detect_indefinite():
    pos = arith.asarray([[2, 1], [1, 2]], "exact")
    neg = arith.asarray([[1, 2], [2, 1]], "exact")
    assert all(p.real > 0 for p in arith.ldl_pivots(pos))
    assert any(p.real <= 0 for p in arith.ldl_pivots(neg))


def test_float_mode_helpers():
    z = arith.zeros((2, 2), "float64")
    assert z.dtype == complex and arith.is_zero(z)
    assert arith.real_scalar("1/4", "float64") == 0.25
    assert arith.real_scalar("0.25", "float64") == 0.25
    assert arith.max_abs(np.array([1 - 2j])) == pytest.approx(5 ** 0.5)
