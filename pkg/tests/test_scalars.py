from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qboson.scalars import ONE, U, ZERO, SpecializationError, UScalar, field_ops, qint

u = U


def test_additive_inverse():
    assert u + (-u) == ZERO
    assert field_ops(u, -u, "add").is_zero()


def test_multiplicative_inverse():
    assert u ** 2 * u ** -2 == ONE
    assert field_ops(u ** 2, u ** -2, "mul") == ONE


def test_division_gives_quantum_two():
    # (u^8 - u^-8)/(u^4 - u^-4) = u^4 + u^-4 = [2] at q = u^4
    got = field_ops(u ** 8 - u ** -8, u ** 4 - u ** -4, "div")
    assert got == u ** 4 + u ** -4
    assert got == qint(2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        field_ops(ONE, ZERO, "div")


def test_qint_basic():
    assert qint(1) == ONE
    assert qint(0) == ZERO
    assert qint(F(-1, 2)) == -ONE / (u ** 2 + u ** -2)


def test_qint_rejects_non_half_integer():
    with pytest.raises(ValueError):
        qint(F(1, 3))


def test_specialize():
    assert (u ** 4 + u ** -4).specialize(1) == 2
    assert qint(2).specialize(2) == F(16) + F(1, 16)
    with pytest.raises(SpecializationError):
        (ONE / (u - 1)).specialize(1)
    with pytest.raises(SpecializationError):
        u.specialize(0)


def test_qint_defining_product():
    qq = u ** 4 - u ** -4
    for twon in range(-12, 13):
        n = F(twon, 2)
        assert qint(n) * qq == u ** (2 * twon) - u ** (-2 * twon)


def test_qint_antisymmetry_and_specialization():
    u0 = F(3, 2)
    for twon in range(-12, 13):
        n = F(twon, 2)
        assert qint(-n) == -qint(n)
        expected = (u0 ** (2 * twon) - u0 ** (-2 * twon)) / (u0 ** 4 - u0 ** -4)
        assert qint(n).specialize(u0) == expected


_scalars = st.builds(
    lambda c, e, d: UScalar.from_fraction(F(c, d)) * UScalar.u_pow(e)
    + UScalar.from_fraction(F(e, 1)),
    st.integers(-6, 6), st.integers(-4, 4), st.integers(1, 5),
)


@given(_scalars, _scalars, _scalars)
@settings(max_examples=60, deadline=None)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    if not a.is_zero():
        assert a * a.inv() == ONE


@given(_scalars)
@settings(max_examples=40, deadline=None)
def test_render_parse_roundtrip(a):
    assert UScalar.parse(str(a)) == a
