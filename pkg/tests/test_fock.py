from fractions import Fraction as F

import pytest

from qboson.fock import (
    BasisMonomial,
    FockVector,
    apply_oscillator,
    apply_shift,
    dbar_of,
    enumerate_basis,
    extract_vacuum,
    parse_monomial,
    vacuum,
    weight_of,
)
from qboson.scalars import ONE, Q, UScalar, qint
from qboson.series import euler_product


def basis_vec(l1, l2, *, a=(), b=()):
    m = BasisMonomial(tuple(sorted(a)), tuple(sorted(b)), int(2 * F(l1)), l2)
    return FockVector.basis(m)


def test_enumerate_degree_zero():
    assert enumerate_basis(0, 0, 0) == [vacuum(0, 0)]


def test_enumerate_degree_one():
    got = enumerate_basis(0, 0, 1)
    assert len(got) == 2
    assert {m.a_parts for m in got} == {(1,), ()}


@pytest.mark.parametrize("l1,l2", [(1, 1), (F(-1, 2), 0)])
def test_enumerate_counts_match_two_colored_partitions(l1, l2):
    # dim of degree d equals the p^d coefficient of 1/(p;p)^2
    pp = euler_product(12, vars=("s",))
    inv2 = (pp * pp).inv()
    for d in range(0, 7):
        assert len(enumerate_basis(l1, l2, d)) == inv2.coeff(2 * d)


def test_oscillator_bracket_a():
    v = apply_oscillator("a", -1, basis_vec(0, 0))
    got = apply_oscillator("a", 1, v)
    expected = qint(2) * qint(F(-1, 2))
    assert got == basis_vec(0, 0).scale(expected)
    # explicitly: -(q + q^-1)/(q^(1/2) + q^(-1/2))
    u = UScalar.u_pow(1)
    assert expected == -(Q + Q.inv()) / (u ** 2 + u ** -2)


def test_oscillator_bracket_b():
    v = apply_oscillator("b", -2, basis_vec(0, 0))
    assert apply_oscillator("b", 2, v) == basis_vec(0, 0).scale(UScalar.from_int(2))


def test_annihilation_on_vacuum():
    assert apply_oscillator("a", 3, basis_vec(5, 2)).is_zero()


def test_oscillator_commutators_on_small_basis():
    cases = [("a", 1, "a", 2), ("a", 1, "b", 1), ("b", 2, "b", 3),
             ("a", -1, "b", 1), ("a", 2, "a", -1)]
    for k1, n1, k2, n2 in cases:
        for d in range(0, 4):
            for m in enumerate_basis(0, 0, d):
                v = FockVector.basis(m)
                ab = apply_oscillator(k1, n1, apply_oscillator(k2, n2, v))
                ba = apply_oscillator(k2, n2, apply_oscillator(k1, n1, v))
                assert ab == ba, (k1, n1, k2, n2, m)


def test_shift_examples():
    assert apply_shift("a", 1, basis_vec(0, 0)) == basis_vec(1, 0)
    assert apply_shift("b", -1, basis_vec(1, 1, b=(1,))) == basis_vec(1, 0, b=(1,))
    v = basis_vec(F(1, 2), -1, a=(2,), b=(1,))
    assert apply_shift("a", -1, apply_shift("a", 1, v)) == v


def test_dbar_values():
    assert dbar_of(vacuum(0, 0)) == 0
    assert dbar_of(vacuum(F(-1, 2), 0)) == F(1, 8)
    m = BasisMonomial((), (1,), 2, 1)
    assert dbar_of(m) == F(-1, 2)


def test_dbar_drops_under_creation():
    m = vacuum(1, 1)
    for k in (1, 2, 3):
        (ma,), = [tuple(apply_oscillator("a", -k, FockVector.basis(m)).terms)]
        assert dbar_of(ma) == dbar_of(m) - k
        (mb,), = [tuple(apply_oscillator("b", -k, FockVector.basis(m)).terms)]
        assert dbar_of(mb) == dbar_of(m) - k


def test_weights_of_highest_weight_vectors():
    w = weight_of(vacuum(0, 0))
    assert (w.c0, w.c1, w.cd) == (F(-1, 2), 0, 0)
    w = weight_of(BasisMonomial((), (1,), 2, 1))
    assert (w.c0, w.c1, w.cd) == (F(-3, 2), 1, F(-1, 2))
    w = weight_of(vacuum(F(-1, 2), 0))
    assert (w.c0, w.c1, w.cd) == (0, F(-1, 2), F(1, 8))
    w = weight_of(vacuum(F(-3, 2), -1))
    assert (w.c0, w.c1, w.cd) == (1, F(-3, 2), F(1, 8))


def test_level_is_minus_half_everywhere():
    for l1, l2 in [(0, 0), (1, 1), (F(-1, 2), 0), (F(-3, 2), -1)]:
        for d in range(0, 4):
            for m in enumerate_basis(l1, l2, d):
                assert weight_of(m).level == F(-1, 2)


def test_extract_vacuum():
    v = basis_vec(0, 0) + basis_vec(0, 0, a=(1,)).scale(UScalar.from_int(3))
    assert extract_vacuum(v, 0, 0) == ONE
    assert extract_vacuum(basis_vec(1, 1, b=(1,)), 1, 1).is_zero()
    assert extract_vacuum(basis_vec(0, -1).scale(Q), 0, -1) == Q


def test_monomial_grammar_roundtrip():
    m = BasisMonomial((1, 2), (3,), 1, -1)
    assert str(m) == "a[-2]a[-1]b[-3]|1/2,-1>"
    assert parse_monomial(str(m)) == m
    assert parse_monomial("|0,0>") == vacuum(0, 0)
