from fractions import Fraction as F

import pytest

from qboson.currents import (
    CurrentExpr,
    CurrentTerm,
    check_ope_formula,
    contraction_series,
    eta_mode,
    generator,
    mode_images,
    mode_support,
    nproduct,
    parse_current,
    qdifference,
    rescale,
    screening_charge,
    x_current,
    x_current_via_qdifference,
    x_mode,
    xi_mode,
)
from qboson.fock import FockVector, enumerate_basis, extract_vacuum, vacuum
from qboson.scalars import ONE, Q, UScalar

U = UScalar.u_pow


def vac(l1, l2):
    return FockVector.basis(vacuum(l1, l2))


# -- structure ---------------------------------------------------------


def test_generator_rejects_unknown_name():
    with pytest.raises(ValueError):
        generator("Yc+")


def test_generator_rejects_nonmonomial_scale():
    with pytest.raises(ValueError):
        generator("Yb+", U(1) + ONE)


def test_nproduct_concatenates_and_distributes():
    e = nproduct(generator("Ya+") + generator("J+"), generator("Yb+"))
    assert len(e.terms) == 2
    assert [f.name for f in e.terms[0].factors] == ["Ya+", "Yb+"]


def test_rescale_roundtrip():
    e = nproduct(generator("Ya+"), generator("Yb+", U(4))).shift_zpow(-4)
    back = rescale(rescale(e, U(2)), U(-2))
    assert back.terms == e.terms


def test_qdifference_on_plain_powers():
    # z -> 1 and z^2 -> (q^(1/2) + q^(-1/2)) z
    z = CurrentExpr((CurrentTerm(ONE, 4, ()),))
    (t,) = qdifference(z).terms
    assert (t.scalar, t.zpow4, t.factors) == (ONE, 0, ())
    z2 = CurrentExpr((CurrentTerm(ONE, 8, ()),))
    (t,) = qdifference(z2).terms
    assert t.zpow4 == 4
    assert t.scalar == U(2) + U(-2)


def test_parse_current_grammar():
    e = parse_current("nprod(Ya+@1, Yb+@q, Yb+@-u^2)")
    (t,) = e.terms
    assert [(f.name, f.csign, f.cuexp) for f in t.factors] == \
        [("Ya+", 1, 0), ("Yb+", 1, 4), ("Yb+", -1, 2)]
    d = parse_current("qdiff(Yb+@q^1/2)")
    assert len(d.terms) == 2


# -- single-current actions --------------------------------------------


def test_screening_charge_examples():
    assert screening_charge(vac(0, 1)) == vac(0, 0)
    assert screening_charge(vac(0, 0)).is_zero()


def test_screening_charge_two_path_cancellation():
    from qboson.fock import apply_oscillator
    v = apply_oscillator("b", -1, vac(1, 1))
    assert screening_charge(v).is_zero()


def test_xi_zero_mode():
    assert xi_mode(0, vac(0, 0)) == vac(0, 1)


def test_ghost_anticommutator_is_identity():
    for l1, l2 in [(0, 0), (1, 1), (F(-1, 2), 0)]:
        for d in range(0, 3):
            for m in enumerate_basis(l1, l2, d):
                v = FockVector.basis(m)
                got = eta_mode(0, xi_mode(0, v)) + xi_mode(0, eta_mode(0, v))
                assert got == v, m


def test_eta_zero_squares_to_zero():
    for d in range(0, 3):
        for m in enumerate_basis(1, 1, d):
            v = FockVector.basis(m)
            assert eta_mode(0, eta_mode(0, v)).is_zero()


def test_mode_support_of_lowering_ghost():
    assert mode_support(generator("Yb-"), vac(0, 0), 2) == [0, 1, 2]
    # over l2 = 1 the zero mode shifts everything down by one
    assert mode_support(generator("Yb-"), vac(0, 1), 2) == [-1, 0, 1]


def test_half_integer_modes_on_half_integer_sector():
    sup = mode_support(generator("Yb-"), vac(0, 0), 1)
    assert all(isinstance(n, F) or isinstance(n, int) for n in sup)
    sup = mode_support(generator("Ya+"), vac(F(-1, 2), 0), 1)
    # zero mode z^(-2 a_0) gives z^(+1) over l1 = -1/2
    assert F(1) in sup and F(2) in sup


# -- contractions ------------------------------------------------------


def test_contraction_of_ghost_pair_is_geometric():
    series, cross4 = contraction_series(generator("Yb+"), generator("Yb-"), 5)
    assert cross4 == -4
    for k in range(0, 6):
        assert series.coeff(k) == ONE


@pytest.mark.parametrize("formula", range(1, 9))
def test_ope_formulas(formula):
    assert check_ope_formula(formula, 8).ok


def test_ope_mutation_fails():
    r = check_ope_formula(4, 4, mutate_bracket=True)
    assert not r.ok
    assert any(f.get("x_exponent") == 0 for f in r.failures)


# -- composition agrees with contraction -------------------------------


def test_ghost_two_point_function():
    # <0,0| Yb+(z) Yb-(w) |0,0> = z^-1 sum_k (w/z)^k
    for k in range(0, 3):
        inner = mode_images(generator("Yb-"), vac(0, 0), [F(k)])[F(k)]
        outer = mode_images(generator("Yb+"), inner, [F(-1 - k)])[F(-1 - k)]
        assert extract_vacuum(outer, 0, 0) == ONE
    inner = mode_images(generator("Yb-"), vac(0, 0), [F(0)])[F(0)]
    outer = mode_images(generator("Yb+"), inner, [F(-2)])[F(-2)]
    assert extract_vacuum(outer, 0, 0).is_zero()


def test_a_type_two_point_function():
    # <0,0| Ya+(z) Ya-(w) |0,0> = z^4 (1 - q^(3/2)x)(1 - q^(1/2)x)
    #                                 (1 - q^(-1/2)x)(1 - q^(-3/2)x)
    series, cross4 = contraction_series(generator("Ya+"), generator("Ya-"), 4)
    assert cross4 == 16
    for k in range(0, 5):
        inner = mode_images(generator("Ya-"), vac(0, 0), [F(k)])[F(k)]
        outer = mode_images(generator("Ya+"), inner, [F(4 - k)])[F(4 - k)]
        got = extract_vacuum(outer, 0, 0)
        assert got == series.coeff(k), k


# -- the raising and lowering currents ---------------------------------


def test_x_mode_degree_shift():
    # x_k raises the grading eigenvalue by k
    from qboson.fock import dbar_of
    for sign in (1, -1):
        for k in (-1, 0, 1):
            img = x_mode(sign, k, vac(0, 0))
            for m in img.terms:
                assert dbar_of(m) == dbar_of(vacuum(0, 0)) + k, (sign, k)


def test_x_plus_difference_form_agrees():
    alt = x_current_via_qdifference()
    main = x_current(1)
    for l1, l2 in [(0, 0), (1, 1)]:
        for n in (F(-2), F(-1), F(0), F(1)):
            a = mode_images(main, vac(l1, l2), [n])[n]
            b = mode_images(alt, vac(l1, l2), [n])[n]
            assert (a - b).is_zero(), (l1, l2, n)


def test_x_minus_on_vacuum_lands_in_shifted_sector():
    # x_0 annihilates the highest weight vector |0,0>; x_{-1} does not
    assert x_mode(-1, 0, vac(0, 0)).is_zero()
    img = x_mode(-1, -1, vac(0, 0))
    assert not img.is_zero()
    for m in img.terms:
        assert (m.l1x2, m.l2) == (-4, -2)
