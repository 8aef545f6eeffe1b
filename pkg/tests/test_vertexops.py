from fractions import Fraction as F

import pytest

from qboson.repcheck import hw_vector
from qboson.scalars import ONE, UScalar
from qboson.vertexops import (
    CONDITIONS,
    VALID_PAIRS,
    VertexPair,
    check_intertwining,
    check_screening_anticommute,
    component_mode,
    component_modes,
    direct_expr,
    normalization_check,
    two_point,
)

ALL_PAIRS = [("I", l, m) for (l, m) in VALID_PAIRS] \
    + [("II", l, m) for (l, m) in VALID_PAIRS]


def test_pair_validation():
    with pytest.raises(ValueError):
        VertexPair("III", 1, 2)
    with pytest.raises(ValueError):
        VertexPair("I", 1, 3)
    p = VertexPair("II", 3, 4)
    assert p.direct_sign == +1
    assert VertexPair("I", 3, 4).direct_sign == -1


def test_direct_expr_cached():
    p = VertexPair("I", 1, 2)
    assert direct_expr(p) is direct_expr(p)
    assert direct_expr(p) is not direct_expr(p, mutate=True)


def test_component_modes_are_integral():
    # even the pairs whose normalization constant carries a half z-power
    # end up acting on integer z-exponents: the constant cancels the
    # half-integer zero-mode contribution
    for kind, l, m in ALL_PAIRS:
        p = VertexPair(kind, l, m)
        for n in component_modes(p, hw_vector(l), 2):
            assert n == int(n), (kind, l, m, n)


@pytest.mark.parametrize("kind,l,m", ALL_PAIRS)
def test_normalization(kind, l, m):
    r = normalization_check(VertexPair(kind, l, m))
    assert r.ok, r.to_json()


@pytest.mark.parametrize("kind", ["I", "II"])
@pytest.mark.parametrize("which", CONDITIONS)
def test_intertwining_first_pair(kind, which):
    r = check_intertwining(VertexPair(kind, 1, 2), which, degree=1, window=1)
    assert r.ok, r.to_json()


@pytest.mark.parametrize("kind,l,m", ALL_PAIRS)
def test_intertwining_defining_commutator(kind, l, m):
    # V9 (type I) / V5 (type II) tie the derived component to the direct
    # one; V4 mixes both components with a z shift
    p = VertexPair(kind, l, m)
    for which in ("V4", "V5", "V9"):
        r = check_intertwining(p, which, degree=1, window=1)
        assert r.ok, (which, r.to_json())


def test_intertwining_mutation_detected():
    p = VertexPair("I", 1, 2)
    r = check_intertwining(p, "B", degree=1, window=1, mutate=True)
    assert not r.ok


@pytest.mark.parametrize("kind,l,m", ALL_PAIRS)
def test_screening_anticommute(kind, l, m):
    r = check_screening_anticommute(VertexPair(kind, l, m), degree=1)
    assert r.ok, r.to_json()


def test_derived_component_is_commutator():
    p = VertexPair("I", 1, 2)
    v = hw_vector(1)
    # the derived component on the highest-weight vector at the leading
    # mode is the target highest-weight vector exactly
    img = component_mode(p, -1, 0, v)
    assert (img - hw_vector(2)).is_zero()


def test_two_point():
    spm, smp, report = two_point(2)
    assert report.ok, report.to_json()
    assert (spm.coeff(0) - ONE).is_zero()
    # first coefficient: (q + q^4 - q^3 - q^6) / (1 - q^4)
    q = UScalar.q_pow(1)
    num = q + q ** 4 - q ** 3 - q ** 6
    den = ONE - q ** 4
    assert (spm.coeff(1) - num / den).is_zero()
    # the off-diagonal partner is the exact (-q) multiple
    for j in range(3):
        assert (smp.coeff(j) + spm.coeff(j) * q).is_zero()
