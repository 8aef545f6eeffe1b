from fractions import Fraction as F

import pytest

from qboson.fock import FockVector, vacuum
from qboson.repcheck import (
    ACTION,
    HW_SECTORS,
    check_drinfeld,
    check_screening,
    clifford_check,
    hw_vector,
    hw_verify,
    k_action,
    kernel_character,
    kernel_dimension,
    kernel_dimension_alternating,
    matrix_rank,
    screening_matrix,
)
from qboson.scalars import ONE, UScalar, ZERO, qint


def vac(l1, l2):
    return FockVector.basis(vacuum(l1, l2))


def test_unknown_relation_rejected():
    with pytest.raises(ValueError):
        check_drinfeld("R9", (0, 0), 1, 1)


@pytest.mark.parametrize("rel", ["R1", "R2", "R3"])
def test_diagonal_relations(rel):
    for sector in [(0, 0), (1, 1), (F(-1, 2), 0)]:
        assert check_drinfeld(rel, sector, 2, 2).ok


def test_r3_matches_quantum_integer_constant():
    # [h_1, h_-1] acts by [2][-1/2]
    from qboson.repcheck import h_mode
    v = vac(0, 0)
    comm = h_mode(1, h_mode(-1, v)) - h_mode(-1, h_mode(1, v))
    assert comm == v.scale(qint(2) * qint(F(-1, 2)))


@pytest.mark.parametrize("rel", ["R4", "R5", "R7"])
def test_current_relations_small(rel):
    assert check_drinfeld(rel, (0, 0), 1, 1).ok
    assert check_drinfeld(rel, (F(-1, 2), 0), 1, 1).ok


def test_r6_small():
    assert check_drinfeld("R6", (1, 1), 1, 1).ok


def test_r7_on_vacuum_mode_zero():
    # [x+_0, x-_0]|0,0> = [a_0]|0,0> = 0
    from qboson.currents import x_mode
    v = vac(0, 0)
    comm = x_mode(1, 0, x_mode(-1, 0, v)) - x_mode(-1, 0, x_mode(1, 0, v))
    assert comm.is_zero()


def test_chevalley_table_consistency():
    # f0 = K x+_{-1} reproduces e0-conjugate grading: weights shift by -alpha0
    from qboson.fock import weight_of
    v = vac(1, 1)
    img = ACTION.apply("f0", v)
    w0 = weight_of(vacuum(1, 1))
    for m in img.terms:
        w = weight_of(m)
        assert (w.c0 - w0.c0, w.c1 - w0.c1) == (-2, 2)
        assert w.cd - w0.cd == -1


def test_t_eigenvalues_on_vacuum():
    v = vac(1, 1)
    assert ACTION.apply("t1", v) == v.scale(UScalar.q_pow(1))
    assert ACTION.apply("t0", v) == v.scale(UScalar.q_pow(F(-3, 2)))


def test_screening_commutant():
    assert check_screening(1, 2).ok


def test_screening_mutation_detected():
    assert not check_screening(1, 1, mutate=True).ok


def test_clifford():
    assert clifford_check(3).ok


def test_matrix_rank_paths():
    one, zero = ONE, ZERO
    u = UScalar.u_pow(1)
    rows = [[one, u], [u, u * u]]
    assert matrix_rank(rows) == 1
    assert matrix_rank(rows, force_symbolic=True) == 1
    rows = [[one, u], [zero, one]]
    assert matrix_rank(rows) == 2
    assert matrix_rank([]) == 0


def test_kernel_dimension_examples():
    assert kernel_dimension(0, 0, 0) == 1
    assert kernel_dimension(0, 0, 1) == 1
    assert kernel_dimension(1, 1, 0) == 0


def test_kernel_dimension_specializations_agree():
    for d in range(0, 4):
        assert kernel_dimension(0, 0, d) == kernel_dimension(
            0, 0, d, force_symbolic=True)


def test_kernel_alternating_sum_matches():
    for (l1, l2) in [(0, 0), (1, 1), (F(-1, 2), 0), (F(-3, 2), -1),
                     (F(-5, 2), -2), (2, 2)]:
        for d in range(0, 5):
            assert kernel_dimension(l1, l2, d) == \
                kernel_dimension_alternating(l1, l2, d), (l1, l2, d)


def test_screening_matrix_shapes():
    rows, src, tgt = screening_matrix(0, 0, 2)
    assert len(rows) == len(src) == 5
    # target degree 2 + 0 - 1 = 1 over (0, -1)
    assert len(tgt) == 2


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_kernel_character(i):
    series, report = kernel_character(i, 4, 2)
    assert report.ok
    assert all(c > 0 for c in series.terms.values())


def test_kernel_character_degree0_dims():
    # degree-0 kernel dims in the four starting sectors: (1, 0, 1, 1);
    # the second sector's lowest kernel vector sits at degree 1
    dims = [kernel_dimension(l1, l2, 0) for (l1, l2) in HW_SECTORS]
    assert dims == [1, 0, 1, 1]


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_hw(i):
    assert hw_verify(i).ok


def test_hw_vector_shapes():
    v = hw_vector(2)
    (m,), = [tuple(v.terms)]
    assert m.b_parts == (1,) and (m.l1x2, m.l2) == (2, 1)
