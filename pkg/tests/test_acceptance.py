"""End-to-end acceptance checks, one per numbered criterion.

Each test prints a single machine-greppable line
``criterion N: PASS|FAIL  <summary>  (<seconds>s)`` directly to the
real stdout (bypassing capture) so the run log shows the verdicts even
when everything passes.
"""

import time
from fractions import Fraction as F

from qboson.currents import (
    check_ope_formula,
    mode_images,
    mode_support,
    screening_charge,
    x_current,
    x_current_via_qdifference,
)
from qboson.fock import FockVector
from qboson.repcheck import (
    HW_SECTORS,
    _sector_basis,
    check_drinfeld,
    check_screening,
    clifford_check,
    hw_verify,
    kernel_character,
)
from qboson.scalars import ONE, UScalar
from qboson.series import check_S, check_jacobi_triple_step, check_star_identity
from qboson.vertexops import (
    CONDITIONS,
    VALID_PAIRS,
    VertexPair,
    check_intertwining,
    check_screening_anticommute,
    normalization_check,
    two_point,
)

RELATIONS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7")


def _verdict(number, ok, summary, t0):
    line = (f"criterion {number}: {'PASS' if ok else 'FAIL'}  {summary}"
            f"  ({time.time() - t0:.1f}s)")
    print(line, flush=True)


def test_criterion_1_defining_relations():
    t0 = time.time()
    bad = []
    for sector in HW_SECTORS:
        for rel in RELATIONS:
            report = check_drinfeld(rel, sector, 3, 2)
            if not report.ok:
                bad.append((rel, sector))
    _verdict(1, not bad,
             "R1-R7 on four sectors, degree 3, window 2", t0)
    assert not bad, bad


def test_criterion_2_screening_commutant():
    t0 = time.time()
    report = check_screening(3, 4)
    square_bad = []
    for sector in HW_SECTORS:
        for m in _sector_basis(sector, 5):
            v = FockVector.basis(m)
            if not screening_charge(screening_charge(v)).is_zero():
                square_bad.append(m)
    ok = report.ok and not square_bad
    _verdict(2, ok, "screening commutant |k|<=3 deg<=4, square zero deg<=5",
             t0)
    assert report.ok, report.to_json()
    assert not square_bad, square_bad


def test_criterion_3_ghost_algebra():
    t0 = time.time()
    report = clifford_check(5)
    _verdict(3, report.ok, "ghost zero-mode relations on degree <= 5 bases",
             t0)
    assert report.ok, report.to_json()


def test_criterion_4_kernel_characters():
    t0 = time.time()
    bad = []
    for i in (1, 2, 3, 4):
        _series, report = kernel_character(i, 4, 2)
        if not report.ok:
            bad.append((i, report.to_json()))
    _verdict(4, not bad,
             "kernel dims vs product forms and alternating sums, deg <= 4",
             t0)
    assert not bad, bad


def test_criterion_5_series_identities():
    t0 = time.time()
    reports = [check_star_identity(8)]
    reports += [check_S(l, 8) for l in range(-5, 6)]
    reports += [check_jacobi_triple_step(l, 8) for l in (0, 1, 2)]
    bad = [r.to_json() for r in reports if not r.ok]
    _verdict(5, not bad, "graded series identity, S_l family, triple-product "
                         "step, order 8", t0)
    assert not bad, bad


def test_criterion_6_ope_formulas():
    t0 = time.time()
    bad = []
    for formula in range(1, 9):
        report = check_ope_formula(formula, 8)
        if not report.ok:
            bad.append((formula, report.to_json()))
    _verdict(6, not bad, "eight contraction formulas to order 8", t0)
    assert not bad, bad


def test_criterion_7_highest_weights():
    t0 = time.time()
    bad = [i for i in (1, 2, 3, 4) if not hw_verify(i).ok]
    _verdict(7, not bad, "four highest-weight vectors with exact weights", t0)
    assert not bad, bad


def test_criterion_8_raising_current_builders_agree():
    t0 = time.time()
    main = x_current(1)
    alt = x_current_via_qdifference()
    bad = []
    for sector in HW_SECTORS:
        for m in _sector_basis(sector, 2):
            v = FockVector.basis(m)
            modes = [n for n in mode_support(main, v, 7) if abs(n) <= 2]
            a = mode_images(main, v, modes)
            b = mode_images(alt, v, modes)
            for n in modes:
                if not (a[n] - b[n]).is_zero():
                    bad.append((sector, str(m), n))
    _verdict(8, not bad,
             "difference-operator and contour forms of the raising current "
             "agree, degree <= 2, |k| <= 2", t0)
    assert not bad, bad


def test_criterion_9_intertwining():
    t0 = time.time()
    bad = []
    for kind in ("I", "II"):
        for (lam, mu) in VALID_PAIRS:
            pair = VertexPair(kind, lam, mu)
            for which in CONDITIONS:
                if not check_intertwining(pair, which, 2, 2).ok:
                    bad.append((kind, lam, mu, which))
            if not check_screening_anticommute(pair, 2).ok:
                bad.append((kind, lam, mu, "screening"))
            if not normalization_check(pair).ok:
                bad.append((kind, lam, mu, "normalization"))
    _verdict(9, not bad,
             "V1-V10, (A), (B), screening anticommutation, normalization; "
             "both types, four pairs, degree 2, window 2", t0)
    assert not bad, bad


def test_criterion_10_two_point_function():
    t0 = time.time()
    spm, _smp, report = two_point(3)
    ok = report.ok and spm is not None
    first_ok = False
    if ok:
        q = UScalar.q_pow(1)
        want = q + q ** 4 - q ** 3 - q ** 6
        # the displayed numerator times the Pochhammer step denominator
        first_ok = (spm.coeff(1) * (ONE - q ** 4) - want).is_zero()
    _verdict(10, ok and first_ok,
             "two-point components vanish/pair off and match the product "
             "form through order 3", t0)
    assert report.ok, report.to_json()
    assert first_ok


def test_criteria_all_numbered():
    # guard: the ten criteria above stay in sync with this module
    names = [n for n in globals() if n.startswith("test_criterion_")]
    assert len(names) == 10
