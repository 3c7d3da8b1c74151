import math
from fractions import Fraction

import pytest

from dioexp.errors import SearchBudgetExceeded
from dioexp.scalars import RealScalar
from dioexp.search import (
    best_approximations,
    matrix_omega_estimate,
    omega_estimate,
    sigma_estimate,
)
from dioexp.tail import tail_limsup

R = RealScalar


def test_sigma_golden():
    assert abs(sigma_estimate([R.golden()], 10 ** 5).value - 1) <= 0.05


def test_sigma_rational_point_flags_infinity():
    est = sigma_estimate([R.rational(1, 3), R.rational(2, 7)], 100)
    assert est.infinite and est.value is None
    assert any(w.q == 21 and w.error == 0 for w in est.witnesses)


def test_sigma_liouville():
    est = sigma_estimate([R.liouville(10, 5)], 10 ** 6)
    assert 4.5 <= est.value <= 5.5


def test_omega_exact_surd_relation():
    # q = (0, 3) kills the linear form exactly
    assert omega_estimate([R.sqrt(2), R.rational(1, 3)], 50).infinite
    assert not sigma_estimate([R.sqrt(2), R.rational(1, 3)], 1000).infinite


def test_omega_equals_sigma_in_one_dimension():
    a = omega_estimate([R.golden()], 10 ** 5).value
    b = sigma_estimate([R.golden()], 10 ** 5).value
    assert a == pytest.approx(b) and abs(a - 1) <= 0.05


def test_omega_rational_relation():
    # sqrt2 + (1 - sqrt2) = 1
    assert omega_estimate([R.sqrt(2), R.quadratic(1, -1, 2)], 50).infinite


def test_omega_dirichlet_floor():
    assert omega_estimate([R.sqrt(2), R.sqrt(3)], 200).value >= 2 - 0.3


def test_matrix_row_and_column_agree_with_vector_routes():
    y = [R.sqrt(2), R.sqrt(3)]
    row = matrix_omega_estimate([y], 200).value
    assert row == pytest.approx(omega_estimate(y, 200).value)
    col = matrix_omega_estimate([[x] for x in y], 2000).value
    assert col == pytest.approx(sigma_estimate(y, 2000).value)


def test_matrix_rational_column():
    A = [[R.rational(1, 2), R.sqrt(2)], [R.rational(1, 5), R.sqrt(3)]]
    assert matrix_omega_estimate(A, 50).infinite


def test_best_approximations_are_fibonacci():
    qs = [w.q for w in best_approximations([R.golden()], 200)]
    fib = [2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
    assert [q for q in qs if q >= 2] == fib
    errs = [w.error for w in best_approximations([R.golden()], 200)]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_best_approximations_rational_terminates():
    ws = best_approximations([R.rational(5, 17)], 1000)
    assert ws[-1].q == 17 and ws[-1].error == 0


def test_budget_exceeded():
    y = [R.sqrt(2), R.sqrt(3), R.sqrt(5), R.sqrt(7)]
    with pytest.raises(SearchBudgetExceeded):
        omega_estimate(y, 10 ** 6)


def test_q_too_small():
    with pytest.raises(ValueError):
        sigma_estimate([R.golden()], 5)


def test_witness_csv_and_json():
    est = sigma_estimate([R.golden()], 100)
    lines = est.witnesses_csv().splitlines()
    assert len(lines) == len(est.witnesses) + 1
    assert '"value"' in est.to_json()


def test_tail_floor_correction():
    # a bounded excess over the Dirichlet line is removed
    logs = [math.log(10 ** k) for k in range(1, 8)]
    st = tail_limsup(logs, [x + 0.8 for x in logs], 1.0)
    assert st.value == pytest.approx(1.0) and st.raw > 1.0
    assert st.floor_excess == pytest.approx(0.8)
    # one witness far below the line shows up
    spike = [x + 0.8 for x in logs]
    spike[-1] = 4 * logs[-1]
    st = tail_limsup(logs, spike, 1.0)
    assert st.value > 3.5 and st.argmax == len(logs) - 1
    # a lone record is measured against the pool, not itself
    lone = tail_limsup(logs[-1:], spike[-1:], 1.0, floor_pool=list(zip(logs, spike)))
    assert lone.value == pytest.approx(st.value)
