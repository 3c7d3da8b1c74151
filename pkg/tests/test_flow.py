import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dioexp.errors import ZeroPolynomial
from dioexp.flow import (
    PolynomialMap,
    cusp_measure,
    cusp_profile,
    estimate_gamma,
    g_matrix,
    gamma_to_sigma,
    good_function_profile,
    loglog_slope,
    sigma_to_gamma,
    trace,
    u_matrix,
)
from dioexp.scalars import RealScalar


def test_u_matrix():
    exact = lambda m: [[x.exact() for x in r] for r in m]
    assert exact(u_matrix([RealScalar.rational(0)])) == [[1, 0], [0, 1]]
    m = exact(u_matrix([RealScalar.rational(1, 3), RealScalar.rational(2, 5)]))
    assert [m[i][2] for i in range(3)] == [Fraction(1, 3), Fraction(2, 5), 1]
    phi = u_matrix([RealScalar.golden()])
    assert phi[0][1] == RealScalar.golden()


def test_g_matrix():
    g = g_matrix(math.log(2), 1)
    assert float(g[0][0]) == pytest.approx(2) and float(g[1][1]) == pytest.approx(0.5)
    g = g_matrix(math.log(8), 2)
    # unimodular: e^{t/2} = 2 sqrt 2 on the expanding block
    assert [float(g[i][i]) for i in range(3)] == pytest.approx([2 * math.sqrt(2), 2 * math.sqrt(2), 1 / 8])
    assert [float(g_matrix(0, 3)[i][i]) for i in range(4)] == [1.0] * 4


def test_rational_point_diverges_linearly():
    tr = trace([RealScalar.rational(0)], 20, 1)
    for t, d, _, _ in tr.samples:
        assert d == pytest.approx(t, abs=1e-9)
    g = estimate_gamma(tr)
    assert g.divergent and g.gamma_hat >= 0.99


def test_golden_bounded():
    g = estimate_gamma(trace([RealScalar.golden()], 40))
    assert g.gamma_hat <= 0.1 and not g.divergent


def test_liouville_excursions():
    g = estimate_gamma(trace([RealScalar.liouville(10, 5)], 40))
    assert 0.57 <= g.gamma_hat <= 0.75


def test_gamma_sigma_examples():
    assert gamma_to_sigma(0, 3) == Fraction(1, 3)
    assert gamma_to_sigma(Fraction(1, 2), 1) == 3


@given(st.fractions(min_value=0, max_value=Fraction(99, 100)), st.integers(1, 5))
def test_gamma_sigma_round_trip(gamma, n):
    assert sigma_to_gamma(gamma_to_sigma(gamma, n), n) == gamma


def test_cusp_trivial_cases():
    f = PolynomialMap.monomial_curve(2)
    assert cusp_measure(f, [(0, 1)], 0, Fraction(1, 2), 200, 0)["estimate"] == 0
    c = PolynomialMap.constant([Fraction(1, 3)])
    assert cusp_measure(c, [(0, 1)], 30, Fraction(1, 2), 100, 0)["estimate"] == 1


def test_cusp_decay_small():
    eps = [Fraction(1, 2 ** k) for k in range(1, 7)]
    m = cusp_profile(PolynomialMap.monomial_curve(2), [(0, 1)], 5, eps, 2000, 1)
    assert all(a >= b for a, b in zip(m, m[1:]))
    assert loglog_slope([float(e) for e in eps], m) >= 0.3


def test_good_function_examples():
    assert good_function_profile([0, 1], (0, 1), [0.1])[0][1] == pytest.approx(0.1)
    assert good_function_profile([0, 0, 1], (-1, 1), [0.01])[0][1] == pytest.approx(0.1)
    eps = [2.0 ** -k for k in range(2, 12)]
    prof = good_function_profile([0, -1, 1], (0, 1), eps)
    assert loglog_slope([e for e, _ in prof], [m for _, m in prof]) >= 0.45
    with pytest.raises(ZeroPolynomial):
        good_function_profile([0, 0], (0, 1), [0.1])


def test_trace_csv_header():
    csv = trace([RealScalar.golden()], 4, 1).to_csv()
    assert csv.splitlines()[0].startswith("t,")
