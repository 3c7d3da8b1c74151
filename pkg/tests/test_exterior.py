import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dioexp.errors import (
    DecompositionMismatch,
    DimensionMismatch,
    DomainError,
    GradeOverflow,
)
from dioexp.exterior import (
    Multivector,
    SubspaceSpec,
    act_u,
    contraction_parts,
    exponent_conversion,
    exponent_conversion_inverse,
    inject_fault,
    is_decomposable,
    pi_part,
    rc_norm,
    sigma_j_estimate,
    wedge,
    wedge_all,
)
from dioexp.scalars import RealScalar

e = Multivector.basis


def test_wedge_examples():
    assert wedge(e(2, 1), e(2, 2)) == e(2, 1, 2)
    assert wedge(e(2, 2), e(2, 1)) == e(2, 1, 2).scale(-1)
    assert wedge_all([(3, 4), (1, 2)]) == e(2, 1, 2).scale(2)
    assert wedge(e(3, 1), e(3, 1)) == Multivector(3, {})


def test_wedge_errors():
    with pytest.raises(GradeOverflow):
        wedge(e(2, 1, 2), e(2, 1))
    with pytest.raises(DimensionMismatch):
        wedge(e(2, 1), e(3, 1))


def test_pi_part():
    assert pi_part(e(3, 1, 3)) == e(3, 1, 3)
    assert pi_part(e(3, 1, 2)) == Multivector(3, {})


def test_contraction_parts_examples():
    zero = Multivector(3, {})
    assert contraction_parts(e(3, 1, 3)) == [zero, e(3, 1, 2), zero]
    w = e(4, 1, 2).scale(3) + e(4, 2, 3)
    parts = contraction_parts(w)
    assert all(p == Multivector(4, {}) for p in parts[:3]) and parts[3] == w


def test_act_u_examples():
    y = [Fraction(2, 3), Fraction(-5, 7)]
    w = e(3, 1, 3)
    assert act_u([0, 0], w) == w
    assert act_u(y, w) == w + e(3, 1, 2).scale(y[1])
    top = e(3, 1, 2, 3)
    assert act_u(y, top) == top


def test_act_u_two_paths_random():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 4)
        vecs = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n + 1)]
                for _ in range(rng.randint(1, n + 1))]
        y = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
        act_u(y, wedge_all(vecs))


def test_fault_injection_is_caught():
    with inject_fault("contraction_sign"):
        with pytest.raises(DecompositionMismatch):
            act_u([Fraction(1, 2), Fraction(1, 3)], e(3, 1, 3))
    act_u([Fraction(1, 2), Fraction(1, 3)], e(3, 1, 3))


def test_json_round_trip():
    w = e(4, 1, 3).scale(Fraction(-2, 3)) + e(4, 2, 4)
    assert w.to_json() == '{"1,3": "-2/3", "2,4": "1/1"}'
    assert Multivector.from_json(w.to_json(), 4) == w


def test_mixed_grades_rejected():
    with pytest.raises(ValueError):
        Multivector(3, {(1,): 1, (1, 2): 1})


def test_decomposable():
    assert is_decomposable(wedge_all([(1, 2, 0, 1), (0, 1, 1, 3)]))
    assert not is_decomposable(e(4, 1, 2) + e(4, 3, 4))


def test_rc_norm_hyperplane_formula():
    a = [Fraction(1, 3), Fraction(2, 5)]
    spec = SubspaceSpec.hyperplane(a)
    assert rc_norm(spec, Multivector(3, {})) == 0
    w = e(3, 1, 3).scale(Fraction(1, 2)) + e(3, 2, 3).scale(Fraction(1, 3)) + e(3, 1, 2).scale(Fraction(1, 7))
    C = contraction_parts(w)
    # hyperplane: rows of R are (a_r, e_{r+1}) so RC has entries C_{r+1} + a_r C_1
    expect = max((C[r + 1] + C[0].scale(a[r])).max_norm() for r in range(2))
    assert rc_norm(spec, w) == expect


def test_rc_norm_errors():
    spec = SubspaceSpec.hyperplane([1, 2])
    with pytest.raises(DimensionMismatch):
        rc_norm(spec, e(4, 1))
    with pytest.raises(GradeOverflow):
        rc_norm(spec, e(3, 1, 2, 3))


def test_exponent_conversion_examples():
    w = Fraction(4)
    assert exponent_conversion(w, 2) == w / (2 + w)
    assert exponent_conversion(float("inf"), 3) == Fraction(1, 2)
    with pytest.raises(DomainError):
        exponent_conversion(-1, 2)
    with pytest.raises(DomainError):
        exponent_conversion_inverse(Fraction(1, 2), 3)


@given(st.fractions(min_value=0, max_value=1000), st.integers(1, 6))
def test_exponent_conversion_round_trip(u, j):
    assert exponent_conversion_inverse(exponent_conversion(u, j), j) == u


def test_sigma_j_rejects_bad_rank():
    spec = SubspaceSpec.hyperplane([RealScalar.sqrt(2), RealScalar.sqrt(3)])
    with pytest.raises(ValueError):
        sigma_j_estimate(spec, 3, 10)
    with pytest.raises(ValueError):
        sigma_j_estimate(spec, 0, 10)


def test_hyperplane_lower_sectors_vanish():
    spec = SubspaceSpec.hyperplane([RealScalar.sqrt(2), RealScalar.sqrt(3)])
    assert sigma_j_estimate(spec, 1, 100).value <= 0.05


def test_line_first_sector_vanishes():
    spec = SubspaceSpec.line_r3(RealScalar.sqrt(2), RealScalar.sqrt(3))
    assert sigma_j_estimate(spec, 1, 100).value <= 0.05


def test_subspace_spec_shape_checks():
    with pytest.raises(DimensionMismatch):
        SubspaceSpec(3, 1, ((1, 2),))
    with pytest.raises(DimensionMismatch):
        SubspaceSpec(2, 2, ((1,), (2,), (3,)))
