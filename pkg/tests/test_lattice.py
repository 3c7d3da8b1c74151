import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dioexp.acceptance import _brute_force_norm
from dioexp.errors import DependentColumns
from dioexp.exterior import wedge_all
from dioexp.lattice import (
    LatticeBasis,
    SubgroupRep,
    in_K_eps,
    is_lll_reduced,
    lll_reduce,
    lll_with_transform,
    shortest_vector,
    subgroup_covolume,
    subgroup_covolume_sq,
)


def test_lll_identity_unchanged():
    b = LatticeBasis.identity(3)
    assert lll_reduce(b).columns == b.columns


def test_lll_skewed_basis():
    b = LatticeBasis(((1, 0), (10 ** 6, 1)))
    red = lll_reduce(b)
    assert min(max(abs(x) for x in c) for c in red.columns) == 1
    assert abs(red.determinant()) == 1


def test_lll_random_same_lattice():
    rng = random.Random(3)
    for _ in range(20):
        rows = [[rng.randint(-10, 10) for _ in range(3)] for _ in range(3)]
        b = LatticeBasis.from_rows(rows)
        if b.determinant() == 0:
            continue
        red, U = lll_with_transform(b)
        assert abs(red.determinant()) == abs(b.determinant())
        assert is_lll_reduced(red)
        det_u = LatticeBasis(tuple(tuple(r) for r in U)).determinant()
        assert abs(det_u) == 1


def test_lll_rejects_bad_delta():
    with pytest.raises(ValueError):
        lll_reduce(LatticeBasis.identity(2), Fraction(1, 5))


def test_shortest_trivial():
    assert shortest_vector(LatticeBasis.identity(3))[1] == 1
    v, n = shortest_vector(LatticeBasis(((2, 0), (0, Fraction(1, 2)))))
    assert n == Fraction(1, 2) and tuple(abs(x) for x in v) == (0, Fraction(1, 2))


def test_shortest_matches_brute_force():
    rng = random.Random(11)
    for _ in range(10):
        rows = [[rng.randint(-10, 10) for _ in range(3)] for _ in range(3)]
        b = LatticeBasis.from_rows(rows)
        if b.determinant() == 0:
            continue
        assert shortest_vector(b)[1] == _brute_force_norm(rows)


def test_in_K_eps():
    assert in_K_eps(LatticeBasis.identity(3), 1)
    assert not in_K_eps(LatticeBasis(((2, 0), (0, Fraction(1, 2)))), Fraction(3, 5))
    # u_y Z^2 for rational y stays in K_1
    assert in_K_eps(LatticeBasis(((1, 0), (Fraction(2, 7), 1))), 1)
    with pytest.raises(ValueError):
        in_K_eps(LatticeBasis.identity(2), 0)


def test_covolume_examples():
    assert subgroup_covolume(SubgroupRep(((1, 0, 0), (0, 2, 0)))) == 2
    assert subgroup_covolume(SubgroupRep(())) == 1
    assert subgroup_covolume(SubgroupRep(((3, 4),))) == 5
    with pytest.raises(DependentColumns):
        SubgroupRep(((1, 2, 3), (2, 4, 6)))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=3))
def test_covolume_is_wedge_norm(vectors):
    # Cauchy-Binet: Gram determinant equals the squared Euclidean norm of the wedge
    w = wedge_all(vectors)
    if not w.coeffs:
        with pytest.raises(DependentColumns):
            SubgroupRep(tuple(map(tuple, vectors)))
        return
    assert subgroup_covolume_sq(SubgroupRep(tuple(map(tuple, vectors)))) == w.euclid_norm_sq()


def test_basis_json_round_trip():
    b = LatticeBasis(((1, Fraction(2, 3)), (0, 5)))
    assert LatticeBasis.from_json(b.to_json()) == b
