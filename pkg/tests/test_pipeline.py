from fractions import Fraction

from dioexp.exterior import SubspaceSpec
from dioexp.pipeline import sector_height, shape, subspace_sigma
from dioexp.scalars import RealScalar as R


def test_sector_height_fits_cap():
    assert sector_height(10 ** 6, 0) == 10 ** 6
    h = sector_height(10 ** 6, 2, cap=10 ** 4)
    assert (2 * h + 1) ** 2 // 2 <= 10 ** 4 < (2 * h + 3) ** 2 // 2


def test_shapes():
    assert shape(SubspaceSpec.hyperplane([R.sqrt(2), R.sqrt(3)])) == "hyperplane"
    assert shape(SubspaceSpec.line_r3(R.sqrt(2), R.sqrt(3))) == "line_r3"
    assert shape(SubspaceSpec(4, 1, [[1, 2, 3], [4, 5, 6]])) is None


def test_rational_line_flags_infinite_sector():
    rep, _ = subspace_sigma(SubspaceSpec.line_r3(R.rational(1, 3), R.rational(2, 7)), 50)
    assert rep["sigma_L_infinite"] and not rep["bounds_ok"]
    assert rep["sectors"][0]["value"] == 0.0


def test_generic_hyperplane_is_extremal():
    rep, _ = subspace_sigma(SubspaceSpec.hyperplane([R.sqrt(2), R.sqrt(3)]), 200)
    assert rep["sigma_L"] == 0.5 and rep["bounds_ok"]
    assert rep["closed_form"]["sigma_L"] == 0.5
