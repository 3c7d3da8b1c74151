"""sigma(L) for an affine subspace from its sector exponents, with cross-checks."""

from __future__ import annotations

import math
from fractions import Fraction

from .exterior import NODE_CAP, SubspaceSpec, _layout, sigma_j_estimate
from .formulas import (
    ExtendedExponent,
    bounds_check,
    hyperplane_sigma,
    line_r3_sigma,
    sigma_L_from_sigmas,
)
from .search import matrix_omega_estimate, omega_estimate, sigma_estimate


def sector_height(H, free, cap=NODE_CAP):
    """Largest h <= H whose half box of free coordinates fits under cap."""
    if free == 0:
        return H
    h = min(H, int((2 * cap) ** (1 / free) - 1) // 2)
    while h > 2 and ((2 * h + 1) ** free) // 2 > cap:
        h -= 1
    return max(h, 2)


def _is_zero(x):
    return x.is_rational and x.exact() == 0


def shape(spec):
    """'hyperplane', 'line_r3' or None."""
    if spec.s == spec.n - 1:
        return "hyperplane"
    if spec.n == 3 and spec.s == 1 and all(_is_zero(x) for x in spec.A[1]):
        return "line_r3"
    return None


def subspace_sigma(spec, H, progress=None):
    """Run every sector j = 1..n, combine them, and compare with any closed form."""
    sectors = []
    for j in range(1, spec.n + 1):
        free = len(_layout(spec, j).free)
        h = sector_height(H, free)
        if progress:
            progress(f"sector j={j}: {free} free coordinates, height {h}")
        sectors.append(sigma_j_estimate(spec, j, h))
    vals = [ExtendedExponent.inf() if e.infinite else ExtendedExponent.of(e.value) for e in sectors]
    sigma_L = sigma_L_from_sigmas(vals, spec.n)
    report = {
        "n": spec.n,
        "s": spec.s,
        "H": H,
        "sectors": [{"j": j + 1, "height": e.Q, "value": None if e.infinite else e.value,
                     "infinite": e.infinite, "n_witnesses": len(e.witnesses)}
                    for j, e in enumerate(sectors)],
        "sigma_L": float(sigma_L),
        "sigma_L_infinite": sigma_L.is_inf,
        "bounds_ok": bounds_check(sigma_L, spec.n, spec.s),
    }
    kind = shape(spec)
    report["shape"] = kind
    if kind == "hyperplane":
        # omega of the column a^T is a simultaneous problem in one variable
        est = matrix_omega_estimate([list(r) for r in spec.A], max(H, 10))
        w = ExtendedExponent.inf() if est.infinite else ExtendedExponent.of(est.value)
        report["closed_form"] = {"omega_a": float(w), "sigma_L": float(hyperplane_sigma(w, spec.n))}
    elif kind == "line_r3":
        y = list(spec.A[0])
        s_est = sigma_estimate(y, max(H, 10))
        o_est = omega_estimate(y, max(min(H, 300), 10))
        s = ExtendedExponent.inf() if s_est.infinite else ExtendedExponent.of(s_est.value)
        o = ExtendedExponent.inf() if o_est.infinite else ExtendedExponent.of(o_est.value)
        report["closed_form"] = {"sigma_y": float(s), "omega_y": float(o),
                                 "sigma_L": float(line_r3_sigma(s, o, check=False))}
    if "closed_form" in report and math.isfinite(report["sigma_L"]):
        report["closed_form"]["abs_diff"] = abs(report["sigma_L"] - report["closed_form"]["sigma_L"])
    return report, sectors
