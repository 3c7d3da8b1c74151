"""Lattice bases over Q: exact LLL, max-norm shortest vectors, K_eps tests.

Bases are stored column-wise.  Entries are Fractions; a basis may carry an
``entry_error`` bound when its entries are rational stand-ins for real
numbers (the flow module does this), in which case norms come with an error
bar and threshold tests can be undecidable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DependentColumns, UndecidableAtPrecision

DEFAULT_DELTA = Fraction(99, 100)


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def det(rows):
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    sign, out = 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return sign * out


def gram_det(vectors):
    return det([[_dot(u, v) for v in vectors] for u in vectors])


@dataclass(frozen=True)
class LatticeBasis:
    columns: tuple
    entry_error: Fraction = Fraction(0)

    def __post_init__(self):
        cols = tuple(tuple(Fraction(x) for x in c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "entry_error", Fraction(self.entry_error))
        if not cols or any(len(c) != len(cols) for c in cols):
            raise ValueError("basis must be k columns of length k")

    @property
    def dim(self):
        return len(self.columns)

    @classmethod
    def from_rows(cls, rows, entry_error=0):
        return cls(tuple(zip(*rows)), entry_error)

    @classmethod
    def identity(cls, k):
        return cls(tuple(tuple(int(i == j) for i in range(k)) for j in range(k)))

    def combine(self, coeffs):
        """Lattice vector sum_j coeffs[j] * column_j."""
        k = self.dim
        return tuple(sum((c * col[i] for c, col in zip(coeffs, self.columns)), Fraction(0))
                     for i in range(k))

    def determinant(self):
        return det([list(r) for r in zip(*self.columns)])

    def to_json(self):
        return json.dumps([[f"{x.numerator}/{x.denominator}" for x in c] for c in self.columns])

    @classmethod
    def from_json(cls, text):
        return cls(tuple(tuple(Fraction(x) for x in c) for c in json.loads(text)))


@dataclass(frozen=True)
class SubgroupRep:
    """A discrete subgroup of Z^k given by j independent integer vectors."""

    basis: tuple = field(default_factory=tuple)

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.basis)
        object.__setattr__(self, "basis", vecs)
        if vecs:
            if len({len(v) for v in vecs}) != 1 or len(vecs) > len(vecs[0]):
                raise ValueError("subgroup rank must be between 1 and the ambient dimension")
            if gram_det(vecs) == 0:
                raise DependentColumns("subgroup generators are dependent")

    @property
    def rank(self):
        return len(self.basis)


# -- LLL ---------------------------------------------------------------------


def _gram_schmidt(b):
    k = len(b)
    mu = [[Fraction(0)] * k for _ in range(k)]
    bstar, B = [], []
    for i in range(k):
        v = list(b[i])
        for j in range(i):
            mu[i][j] = _dot(b[i], bstar[j]) / B[j]
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        B.append(_dot(v, v))
        if B[i] == 0:
            raise DependentColumns("basis columns are linearly dependent")
    return mu, B


def lll_with_transform(basis, delta=DEFAULT_DELTA):
    """LLL-reduce; returns (reduced basis, U) with reduced_j = sum_i U[j][i] * old_i."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    b = [list(c) for c in basis.columns]
    k = len(b)
    U = [[int(i == j) for i in range(k)] for j in range(k)]
    mu, B = _gram_schmidt(b)

    def reduce(i, j):
        q = round(mu[i][j])
        if q:
            b[i] = [x - q * y for x, y in zip(b[i], b[j])]
            U[i] = [x - q * y for x, y in zip(U[i], U[j])]
            for l in range(j):
                mu[i][l] -= q * mu[j][l]
            mu[i][j] -= q

    i = 1
    while i < k:
        reduce(i, i - 1)
        if B[i] < (delta - mu[i][i - 1] ** 2) * B[i - 1]:
            m = mu[i][i - 1]
            Bn = B[i] + m * m * B[i - 1]
            mu[i][i - 1] = m * B[i - 1] / Bn
            B[i] = B[i - 1] * B[i] / Bn
            B[i - 1] = Bn
            b[i], b[i - 1] = b[i - 1], b[i]
            U[i], U[i - 1] = U[i - 1], U[i]
            for l in range(i - 1):
                mu[i][l], mu[i - 1][l] = mu[i - 1][l], mu[i][l]
            for r in range(i + 1, k):
                t = mu[r][i]
                mu[r][i] = mu[r][i - 1] - m * t
                mu[r][i - 1] = t + mu[i][i - 1] * mu[r][i]
            i = max(1, i - 1)
        else:
            for l in range(i - 2, -1, -1):
                reduce(i, l)
            i += 1
    return LatticeBasis(tuple(tuple(c) for c in b), basis.entry_error), U


def lll_reduce(basis, delta=DEFAULT_DELTA):
    return lll_with_transform(basis, delta)[0]


def is_lll_reduced(basis, delta=DEFAULT_DELTA):
    mu, B = _gram_schmidt([list(c) for c in basis.columns])
    k = basis.dim
    size = all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(k) for j in range(i))
    lovasz = all(B[i] >= (Fraction(delta) - mu[i][i - 1] ** 2) * B[i - 1] for i in range(1, k))
    return size and lovasz


# -- shortest vectors ---------------------------------------------------------


def _maxnorm(v):
    return max(abs(x) for x in v)


@dataclass(frozen=True)
class ShortestVector:
    vector: tuple
    norm: Fraction
    coefficients: tuple  # w.r.t. the input basis
    error: Fraction  # |computed norm - true norm| bound


def find_shortest(basis, delta=DEFAULT_DELTA):
    """Exact max-norm shortest nonzero vector via LLL + Fincke-Pohst enumeration.

    The Euclidean enumeration radius is sqrt(k) times the best max-norm seen,
    which covers every vector whose max-norm could tie or beat it.  Minimizers
    are sign-normalized (first nonzero input-basis coefficient positive) and
    the lexicographically smallest coefficient vector wins.
    """
    red, U = lll_with_transform(basis, delta)
    b = [list(c) for c in red.columns]
    k = len(b)
    mu, B = _gram_schmidt(b)
    best = min(_maxnorm(c) for c in b)
    bound = [k * best * best]
    winners = []
    x = [0] * k

    def visit(i, partial):
        nonlocal best
        if i < 0:
            if any(x):
                v = [sum(x[j] * b[j][r] for j in range(k)) for r in range(k)]
                m = _maxnorm(v)
                if m < best:
                    best = m
                    bound[0] = k * m * m
                    winners.clear()
                if m == best:
                    winners.append(tuple(x))
            return
        c = -sum((mu[j][i] * x[j] for j in range(i + 1, k)), Fraction(0))
        rem = bound[0] - partial
        if rem < 0:
            return
        r = math.sqrt(float(rem / B[i]))
        lo, hi = math.floor(float(c) - r) - 1, math.ceil(float(c) + r) + 1
        for xi in range(lo, hi + 1):
            d = (xi - c) ** 2 * B[i]
            if partial + d <= bound[0]:
                x[i] = xi
                visit(i - 1, partial + d)
        x[i] = 0

    visit(k - 1, Fraction(0))
    # translate to input-basis coefficients: v = sum_j x_j red_j = sum_j x_j sum_i U[j][i] old_i
    cands = []
    for w in winners:
        coeffs = tuple(sum(w[j] * U[j][i] for j in range(k)) for i in range(k))
        if next(c for c in coeffs if c) < 0:
            coeffs = tuple(-c for c in coeffs)
        cands.append(coeffs)
    coeffs = min(cands)
    vec = basis.combine(coeffs)
    err = basis.entry_error * sum(abs(c) for c in coeffs)
    return ShortestVector(vec, _maxnorm(vec), coeffs, err)


def shortest_vector(basis):
    """(vector, max-norm) of a shortest nonzero lattice vector."""
    sv = find_shortest(basis)
    return sv.vector, sv.norm


def in_K_eps(basis, eps):
    """True iff every nonzero lattice vector has max-norm >= eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    sv = find_shortest(basis)
    if sv.norm - sv.error >= eps:
        return True
    if sv.norm + sv.error < eps:
        return False
    raise UndecidableAtPrecision(
        f"shortest norm {float(sv.norm):.6g} +- {float(sv.error):.3g} straddles eps={float(eps):.6g}"
    )


def subgroup_covolume_sq(g):
    """Squared covolume (Gram determinant); 1 for the zero subgroup."""
    if not g.basis:
        return Fraction(1)
    return gram_det(g.basis)


def subgroup_covolume(g):
    return math.sqrt(subgroup_covolume_sq(g))
